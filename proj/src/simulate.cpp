#include "driftwatch/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

SamplePath SamplePath::slice(std::size_t start, std::size_t end) const {
    if (start >= end || end >= values.size()) {
        throw std::invalid_argument("SamplePath::slice: bad range");
    }
    SamplePath out;
    out.step = step;
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(start),
                      values.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    return out;
}

void SamplePath::validate() const {
    if (values.size() < 3) throw DataError("path needs at least 3 observations");
    if (!(step > 0.0)) throw DataError("path step must be positive");
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("path contains a non-finite value");
    }
}

double SimConfig::step_size() const {
    if (h > 0.0) return h;
    if (gamma > 0.0 && n > 0) return std::pow(static_cast<double>(n), -gamma);
    throw std::invalid_argument("SimConfig: need explicit h > 0 or gamma > 0");
}

namespace {

void check_sim_args(const DriftModel& model, std::span<const double> theta, double sigma,
                    const SimConfig& cfg) {
    if (theta.size() != model.dim_theta) {
        throw std::invalid_argument("simulate: theta dimension mismatch");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("simulate: sigma must be finite and >= 0");
    }
    if (cfg.n < 2) throw std::invalid_argument("simulate: need n >= 2");
    if (cfg.substeps < 1) throw std::invalid_argument("simulate: substeps must be >= 1");
    (void)cfg.step_size();
}

// Shared Euler driver. Regimes are (theta, sigma) pairs applied from a given
// generation step onward; regime 0 starts at step 0.
struct Regime {
    std::vector<double> theta;
    double sigma;
    std::size_t from_step;
};

SamplePath run_euler(const DriftModel& model, const std::vector<Regime>& regimes,
                     const SimConfig& cfg) {
    const double h = cfg.step_size();
    const int sub = cfg.substeps;
    const double delta = h / static_cast<double>(sub);
    const double sqrt_delta = std::sqrt(delta);

    SamplePath path;
    path.step = h;
    path.values.reserve(cfg.n + 1);
    path.values.push_back(cfg.x0);
    const bool record_shocks = (sub == 1);
    if (record_shocks) path.shocks.reserve(cfg.n);

    Rng rng(cfg.seed);
    double x = cfg.x0;
    std::size_t regime_idx = 0;
    std::size_t step_index = 0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (int s = 0; s < sub; ++s, ++step_index) {
            while (regime_idx + 1 < regimes.size() &&
                   step_index >= regimes[regime_idx + 1].from_step) {
                ++regime_idx;
            }
            const Regime& reg = regimes[regime_idx];
            const double xi = rng.normal();
            x += model.drift_at(x, reg.theta) * delta + reg.sigma * sqrt_delta * xi;
            if (record_shocks) path.shocks.push_back(xi);
        }
        path.values.push_back(x);
    }
    return path;
}

}  // namespace

SamplePath simulate_path(const DriftModel& model, std::span<const double> theta,
                         double sigma, const SimConfig& cfg) {
    if (!(sigma >= 0.0)) throw std::domain_error("simulate: sigma must be >= 0");
    check_sim_args(model, theta, sigma, cfg);
    std::vector<Regime> regimes{{std::vector<double>(theta.begin(), theta.end()), sigma, 0}};
    return run_euler(model, regimes, cfg);
}

SamplePath simulate_path_with_change(const DriftModel& model,
                                     std::span<const double> theta0, double sigma0,
                                     std::span<const double> theta1, double sigma1,
                                     double change_frac, const SimConfig& cfg) {
    ParamChange change;
    change.frac = change_frac;
    change.theta.assign(theta1.begin(), theta1.end());
    change.sigma = sigma1;
    return simulate_path_piecewise(model, theta0, sigma0, std::span(&change, 1), cfg);
}

SamplePath simulate_path_piecewise(const DriftModel& model,
                                   std::span<const double> theta0, double sigma0,
                                   std::span<const ParamChange> changes,
                                   const SimConfig& cfg) {
    check_sim_args(model, theta0, sigma0, cfg);
    std::vector<Regime> regimes;
    regimes.push_back({std::vector<double>(theta0.begin(), theta0.end()), sigma0, 0});
    const double total_steps = static_cast<double>(cfg.n) * cfg.substeps;
    double prev_frac = 0.0;
    for (const ParamChange& c : changes) {
        if (!(c.frac > 0.0 && c.frac < 1.0)) {
            throw std::invalid_argument("change fraction must be in (0, 1)");
        }
        if (c.frac <= prev_frac) {
            throw std::invalid_argument("change fractions must be strictly increasing");
        }
        prev_frac = c.frac;
        if (c.theta.size() != model.dim_theta) {
            throw std::invalid_argument("change: theta dimension mismatch");
        }
        if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) {
            throw std::domain_error("change: sigma must be finite and >= 0");
        }
        regimes.push_back(
            {c.theta, c.sigma, static_cast<std::size_t>(std::floor(c.frac * total_steps))});
    }
    return run_euler(model, regimes, cfg);
}

SamplePath contaminate(const SamplePath& path, const ContaminationSpec& spec,
                       std::uint64_t seed) {
    if (!(spec.prob >= 0.0 && spec.prob <= 1.0)) {
        throw std::domain_error("contaminate: prob must be in [0, 1]");
    }
    if (!(spec.var_v >= 0.0)) {
        throw std::domain_error("contaminate: var_v must be >= 0");
    }
    SamplePath out;
    out.step = path.step;
    out.values = path.values;
    // shocks no longer describe the perturbed values

    Rng rng(seed);
    const double sd = std::sqrt(spec.var_v);
    for (double& x : out.values) {
        const double u = rng.uniform();
        const double v = sd * rng.normal();
        if (u < spec.prob) {
            const double sign = (x < 0.0) ? -1.0 : 1.0;  // sign(0) := +1
            x += std::abs(v) * sign;
        }
    }
    return out;
}

}  // namespace driftwatch
