#include "driftwatch/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

namespace {

// Jitter streams must not depend on the data, so fit() stays pure.
constexpr std::uint64_t kJitterSeed = 0x5eedf17ULL;

struct Increments {
    std::vector<double> dx;  // X_i - X_{i-1}
    std::vector<double> xl;  // X_{i-1}
    double h = 0.0;
};

Increments make_increments(const SamplePath& path) {
    path.validate();
    Increments inc;
    inc.h = path.step;
    const std::size_t n = path.n();
    inc.dx.resize(n);
    inc.xl.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        inc.dx[i] = path.values[i + 1] - path.values[i];
        inc.xl[i] = path.values[i];
    }
    return inc;
}

double objective_on(const Increments& inc, const DriftModel& model,
                    std::span<const double> theta, double sigma, double alpha) {
    const std::size_t n = inc.dx.size();
    const double h = inc.h;
    if (alpha > 0.0) {
        const double scale = alpha / (2.0 * sigma * sigma * h);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = inc.dx[i] - model.drift_at(inc.xl[i], theta) * h;
            acc += std::exp(-scale * e * e);
        }
        const double mean_exp = acc / static_cast<double>(n);
        return std::pow(sigma, -alpha) *
               (1.0 / std::sqrt(1.0 + alpha) - (1.0 + 1.0 / alpha) * mean_exp);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = inc.dx[i] - model.drift_at(inc.xl[i], theta) * h;
        acc += e * e;
    }
    return acc / (static_cast<double>(n) * sigma * sigma * h) +
           std::log(sigma * sigma);
}

std::vector<double> moment_start(const Increments& inc, const DriftModel& model) {
    const std::size_t n = inc.dx.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = inc.dx[i] / inc.h;
    std::vector<double> start = model.initial_theta(y, inc.xl);

    double ss = 0.0;
    for (double d : inc.dx) ss += d * d;
    const double sigma0 = std::sqrt(ss / (static_cast<double>(n) * inc.h));
    start.push_back(model.sigma_bounds.clamp(std::isfinite(sigma0) ? sigma0 : 1.0));
    return start;
}

}  // namespace

double mdpde_objective(const DriftModel& model, std::span<const double> theta,
                       double sigma, const SamplePath& path, double alpha) {
    if (theta.size() != model.dim_theta) {
        throw std::invalid_argument("mdpde_objective: theta dimension mismatch");
    }
    if (!(sigma > 0.0)) throw std::domain_error("mdpde_objective: sigma must be > 0");
    if (!(alpha >= 0.0)) throw std::domain_error("mdpde_objective: alpha must be >= 0");
    const Increments inc = make_increments(path);
    return objective_on(inc, model, theta, sigma, alpha);
}

ParamEstimate fit(const DriftModel& model, const SamplePath& path, const MdpdeConfig& cfg) {
    model.validate();
    if (!(cfg.alpha >= 0.0)) throw std::domain_error("fit: alpha must be >= 0");
    if (path.values.size() < model.dim_theta + 2) {
        throw DataError("fit: path too short for the parameter dimension");
    }
    const Increments inc = make_increments(path);
    const std::size_t dim = model.dim_theta + 1;  // theta coordinates plus sigma

    std::vector<Interval> bounds = model.theta_bounds;
    bounds.push_back(model.sigma_bounds);

    auto objective = [&](std::span<const double> p) {
        return objective_on(inc, model, p.first(model.dim_theta), p[model.dim_theta],
                            cfg.alpha);
    };

    // Start 0 is the moment-based initializer; the rest jitter it.
    const std::size_t n_starts =
        static_cast<std::size_t>(std::max(cfg.optimizer.multistart_count, 1));
    std::vector<std::vector<double>> starts;
    starts.reserve(n_starts);
    starts.push_back(moment_start(inc, model));
    Rng jitter(kJitterSeed);
    while (starts.size() < n_starts) {
        std::vector<double> s = starts.front();
        for (std::size_t j = 0; j < dim; ++j) {
            const double z = jitter.normal();
            if (bounds[j].lo > 0.0) {
                s[j] *= std::exp(0.6 * z);  // positive scale coordinates
            } else {
                s[j] += 0.5 * (std::abs(s[j]) + 1.0) * z;
            }
            s[j] = bounds[j].clamp(s[j]);
        }
        starts.push_back(std::move(s));
    }

    bool any_finite = false;
    OptimResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        OptimResult run = nelder_mead(objective, start, bounds, cfg.optimizer);
        if (!std::isfinite(run.value)) continue;
        if (!any_finite || run.value < best.value) {
            best = std::move(run);
            any_finite = true;
        }
    }
    if (!any_finite) {
        throw EstimationError("fit: no start produced a finite objective (alpha=" +
                              std::to_string(cfg.alpha) + ")");
    }

    ParamEstimate est;
    est.theta_hat.assign(best.x.begin(), best.x.end() - 1);
    est.sigma_hat = best.x.back();
    est.alpha = cfg.alpha;
    est.objective_value = best.value;
    est.converged = best.converged;
    est.iterations = best.iterations;
    return est;
}

}  // namespace driftwatch
