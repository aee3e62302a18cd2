#include "driftwatch/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftwatch/errors.hpp"

namespace driftwatch {

std::string TrimSpec::variant_name() const {
    switch (variant) {
        case TrimVariant::None: return "none";
        case TrimVariant::HardClip: return "hard";
        case TrimVariant::Tent: return "tent";
    }
    return "none";
}

double trim_value(const TrimSpec& spec, double x) {
    if (x < 0.0) throw std::domain_error("trim_value: input must be >= 0");
    switch (spec.variant) {
        case TrimVariant::None:
            return x;
        case TrimVariant::HardClip:
            return std::min(x, spec.m);
        case TrimVariant::Tent:
            if (x <= spec.m) return x;
            if (x <= 2.0 * spec.m) return 2.0 * spec.m - x;
            return 0.0;
    }
    return x;
}

ResidualSeries residuals(const DriftModel& model, const SamplePath& path,
                         const ParamEstimate& est) {
    path.validate();
    if (!(est.sigma_hat > 0.0)) throw std::domain_error("residuals: sigma_hat must be > 0");
    if (est.theta_hat.size() != model.dim_theta) {
        throw std::invalid_argument("residuals: theta dimension mismatch");
    }
    const double h = path.step;
    const double denom = std::sqrt(h) * est.sigma_hat;
    ResidualSeries out;
    out.h = h;
    out.estimate = est;
    const std::size_t n = path.n();
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = path.values[i + 1] - path.values[i] -
                         model.drift_at(path.values[i], est.theta_hat) * h;
        out.values[i] = e / denom;
        if (!std::isfinite(out.values[i])) throw DataError("residuals: non-finite value");
    }
    return out;
}

TestOutcome cusum_statistic(std::span<const double> squared_residuals,
                            const TrimSpec& trim) {
    const std::size_t n = squared_residuals.size();
    if (n < 2) throw std::invalid_argument("cusum_statistic: need at least 2 values");
    if (trim.variant != TrimVariant::None && !(trim.m > 0.0)) {
        throw std::domain_error("cusum_statistic: trimming needs m > 0");
    }

    std::vector<double> f(n);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = trim_value(trim, squared_residuals[i]);
        sum += f[i];
        sum_sq += f[i] * f[i];
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double tau_sq = sum_sq / nn - mean * mean;
    if (!(tau_sq > 1e-14 * std::max(1.0, sum_sq / nn))) {
        throw DataError("cusum_statistic: degenerate trimmed-residual scale (tau ~ 0)");
    }
    const double tau = std::sqrt(tau_sq);

    double partial = 0.0;
    double best = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        partial += f[k - 1];
        const double dev = std::abs(partial - (static_cast<double>(k) / nn) * sum);
        if (dev > best) {
            best = dev;
            best_k = k;
        }
    }

    TestOutcome outcome;
    outcome.statistic = best / (std::sqrt(nn) * tau);
    outcome.p_value = bb_sup_tail(outcome.statistic);
    outcome.k_hat = best_k;
    outcome.tau_hat = tau;
    outcome.trim = trim;
    return outcome;
}

double bb_sup_tail(double u) {
    if (!(u > 0.0)) return 1.0;
    if (u < 0.02) return 1.0;  // tail is 1 to well past double precision
    // 2 sum_{k>=1} (-1)^{k+1} exp(-2 k^2 u^2); alternating, so the truncation
    // error is bounded by the first dropped term.
    double tail = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * u * u);
        tail += sign * 2.0 * term;
        sign = -sign;
        if (term < 5e-13) break;
    }
    return std::clamp(tail, 0.0, 1.0);
}

double critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("critical_value: level must be in (0, 1)");
    }
    double lo = 0.02, hi = 10.0;
    // bb_sup_tail decreases in u; find u with tail == level.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (bb_sup_tail(mid) > level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

TestOutcome run_test(const DriftModel& model, const SamplePath& path, double alpha,
                     const TrimSpec& trim, const OptimizerConfig& optimizer) {
    MdpdeConfig cfg;
    cfg.alpha = alpha;
    cfg.optimizer = optimizer;
    const ParamEstimate est = fit(model, path, cfg);
    const ResidualSeries res = residuals(model, path, est);
    std::vector<double> squares(res.values.size());
    for (std::size_t i = 0; i < squares.size(); ++i) {
        squares[i] = res.values[i] * res.values[i];
    }
    TestOutcome outcome = cusum_statistic(squares, trim);
    outcome.alpha = alpha;
    return outcome;
}

namespace {

ParamEstimate refit_segment(const DriftModel& model, const SamplePath& path,
                            std::size_t start, std::size_t end, double alpha,
                            const OptimizerConfig& optimizer) {
    if (end - start + 1 < model.dim_theta + 2 || end - start < 2) return {};
    MdpdeConfig cfg;
    cfg.alpha = alpha;
    cfg.optimizer = optimizer;
    try {
        return fit(model, path.slice(start, end), cfg);
    } catch (const EstimationError&) {
        return {};
    }
}

void segment_recurse(const DriftModel& model, const SamplePath& path, double alpha,
                     const TrimSpec& trim, double level, std::size_t min_segment,
                     const OptimizerConfig& optimizer, std::size_t start, std::size_t end,
                     SegmentationResult& result) {
    const std::size_t n_seg = end - start;  // residual count on [start, end]
    if (n_seg >= min_segment) {
        const TestOutcome outcome =
            run_test(model, path.slice(start, end), alpha, trim, optimizer);
        if (outcome.p_value < level) {
            const std::size_t k = outcome.k_hat;  // local, in [1, n_seg]
            if (k >= min_segment && n_seg - k >= min_segment) {
                const std::size_t cp = start + k;
                result.change_points.push_back(cp);
                segment_recurse(model, path, alpha, trim, level, min_segment, optimizer,
                                start, cp, result);
                segment_recurse(model, path, alpha, trim, level, min_segment, optimizer,
                                cp, end, result);
                return;
            }
        }
    }
    result.segments.push_back(
        {start, end, refit_segment(model, path, start, end, alpha, optimizer)});
}

}  // namespace

SegmentationResult binary_segmentation(const DriftModel& model, const SamplePath& path,
                                       double alpha, const TrimSpec& trim, double level,
                                       std::size_t min_segment,
                                       const OptimizerConfig& optimizer) {
    path.validate();
    if (min_segment < model.dim_theta + 2) {
        throw std::invalid_argument("binary_segmentation: min_segment must be >= dim_theta + 2");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("binary_segmentation: level must be in (0, 1)");
    }
    SegmentationResult result;
    result.level = level;
    segment_recurse(model, path, alpha, trim, level, min_segment, optimizer, 0, path.n(),
                    result);
    std::sort(result.change_points.begin(), result.change_points.end());
    std::sort(result.segments.begin(), result.segments.end(),
              [](const Segment& a, const Segment& b) { return a.start < b.start; });
    return result;
}

}  // namespace driftwatch
