#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/estimate.hpp"
#include "driftwatch/model.hpp"
#include "driftwatch/simulate.hpp"

namespace driftwatch {

enum class TrimVariant { None, HardClip, Tent };

// Trimming applied to squared residuals. HardClip caps at m; Tent descends
// linearly from m to zero on (m, 2m] and is zero beyond.
struct TrimSpec {
    TrimVariant variant = TrimVariant::None;
    double m = 0.0;  // truncation constant, > 0 when variant != None

    static TrimSpec none() { return {TrimVariant::None, 0.0}; }
    static TrimSpec hard_clip(double m) { return {TrimVariant::HardClip, m}; }
    static TrimSpec tent(double m) { return {TrimVariant::Tent, m}; }

    std::string variant_name() const;
};

// Default truncation constants: squared 99.5% and 97.5% normal quantiles.
inline constexpr double kTrimM005 = 6.63;  // z_{0.005}^2
inline constexpr double kTrimM025 = 3.84;  // z_{0.025}^2

// f_{j,M} evaluated at x >= 0; throws std::domain_error on negative input.
double trim_value(const TrimSpec& spec, double x);

// Standardized one-step innovations computed from an estimate:
//   Z_i = (X_i - X_{i-1} - a(X_{i-1}, theta_hat) h) / (sqrt(h) sigma_hat).
struct ResidualSeries {
    std::vector<double> values;  // Z_1..Z_n
    double h = 0.0;
    ParamEstimate estimate;
};

ResidualSeries residuals(const DriftModel& model, const SamplePath& path,
                         const ParamEstimate& est);

struct TestOutcome {
    double statistic = 0.0;   // CUSUM-of-squares value
    double p_value = 1.0;     // bb_sup_tail(statistic)
    std::size_t k_hat = 0;    // smallest maximizing index, in [1, n]
    double tau_hat = 0.0;     // normalizing scale
    TrimSpec trim;
    double alpha = 0.0;
};

// CUSUM of (trimmed) squared residuals:
//   T = max_k | sum_{i<=k} f(s_i) - (k/n) sum_{i<=n} f(s_i) | / (sqrt(n) tau)
// where s is the squared-residual series, f the trimming function, and tau^2
// the sample variance of the f(s_i). Throws DataError when tau degenerates.
TestOutcome cusum_statistic(std::span<const double> squared_residuals,
                            const TrimSpec& trim);

// Tail of sup_{0<=t<=1} |Brownian bridge| via the alternating series
// 1 - sum_k (-1)^k exp(-2 k^2 u^2), truncated below 1e-12. Returns 1 for
// u <= 0 (a vanishing statistic is never significant).
double bb_sup_tail(double u);

// Inverse of bb_sup_tail by bisection: the u with tail probability `level`.
double critical_value(double level);

// Full pipeline: fit at the given alpha, residuals, squares, CUSUM scan.
TestOutcome run_test(const DriftModel& model, const SamplePath& path, double alpha,
                     const TrimSpec& trim, const OptimizerConfig& optimizer = {});

// Observation range [start, end] with its refitted parameters. Consecutive
// segments share their boundary observation; residual index ranges partition
// [1, n].
struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;
    ParamEstimate estimate;
};

struct SegmentationResult {
    std::vector<std::size_t> change_points;  // strictly increasing, inside (0, n)
    std::vector<Segment> segments;
    double level = 0.0;
};

// Recursive binary segmentation: test a segment, split at k_hat when the
// p-value is below `level` and both children keep at least min_segment
// residuals, then recurse. Segments shorter than min_segment are returned
// untested.
SegmentationResult binary_segmentation(const DriftModel& model, const SamplePath& path,
                                       double alpha, const TrimSpec& trim, double level,
                                       std::size_t min_segment,
                                       const OptimizerConfig& optimizer = {});

}  // namespace driftwatch
