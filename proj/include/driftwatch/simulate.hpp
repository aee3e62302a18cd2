#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "driftwatch/model.hpp"

namespace driftwatch {

// Equally spaced observations X_{t_0}..X_{t_n} with t_i = i * step.
// `shocks` holds the standardized increments injected at the observation
// scale; it is populated only when the generator ran with substeps = 1
// (exact Euler at observation scale) and is meant for test fixtures.
struct SamplePath {
    double step = 0.0;
    std::vector<double> values;
    std::vector<double> shocks;  // length n when present, else empty

    std::size_t n() const { return values.empty() ? 0 : values.size() - 1; }
    bool has_shocks() const { return !shocks.empty(); }

    // Copy of observations [start, end] (inclusive) as a path with the same step.
    SamplePath slice(std::size_t start, std::size_t end) const;

    // n >= 2, step > 0, finite values; throws DataError otherwise.
    void validate() const;
};

// Bernoulli-normal additive outliers: with probability prob an observation is
// shifted by |V|*sign(X), V ~ N(0, var_v).
struct ContaminationSpec {
    double prob = 0.0;   // Bernoulli success probability, in [0, 1]
    double var_v = 0.0;  // outlier variance, >= 0
};

struct SimConfig {
    std::size_t n = 0;     // observation count (path has n+1 values)
    double h = 0.0;        // explicit step; used when > 0
    double gamma = 0.0;    // otherwise h = n^(-gamma)
    int substeps = 20;     // generation refinement, >= 1
    double x0 = 0.0;
    std::uint64_t seed = 0;

    double step_size() const;  // resolves the step rule; throws on invalid
};

// Parameter regime switch used by the piecewise generator.
struct ParamChange {
    double frac = 0.0;  // in (0, 1); applied at generation step floor(frac*n*substeps)
    std::vector<double> theta;
    double sigma = 0.0;
};

// Euler scheme at step h/substeps, keeping every substeps-th point.
// Deterministic for a fixed seed. Shocks are recorded when substeps == 1.
SamplePath simulate_path(const DriftModel& model, std::span<const double> theta,
                         double sigma, const SimConfig& cfg);

// Same generator with a single parameter switch from (theta0, sigma0) to
// (theta1, sigma1) at generation step floor(change_frac * n * substeps);
// the path is continuous at the change time.
SamplePath simulate_path_with_change(const DriftModel& model,
                                     std::span<const double> theta0, double sigma0,
                                     std::span<const double> theta1, double sigma1,
                                     double change_frac, const SimConfig& cfg);

// General form with any number of switches (fractions strictly increasing).
SamplePath simulate_path_piecewise(const DriftModel& model,
                                   std::span<const double> theta0, double sigma0,
                                   std::span<const ParamChange> changes,
                                   const SimConfig& cfg);

// Independently perturbs each observation (indices 0..n inclusive) with
// probability spec.prob by |V|*sign(X), V ~ N(0, spec.var_v); sign(0) is +1.
// The shocks field of the result is cleared.
SamplePath contaminate(const SamplePath& path, const ContaminationSpec& spec,
                       std::uint64_t seed);

}  // namespace driftwatch
