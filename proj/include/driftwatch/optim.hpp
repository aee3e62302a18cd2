#pragma once

#include <functional>
#include <span>
#include <vector>

#include "driftwatch/model.hpp"

namespace driftwatch {

struct OptimizerConfig {
    int max_iters = 2000;
    double tol_x = 1e-8;       // relative simplex diameter
    double tol_f = 1e-10;      // objective spread across the simplex
    int multistart_count = 5;  // used by fit(): one moment start plus jitters
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

// Derivative-free simplex search (reflection/expansion/contraction/shrink)
// with box constraints handled by project-and-penalize: trial points are
// evaluated at their clamped position plus a quadratic penalty on the
// normalized violation. The returned point lies inside the bounds and its
// value is the raw objective there.
OptimResult nelder_mead(const ObjectiveFn& objective, std::span<const double> start,
                        std::span<const Interval> bounds, const OptimizerConfig& cfg);

}  // namespace driftwatch
