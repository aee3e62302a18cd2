#pragma once

#include <span>
#include <vector>

#include "driftwatch/model.hpp"
#include "driftwatch/optim.hpp"
#include "driftwatch/simulate.hpp"

namespace driftwatch {

struct MdpdeConfig {
    double alpha = 0.0;  // divergence exponent; 0 is the Gaussian quasi-MLE
    OptimizerConfig optimizer;
};

struct ParamEstimate {
    std::vector<double> theta_hat;
    double sigma_hat = 0.0;
    double alpha = 0.0;
    double objective_value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Density power divergence objective (1/n) sum_i H_i^alpha(theta, sigma) with
// residual increments e_i = X_i - X_{i-1} - a(X_{i-1}, theta) h:
//   alpha > 0:  sigma^-alpha [ (1+alpha)^-1/2
//                              - (1 + 1/alpha) exp(-alpha e_i^2 / (2 sigma^2 h)) ]
//   alpha = 0:  e_i^2 / (sigma^2 h) + log sigma^2
double mdpde_objective(const DriftModel& model, std::span<const double> theta,
                       double sigma, const SamplePath& path, double alpha);

// Minimizes mdpde_objective over the model's parameter box via multistart
// Nelder-Mead: one moment-based start plus jittered copies (deterministic
// jitter, so the fit is a pure function of its inputs). Throws
// EstimationError when no start yields a finite objective.
ParamEstimate fit(const DriftModel& model, const SamplePath& path, const MdpdeConfig& cfg);

}  // namespace driftwatch
