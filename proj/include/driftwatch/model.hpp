#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace driftwatch {

// Closed interval used for parameter boxes.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

using DriftFn = std::function<double(double x, std::span<const double> theta)>;

// Least-squares style initializer for the drift parameters: receives the
// per-step drift observations y_i = (X_i - X_{i-1}) / h and the left endpoints
// X_{i-1}, returns a starting theta (values need not be inside the bounds;
// callers clamp).
using DriftInitFn =
    std::function<std::vector<double>(std::span<const double> dx_over_h,
                                      std::span<const double> x_left)>;

// Drift specification a(x, theta) together with its parameter space. The
// dispersion sigma is a free positive scalar boxed by sigma_bounds. The
// smoothness, growth, and ergodicity conditions required of a user-supplied
// drift are the caller's responsibility; the library does not verify them.
struct DriftModel {
    std::string name;
    std::size_t dim_theta = 0;
    DriftFn drift;
    std::vector<Interval> theta_bounds;  // one interval per theta coordinate
    Interval sigma_bounds{0.01, 1000.0}; // lower edge strictly positive
    DriftInitFn moment_init;             // optional; midpoint of bounds when absent

    // Checked evaluation of a(x, theta). Throws std::invalid_argument on a
    // dimension mismatch and std::domain_error when theta is outside bounds.
    double evaluate(double x, std::span<const double> theta) const;

    // Unchecked evaluation for inner loops.
    double drift_at(double x, std::span<const double> theta) const {
        return drift(x, theta);
    }

    // Starting theta for optimization, clamped into the bounds.
    std::vector<double> initial_theta(std::span<const double> dx_over_h,
                                      std::span<const double> x_left) const;

    void validate() const;  // structural invariants; throws std::invalid_argument
};

// dX = -theta X dt + sigma dW; one drift parameter theta.
DriftModel ou_centered();

// dX = lambda (mu - X) dt + sigma dW; parameters (lambda, mu).
DriftModel ou_mean_reverting();

// Lookup by the CLI/config identifier: "ou-centered" or "ou-mean-reverting".
// Throws std::invalid_argument for unknown names.
DriftModel model_by_name(const std::string& name);

}  // namespace driftwatch
