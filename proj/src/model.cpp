#include "driftwatch/model.hpp"

#include <cmath>
#include <stdexcept>

namespace driftwatch {

namespace {

constexpr double kRateLo = 0.01;
constexpr double kRateHi = 1000.0;
constexpr double kMeanLo = -1e6;
constexpr double kMeanHi = 1e6;

// Ordinary least squares of y on a single regressor (no intercept).
double ols_slope(std::span<const double> x, std::span<const double> y) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double DriftModel::evaluate(double x, std::span<const double> theta) const {
    if (theta.size() != dim_theta) {
        throw std::invalid_argument("drift '" + name + "': expected " +
                                    std::to_string(dim_theta) + " parameters, got " +
                                    std::to_string(theta.size()));
    }
    for (std::size_t j = 0; j < dim_theta; ++j) {
        if (!theta_bounds[j].contains(theta[j])) {
            throw std::domain_error("drift '" + name + "': theta[" + std::to_string(j) +
                                    "]=" + std::to_string(theta[j]) + " outside [" +
                                    std::to_string(theta_bounds[j].lo) + ", " +
                                    std::to_string(theta_bounds[j].hi) + "]");
        }
    }
    return drift(x, theta);
}

std::vector<double> DriftModel::initial_theta(std::span<const double> dx_over_h,
                                              std::span<const double> x_left) const {
    std::vector<double> theta;
    if (moment_init) {
        theta = moment_init(dx_over_h, x_left);
    } else {
        theta.reserve(dim_theta);
        for (const auto& b : theta_bounds) theta.push_back(b.midpoint());
    }
    if (theta.size() != dim_theta) theta.resize(dim_theta, 0.0);
    for (std::size_t j = 0; j < dim_theta; ++j) {
        if (!std::isfinite(theta[j])) theta[j] = theta_bounds[j].midpoint();
        theta[j] = theta_bounds[j].clamp(theta[j]);
    }
    return theta;
}

void DriftModel::validate() const {
    if (!drift) throw std::invalid_argument("drift '" + name + "': missing drift function");
    if (theta_bounds.size() != dim_theta) {
        throw std::invalid_argument("drift '" + name + "': bounds/dimension mismatch");
    }
    for (const auto& b : theta_bounds) {
        if (!(b.lo <= b.hi)) throw std::invalid_argument("drift '" + name + "': empty bound");
    }
    if (!(sigma_bounds.lo > 0.0) || !(sigma_bounds.lo <= sigma_bounds.hi)) {
        throw std::invalid_argument("drift '" + name + "': sigma bounds need 0 < lo <= hi");
    }
}

DriftModel ou_centered() {
    DriftModel m;
    m.name = "ou-centered";
    m.dim_theta = 1;
    m.drift = [](double x, std::span<const double> theta) { return -theta[0] * x; };
    m.theta_bounds = {{kRateLo, kRateHi}};
    m.sigma_bounds = {kRateLo, kRateHi};
    // dX/h regressed on -X gives the reversion rate.
    m.moment_init = [](std::span<const double> y, std::span<const double> xl) {
        std::vector<double> neg(xl.size());
        for (std::size_t i = 0; i < xl.size(); ++i) neg[i] = -xl[i];
        return std::vector<double>{ols_slope(neg, y)};
    };
    return m;
}

DriftModel ou_mean_reverting() {
    DriftModel m;
    m.name = "ou-mean-reverting";
    m.dim_theta = 2;
    m.drift = [](double x, std::span<const double> theta) {
        return theta[0] * (theta[1] - x);
    };
    m.theta_bounds = {{kRateLo, kRateHi}, {kMeanLo, kMeanHi}};
    m.sigma_bounds = {kRateLo, kRateHi};
    // OLS of dX/h on (1, X): slope -lambda, intercept lambda*mu.
    m.moment_init = [](std::span<const double> y, std::span<const double> xl) {
        const std::size_t n = xl.size();
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += xl[i];
            sy += y[i];
            sxx += xl[i] * xl[i];
            sxy += xl[i] * y[i];
        }
        const double denom = n * sxx - sx * sx;
        double lambda = 1.0;
        double mu = n > 0 ? sx / static_cast<double>(n) : 0.0;
        if (denom != 0.0 && n > 0) {
            const double slope = (n * sxy - sx * sy) / denom;
            const double intercept = (sy - slope * sx) / static_cast<double>(n);
            if (slope < 0.0) {
                lambda = -slope;
                mu = intercept / lambda;
            }
        }
        return std::vector<double>{lambda, mu};
    };
    return m;
}

DriftModel model_by_name(const std::string& name) {
    if (name == "ou-centered") return ou_centered();
    if (name == "ou-mean-reverting") return ou_mean_reverting();
    throw std::invalid_argument("unknown model '" + name +
                                "' (expected ou-centered or ou-mean-reverting)");
}

}  // namespace driftwatch
