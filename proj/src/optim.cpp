#include "driftwatch/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace driftwatch {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kPenaltyWeight = 1e4;

double clamp_into(std::vector<double>& x, std::span<const Interval> bounds) {
    double violation = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double clamped = bounds[j].clamp(x[j]);
        if (clamped != x[j]) {
            const double scale = std::max(bounds[j].width(), 1.0);
            const double d = (x[j] - clamped) / scale;
            violation += d * d;
            x[j] = clamped;
        }
    }
    return violation;
}

}  // namespace

OptimResult nelder_mead(const ObjectiveFn& objective, std::span<const double> start,
                        std::span<const Interval> bounds, const OptimizerConfig& cfg) {
    const std::size_t dim = start.size();
    if (bounds.size() != dim) throw std::invalid_argument("nelder_mead: bounds/dim mismatch");
    if (dim == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");

    // Evaluate at the clamped point; penalize leaving the box.
    auto eval = [&](std::span<const double> p) {
        std::vector<double> q(p.begin(), p.end());
        const double violation = clamp_into(q, bounds);
        const double f = objective(q);
        if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
        return f + kPenaltyWeight * violation;
    };

    // Initial simplex: start plus one vertex per coordinate, fminsearch-style steps.
    std::vector<std::vector<double>> simplex(dim + 1);
    std::vector<double> fvals(dim + 1);
    simplex[0].assign(start.begin(), start.end());
    clamp_into(simplex[0], bounds);
    for (std::size_t j = 0; j < dim; ++j) {
        simplex[j + 1] = simplex[0];
        const double step =
            simplex[0][j] != 0.0 ? 0.05 * std::abs(simplex[0][j]) : 0.00025;
        simplex[j + 1][j] += step;
    }
    for (std::size_t v = 0; v <= dim; ++v) fvals[v] = eval(simplex[v]);

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        std::vector<std::vector<double>> s2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = fvals[idx[i]];
        }
        simplex.swap(s2);
        fvals.swap(f2);
    };

    bool converged = false;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        order();

        // Relative simplex diameter and objective spread.
        double diameter = 0.0;
        for (std::size_t v = 1; v <= dim; ++v) {
            for (std::size_t j = 0; j < dim; ++j) {
                const double rel = std::abs(simplex[v][j] - simplex[0][j]) /
                                   (1.0 + std::abs(simplex[0][j]));
                diameter = std::max(diameter, rel);
            }
        }
        const double spread = std::abs(fvals[dim] - fvals[0]);
        if (diameter < cfg.tol_x || spread < cfg.tol_f) {
            converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v) {
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[v][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                p[j] = centroid[j] + coef * (centroid[j] - simplex[dim][j]);
            }
            return p;
        };

        const std::vector<double> reflected = blend(kReflect);
        const double f_reflect = eval(reflected);

        if (f_reflect < fvals[0]) {
            const std::vector<double> expanded = blend(kExpand);
            const double f_expand = eval(expanded);
            if (f_expand < f_reflect) {
                simplex[dim] = expanded;
                fvals[dim] = f_expand;
            } else {
                simplex[dim] = reflected;
                fvals[dim] = f_reflect;
            }
        } else if (f_reflect < fvals[dim - 1]) {
            simplex[dim] = reflected;
            fvals[dim] = f_reflect;
        } else {
            // Contract toward the better of worst/reflected.
            const bool outside = f_reflect < fvals[dim];
            const std::vector<double> contracted = blend(outside ? kContract : -kContract);
            const double f_contract = eval(contracted);
            if (f_contract < std::min(f_reflect, fvals[dim])) {
                simplex[dim] = contracted;
                fvals[dim] = f_contract;
            } else {
                for (std::size_t v = 1; v <= dim; ++v) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        simplex[v][j] =
                            simplex[0][j] + kShrink * (simplex[v][j] - simplex[0][j]);
                    }
                    fvals[v] = eval(simplex[v]);
                }
            }
        }
    }

    order();
    OptimResult result;
    result.x = simplex[0];
    clamp_into(result.x, bounds);
    result.value = objective(result.x);
    result.converged = converged;
    result.iterations = iter;
    return result;
}

}  // namespace driftwatch
