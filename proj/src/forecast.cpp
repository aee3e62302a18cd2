#include "driftwatch/forecast.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "driftwatch/errors.hpp"

namespace driftwatch {

ForecastRecord one_step_forecast(const DriftModel& model, const ParamEstimate& est,
                                 double x_s, double h) {
    if (!(h > 0.0)) throw std::domain_error("one_step_forecast: h must be > 0");
    if (est.theta_hat.size() != model.dim_theta) {
        throw std::invalid_argument("one_step_forecast: theta dimension mismatch");
    }
    ForecastRecord rec;
    rec.predicted = x_s + model.drift_at(x_s, est.theta_hat) * h;
    const double half_width = 2.0 * est.sigma_hat * std::sqrt(h);
    rec.pi_lo = rec.predicted - half_width;
    rec.pi_hi = rec.predicted + half_width;
    rec.actual = std::numeric_limits<double>::quiet_NaN();
    rec.estimate_used = est;
    return rec;
}

ForecastScore score_records(const std::vector<ForecastRecord>& records) {
    ForecastScore score;
    score.n_forecasts = records.size();
    if (records.empty()) return score;
    double se = 0.0, spe = 0.0;
    for (const ForecastRecord& rec : records) {
        if (!std::isfinite(rec.actual)) throw DataError("score_records: unscored record");
        if (rec.actual == 0.0) {
            throw DataError("score_records: zero actual value (RMSPE undefined)");
        }
        const double e = rec.actual - rec.predicted;
        se += e * e;
        const double rel = e / rec.actual;
        spe += rel * rel;
        if (rec.actual >= rec.pi_lo && rec.actual <= rec.pi_hi) ++score.pi_coverage_count;
    }
    const double m = static_cast<double>(records.size());
    score.rmse = std::sqrt(se / m);
    score.rmspe = std::sqrt(spe / m);
    return score;
}

std::pair<ForecastScore, std::vector<ForecastRecord>> rolling_evaluate(
    const DriftModel& model, const SamplePath& path, std::size_t eval_start,
    const MdpdeConfig& cfg, std::size_t refit_every, std::size_t from_index) {
    path.validate();
    const std::size_t n = path.n();
    if (refit_every < 1) throw std::invalid_argument("rolling_evaluate: refit_every >= 1");
    if (eval_start >= n) {
        throw std::invalid_argument("rolling_evaluate: eval_start must be < n");
    }
    if (eval_start < from_index + model.dim_theta + 2) {
        throw std::invalid_argument(
            "rolling_evaluate: too little data before the first forecast origin");
    }

    std::vector<ForecastRecord> records;
    records.reserve(n - eval_start);
    ParamEstimate current;
    for (std::size_t s = eval_start; s < n; ++s) {
        if ((s - eval_start) % refit_every == 0) {
            try {
                current = fit(model, path.slice(from_index, s), cfg);
            } catch (const EstimationError& err) {
                throw EstimationError("rolling_evaluate: refit failed at origin " +
                                      std::to_string(s) + ": " + err.what());
            }
        }
        ForecastRecord rec = one_step_forecast(model, current, path.values[s], path.step);
        rec.index = s + 1;
        rec.actual = path.values[s + 1];
        records.push_back(std::move(rec));
    }
    return {score_records(records), std::move(records)};
}

std::pair<ForecastScore, std::vector<ForecastRecord>> rolling_forecast_fixed(
    const DriftModel& model, const SamplePath& path, std::size_t eval_start,
    const ParamEstimate& est) {
    path.validate();
    const std::size_t n = path.n();
    if (eval_start >= n) {
        throw std::invalid_argument("rolling_forecast_fixed: eval_start must be < n");
    }
    std::vector<ForecastRecord> records;
    records.reserve(n - eval_start);
    for (std::size_t s = eval_start; s < n; ++s) {
        ForecastRecord rec = one_step_forecast(model, est, path.values[s], path.step);
        rec.index = s + 1;
        rec.actual = path.values[s + 1];
        records.push_back(std::move(rec));
    }
    return {score_records(records), std::move(records)};
}

}  // namespace driftwatch
