#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "driftwatch/changepoint.hpp"
#include "driftwatch/estimate.hpp"
#include "driftwatch/model.hpp"
#include "driftwatch/simulate.hpp"

namespace driftwatch {

struct ForecastRecord {
    std::size_t index = 0;   // forecasted observation index (origin + 1)
    double predicted = 0.0;  // Euler conditional mean
    double pi_lo = 0.0;      // 95% prediction interval endpoints
    double pi_hi = 0.0;
    double actual = 0.0;     // NaN until scored
    ParamEstimate estimate_used;
};

struct ForecastScore {
    double rmse = 0.0;
    double rmspe = 0.0;
    std::size_t pi_coverage_count = 0;  // actuals inside their interval
    std::size_t n_forecasts = 0;
};

// One-step-ahead Euler forecast from state x_s:
//   predicted = x_s + a(x_s, theta_hat) h,  interval = predicted +- 2 sigma_hat sqrt(h).
// For the mean-reverting OU drift this is x_s + lambda (mu - x_s) h.
ForecastRecord one_step_forecast(const DriftModel& model, const ParamEstimate& est,
                                 double x_s, double h);

// RMSE / RMSPE / coverage over scored records. RMSPE divides each error by its
// actual value and rejects zero actuals with DataError.
ForecastScore score_records(const std::vector<ForecastRecord>& records);

// Rolling one-step-ahead evaluation: for every origin s in [eval_start, n-1],
// refit on observations [from_index, s] (every refit_every-th origin; the
// estimate is reused in between), forecast s+1, and score against the actual.
std::pair<ForecastScore, std::vector<ForecastRecord>> rolling_evaluate(
    const DriftModel& model, const SamplePath& path, std::size_t eval_start,
    const MdpdeConfig& cfg, std::size_t refit_every = 1, std::size_t from_index = 0);

// Same evaluation loop with a fixed estimate and no refitting.
std::pair<ForecastScore, std::vector<ForecastRecord>> rolling_forecast_fixed(
    const DriftModel& model, const SamplePath& path, std::size_t eval_start,
    const ParamEstimate& est);

}  // namespace driftwatch
