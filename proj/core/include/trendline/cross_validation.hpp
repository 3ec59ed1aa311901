#pragma once

#include "trendline/config.hpp"
#include "trendline/metrics.hpp"
#include "trendline/timeseries.hpp"

#include <string>
#include <vector>

namespace trendline {

struct CvRow {
    EpochDay ds = 0;
    double y = 0.0;
    double yhat = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Forecasts made from one cutoff. Every row satisfies
/// cutoff < ds <= cutoff + horizon.
struct CvFold {
    EpochDay cutoff = 0;
    double level = 0.95; // coverage level of the stored bounds
    std::vector<CvRow> rows;
};

struct HorizonMetrics {
    int horizon_days = 0;
    MetricReport report;
};

/// Cutoffs last - horizon - i * period for i = 0, 1, ... while the cutoff
/// stays at or after first + initial. Returned ascending.
std::vector<EpochDay> enumerate_cutoffs(const TimeSeries& ts, int initial_days, int period_days, int horizon_days);

/// Fits on data up to each cutoff and forecasts the following `horizon`
/// days. Fit failures are rethrown with the fold cutoff in the message.
std::vector<CvFold> rolling_cv(const ModelConfig& config, const TimeSeries& ts, int initial_days,
                               int period_days, int horizon_days, const Covariates& covariates = {});

/// Pools rows across folds by (ds - cutoff) and scores each horizon day.
std::vector<HorizonMetrics> performance_by_horizon(const std::vector<CvFold>& folds);

/// `cutoff,ds,y,yhat,yhat_lower_95,yhat_upper_95`
std::string folds_to_csv(const std::vector<CvFold>& folds);

} // namespace trendline
