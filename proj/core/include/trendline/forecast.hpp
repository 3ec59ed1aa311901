#pragma once

#include "trendline/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace trendline {

/// Training days followed by consecutive future days, plus the covariate
/// values needed to evaluate the model on every one of them.
struct FutureGrid {
    std::vector<EpochDay> timestamps;
    Covariates covariates;
};

struct IntervalBand {
    double level = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct NamedSeries {
    std::string name;
    std::vector<double> values;
};

/// All values are in original target units. Each seasonality column is its
/// contribution to yhat, so for every model
///   yhat = trend + sum(seasonal) + holidays + sum(regressors).
struct Forecast {
    std::vector<EpochDay> ds;
    std::vector<double> yhat;
    std::vector<double> trend;
    std::vector<NamedSeries> seasonal;
    std::vector<double> holidays;
    std::vector<NamedSeries> regressors;
    std::vector<IntervalBand> bands;

    const IntervalBand* band(double level) const;
};

/// Throws MissingRegressorValue when a declared regressor (or a per-date
/// logistic capacity) has no value for some grid day.
FutureGrid make_future_grid(const FittedModel& model, int periods, const Covariates& future = {});

/// Point forecast and components only.
Forecast predict_point(const FittedModel& model, const FutureGrid& grid);

/// Point forecast plus Monte-Carlo bands at every configured level.
Forecast predict(const FittedModel& model, const FutureGrid& grid, std::uint64_t seed);
Forecast predict(const FittedModel& model, const FutureGrid& grid);

/// Empirical bands from `interval_samples` simulated paths. Each path draws
/// new trend changepoints after the training span (Poisson count at the
/// historical changepoint rate, uniform locations, Laplace(0, mean|delta|)
/// magnitudes) and adds Normal(0, sigma) observation noise. Bounds are
/// type-7 quantiles at (1 -/+ level) / 2.
std::vector<IntervalBand> simulate_intervals(const FittedModel& model, const FutureGrid& grid,
                                             std::uint64_t seed);

/// Linear interpolation between order statistics (R type 7). Sorts `values`.
double quantile_type7(std::vector<double>& values, double q);

/// Column label used for a level, e.g. 0.95 -> "95".
std::string level_label(double level);

/// `ds,yhat,yhat_lower_<L>,yhat_upper_<L>...,trend,<seasonalities>,holidays[,<regressors>]`
std::string forecast_to_csv(const Forecast& forecast);

} // namespace trendline
