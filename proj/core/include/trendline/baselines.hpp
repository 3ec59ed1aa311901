#pragma once

#include "trendline/timeseries.hpp"

#include <array>
#include <span>
#include <vector>

namespace trendline {

std::vector<double> naive_forecast(std::span<const double> train, std::size_t horizon);

/// prediction_i = train[n - period + (i mod period)].
std::vector<double> seasonal_naive(std::span<const double> train, std::size_t horizon, std::size_t period);

inline constexpr std::size_t kLagHistory = 365;
inline constexpr std::size_t kLagFeatureCount = 8;

/// Features for predicting the value on `date` from everything observed
/// (or predicted) before it.
struct LagFeatureRow {
    double lag_1 = 0.0;
    double lag_7 = 0.0;
    double lag_30 = 0.0;
    double lag_365 = 0.0;
    double rolling_mean_7 = 0.0;
    double rolling_mean_30 = 0.0;
    int day_of_week = 0; // Monday = 0
    int month = 1;

    std::array<double, kLagFeatureCount> as_array() const;
    bool operator==(const LagFeatureRow&) const = default;
};

/// Requires at least 365 history values; rolling means cover the last 7 and
/// 30 of them.
LagFeatureRow build_lag_features(std::span<const double> history, EpochDay date);

/// Rows for every index i >= 365 of a realized series, each built from
/// values[0, i) and the date at i.
std::vector<LagFeatureRow> batch_lag_features(const TimeSeries& series);

/// Any point predictor over lag features.
class LagRegressor {
public:
    virtual ~LagRegressor() = default;
    virtual double predict(const LagFeatureRow& row) const = 0;
};

class LinearLagRegressor final : public LagRegressor {
public:
    LinearLagRegressor(double intercept, std::array<double, kLagFeatureCount> weights)
        : intercept_(intercept), weights_(weights) {}

    double predict(const LagFeatureRow& row) const override;

    double intercept() const { return intercept_; }
    const std::array<double, kLagFeatureCount>& weights() const { return weights_; }

private:
    double intercept_;
    std::array<double, kLagFeatureCount> weights_;
};

inline constexpr double kLagRidgePenalty = 1e-6;

struct RidgeSolution {
    double intercept = 0.0;
    std::vector<double> weights;
};

/// Minimises ||y - b - X w||^2 + lambda ||w||^2 (intercept unpenalised) via
/// the normal equations. Throws SingularSystem if they cannot be solved.
RidgeSolution fit_ridge(const std::vector<std::vector<double>>& rows, std::span<const double> y, double lambda);

/// Ridge-regularised least squares over the eight lag features plus an
/// intercept, trained on every row of `train` that has a full year of history.
LinearLagRegressor fit_linear_lag_regressor(const TimeSeries& train);

/// Recursive multi-step forecast: each prediction is appended to the history
/// before the next step's features are built. Test targets are never read.
std::vector<double> walk_forward_forecast(const LagRegressor& regressor, std::span<const double> train,
                                          std::span<const EpochDay> test_dates);

} // namespace trendline
