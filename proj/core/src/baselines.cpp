#include "trendline/baselines.hpp"

#include "trendline/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

namespace trendline {

std::vector<double> naive_forecast(std::span<const double> train, std::size_t horizon) {
    if (train.empty()) {
        fail(ErrorKind::EmptySeries, "naive forecast needs at least one training value");
    }
    return std::vector<double>(horizon, train.back());
}

std::vector<double> seasonal_naive(std::span<const double> train, std::size_t horizon, std::size_t period) {
    if (period == 0) {
        fail(ErrorKind::InvalidConfig, "seasonal period must be >= 1");
    }
    if (train.size() < period) {
        fail(ErrorKind::SeriesShorterThanPeriod, "training series (" + std::to_string(train.size()) +
                                                     ") is shorter than the period (" + std::to_string(period) + ")");
    }
    const std::size_t n = train.size();
    std::vector<double> out(horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
        out[i] = train[n - period + (i % period)];
    }
    return out;
}

std::array<double, kLagFeatureCount> LagFeatureRow::as_array() const {
    return {lag_1, lag_7, lag_30, lag_365, rolling_mean_7, rolling_mean_30,
            static_cast<double>(day_of_week), static_cast<double>(month)};
}

namespace {

double tail_mean(std::span<const double> history, std::size_t count) {
    const auto tail = history.last(count);
    return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(count);
}

} // namespace

LagFeatureRow build_lag_features(std::span<const double> history, EpochDay date) {
    if (history.size() < kLagHistory) {
        fail(ErrorKind::InsufficientHistory, "lag features need " + std::to_string(kLagHistory) +
                                                 " prior values, have " + std::to_string(history.size()));
    }
    const std::size_t n = history.size();
    LagFeatureRow row;
    row.lag_1 = history[n - 1];
    row.lag_7 = history[n - 7];
    row.lag_30 = history[n - 30];
    row.lag_365 = history[n - 365];
    row.rolling_mean_7 = tail_mean(history, 7);
    row.rolling_mean_30 = tail_mean(history, 30);
    row.day_of_week = day_of_week(date);
    row.month = month_of(date);
    return row;
}

std::vector<LagFeatureRow> batch_lag_features(const TimeSeries& series) {
    std::vector<LagFeatureRow> rows;
    const auto values = series.values();
    for (std::size_t i = kLagHistory; i < series.size(); ++i) {
        rows.push_back(build_lag_features(values.first(i), series.timestamps()[i]));
    }
    return rows;
}

double LinearLagRegressor::predict(const LagFeatureRow& row) const {
    const auto x = row.as_array();
    double y = intercept_;
    for (std::size_t i = 0; i < kLagFeatureCount; ++i) {
        y += weights_[i] * x[i];
    }
    return y;
}

RidgeSolution fit_ridge(const std::vector<std::vector<double>>& rows, std::span<const double> y, double lambda) {
    if (rows.size() != y.size()) {
        fail(ErrorKind::LengthMismatch, "feature rows and targets differ in length");
    }
    if (rows.empty()) {
        fail(ErrorKind::EmptyInput, "no training rows");
    }
    const auto p = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
    Eigen::VectorXd x(p + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        x(0) = 1.0;
        for (Eigen::Index c = 0; c < p; ++c) {
            x(c + 1) = rows[r][static_cast<std::size_t>(c)];
        }
        gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
        rhs += y[r] * x;
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    for (Eigen::Index c = 1; c <= p; ++c) {
        gram(c, c) += lambda;
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        fail(ErrorKind::SingularSystem, "normal equations are not positive definite");
    }
    const Eigen::VectorXd sol = ldlt.solve(rhs);
    if (!sol.allFinite() || ldlt.rcond() < 1e-15) {
        fail(ErrorKind::SingularSystem, "normal equations are numerically singular");
    }
    RidgeSolution out;
    out.intercept = sol(0);
    out.weights.assign(sol.data() + 1, sol.data() + sol.size());
    return out;
}

LinearLagRegressor fit_linear_lag_regressor(const TimeSeries& train) {
    if (train.size() < kLagHistory + 1) {
        fail(ErrorKind::InsufficientHistory, "lag regressor needs at least " + std::to_string(kLagHistory + 1) +
                                                 " training rows, have " + std::to_string(train.size()));
    }
    train.require_dense();
    const auto rows = batch_lag_features(train);
    std::vector<std::vector<double>> x;
    x.reserve(rows.size());
    for (const auto& row : rows) {
        const auto a = row.as_array();
        x.emplace_back(a.begin(), a.end());
    }
    const auto targets = train.values().subspan(kLagHistory);
    const auto sol = fit_ridge(x, targets, kLagRidgePenalty);
    std::array<double, kLagFeatureCount> w{};
    std::copy(sol.weights.begin(), sol.weights.end(), w.begin());
    return LinearLagRegressor(sol.intercept, w);
}

std::vector<double> walk_forward_forecast(const LagRegressor& regressor, std::span<const double> train,
                                          std::span<const EpochDay> test_dates) {
    if (test_dates.empty()) {
        return {};
    }
    if (train.size() < kLagHistory) {
        fail(ErrorKind::InsufficientHistory, "walk-forward needs " + std::to_string(kLagHistory) +
                                                 " training values, have " + std::to_string(train.size()));
    }
    std::vector<double> history(train.begin(), train.end());
    history.reserve(train.size() + test_dates.size());
    std::vector<double> out;
    out.reserve(test_dates.size());
    for (EpochDay date : test_dates) {
        const double pred = regressor.predict(build_lag_features(history, date));
        out.push_back(pred);
        history.push_back(pred);
    }
    return out;
}

} // namespace trendline
