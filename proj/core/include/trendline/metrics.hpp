#pragma once

#include <optional>
#include <span>
#include <string>

namespace trendline {

struct MetricReport {
    std::string model_name;
    double rmse = 0.0;
    double mae = 0.0;
    /// Percent; absent when every truth value is zero.
    std::optional<double> mape_percent;
    /// Percent of truths inside the band; absent without bounds.
    std::optional<double> coverage_percent;
    std::size_t n = 0;
};

double rmse(std::span<const double> y_true, std::span<const double> y_pred);
double mae(std::span<const double> y_true, std::span<const double> y_pred);

/// Mean absolute percentage error over entries with nonzero truth, in percent.
std::optional<double> mape(std::span<const double> y_true, std::span<const double> y_pred);

/// Percent of truths within [lower, upper], both ends inclusive.
double coverage(std::span<const double> y_true, std::span<const double> lower, std::span<const double> upper);

MetricReport evaluate_forecast(std::string model_name, std::span<const double> y_true,
                               std::span<const double> y_pred, std::span<const double> lower = {},
                               std::span<const double> upper = {});

} // namespace trendline
