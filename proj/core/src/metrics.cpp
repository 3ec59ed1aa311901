#include "trendline/metrics.hpp"

#include "trendline/error.hpp"

#include <cmath>

namespace trendline {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorKind::LengthMismatch, "inputs differ in length (" + std::to_string(a.size()) + " vs " +
                                            std::to_string(b.size()) + ")");
    }
    if (a.empty()) {
        fail(ErrorKind::EmptyInput, "metric of an empty input");
    }
}

} // namespace

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    double ss = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(y_true.size()));
}

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    double s = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        s += std::abs(y_true[i] - y_pred[i]);
    }
    return s / static_cast<double>(y_true.size());
}

std::optional<double> mape(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        fail(ErrorKind::LengthMismatch, "inputs differ in length");
    }
    double s = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] != 0.0) {
            s += std::abs((y_true[i] - y_pred[i]) / y_true[i]);
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return s / static_cast<double>(count) * 100.0;
}

double coverage(std::span<const double> y_true, std::span<const double> lower, std::span<const double> upper) {
    check_pair(y_true, lower);
    check_pair(y_true, upper);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (lower[i] > upper[i]) {
            fail(ErrorKind::InvertedBounds, "lower bound exceeds upper bound at index " + std::to_string(i));
        }
        if (y_true[i] >= lower[i] && y_true[i] <= upper[i]) {
            ++inside;
        }
    }
    return 100.0 * static_cast<double>(inside) / static_cast<double>(y_true.size());
}

MetricReport evaluate_forecast(std::string model_name, std::span<const double> y_true,
                               std::span<const double> y_pred, std::span<const double> lower,
                               std::span<const double> upper) {
    MetricReport report;
    report.model_name = std::move(model_name);
    report.rmse = rmse(y_true, y_pred);
    report.mae = mae(y_true, y_pred);
    report.mape_percent = mape(y_true, y_pred);
    if (!lower.empty() || !upper.empty()) {
        report.coverage_percent = coverage(y_true, lower, upper);
    }
    report.n = y_true.size();
    return report;
}

} // namespace trendline
