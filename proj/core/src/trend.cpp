#include "trendline/trend.hpp"

#include <cmath>
#include <numbers>

namespace trendline {

std::vector<EpochDay> place_changepoints(std::span<const EpochDay> train, int n, double range) {
    std::vector<EpochDay> out;
    if (n <= 0 || train.size() < 2) {
        return out;
    }
    const auto last_index = static_cast<std::size_t>(
        std::floor(static_cast<double>(train.size() - 1) * range));
    std::size_t previous = 0;
    for (int i = 1; i <= n; ++i) {
        const double q = static_cast<double>(i) * static_cast<double>(last_index) / (n + 1);
        const auto idx = static_cast<std::size_t>(std::floor(q + 0.5));
        if (idx == 0 || idx > last_index || idx == previous) {
            continue;
        }
        out.push_back(train[idx]);
        previous = idx;
    }
    return out;
}

std::vector<double> changepoint_basis(double t, std::span<const double> changepoints) {
    std::vector<double> a(changepoints.size());
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        a[j] = t >= changepoints[j] ? 1.0 : 0.0;
    }
    return a;
}

std::vector<double> gamma_from_delta(std::span<const double> changepoints, std::span<const double> delta) {
    std::vector<double> gamma(changepoints.size());
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        gamma[j] = -changepoints[j] * delta[j];
    }
    return gamma;
}

double linear_trend(double t, double k, double m, std::span<const double> delta,
                    std::span<const double> changepoints) {
    double rate = k;
    double offset = m;
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        if (t >= changepoints[j]) {
            rate += delta[j];
            offset += -changepoints[j] * delta[j];
        }
    }
    return rate * t + offset;
}

double logistic_trend(double t, double k, double m, std::span<const double> delta,
                      std::span<const double> gamma, std::span<const double> changepoints,
                      double capacity) {
    double rate = k;
    double offset = m;
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        if (t >= changepoints[j]) {
            rate += delta[j];
            offset += gamma[j];
        }
    }
    return capacity / (1.0 + std::exp(-rate * (t - offset)));
}

std::vector<double> logistic_gamma(std::span<const double> changepoints, double k, double m,
                                   std::span<const double> delta) {
    std::vector<double> gamma(changepoints.size(), 0.0);
    double rate = k;
    double offset = m;
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        const double next_rate = rate + delta[j];
        if (next_rate != 0.0) {
            gamma[j] = (changepoints[j] - offset) * (1.0 - rate / next_rate);
        }
        offset += gamma[j];
        rate = next_rate;
    }
    return gamma;
}

std::vector<double> fourier_features(double t, double period, int order) {
    std::vector<double> out(2 * static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) {
        // Reduce the phase first so large epoch-day values keep full precision.
        const double cycles = std::fmod(static_cast<double>(n) * t, period) / period;
        const double x = 2.0 * std::numbers::pi * cycles;
        out[2 * (n - 1)] = std::cos(x);
        out[2 * (n - 1) + 1] = std::sin(x);
    }
    return out;
}

} // namespace trendline
