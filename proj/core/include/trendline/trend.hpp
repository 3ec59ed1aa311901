#pragma once

#include "trendline/calendar.hpp"

#include <span>
#include <vector>

namespace trendline {

/// Potential changepoints at uniform index quantiles of the first `range`
/// fraction of the observations. Returns a subset of `train` that lies
/// strictly after the first point; colliding quantiles are merged, so short
/// histories yield fewer than `n` changepoints.
std::vector<EpochDay> place_changepoints(std::span<const EpochDay> train, int n, double range);

/// a_j(t) = 1 when t >= t_j, else 0.
std::vector<double> changepoint_basis(double t, std::span<const double> changepoints);

/// Offsets that keep the piecewise-linear trend continuous: gamma_j = -t_j * delta_j.
std::vector<double> gamma_from_delta(std::span<const double> changepoints, std::span<const double> delta);

/// Piecewise-linear trend (k + a.delta) t + (m + a.gamma) with continuity offsets.
double linear_trend(double t, double k, double m, std::span<const double> delta,
                    std::span<const double> changepoints);

/// C / (1 + exp(-(k + a.delta)(t - (m + a.gamma)))) for caller-supplied gamma.
double logistic_trend(double t, double k, double m, std::span<const double> delta,
                      std::span<const double> gamma, std::span<const double> changepoints,
                      double capacity);

/// Offsets that keep the logistic trend continuous at every changepoint.
/// With k_j the rate after changepoint j and m_j the offset,
///   m_j = t_j - (k_{j-1} / k_j) (t_j - m_{j-1}).
/// A segment whose rate is exactly zero keeps the previous offset.
std::vector<double> logistic_gamma(std::span<const double> changepoints, double k, double m,
                                   std::span<const double> delta);

/// [cos(2 pi n t / P), sin(2 pi n t / P)] for n = 1..N, cos before sin.
std::vector<double> fourier_features(double t, double period, int order);

} // namespace trendline
