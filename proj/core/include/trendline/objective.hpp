#pragma once

#include "trendline/design.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace trendline {

/// Smoothing constant for the Laplace penalty: softabs(x) = sqrt(x^2 + eps).
inline constexpr double kSoftAbsEpsilon = 1e-10;

inline double softabs(double x) { return std::sqrt(x * x + kSoftAbsEpsilon); }

/// Negative log posterior (up to constants) of the additive model in scaled
/// units:
///
///   1/2 sum_t r_t^2 + sum_j softabs(delta_j) / tau_j + sum_c beta_c^2 / (2 s_c^2)
///
/// Parameters are packed as [k, m, delta_1..delta_S, beta_1..beta_q] where
/// beta follows the design's feature columns. The prediction is
/// g(t) (1 + s_mul(t)) + s_add(t), with g linear or logistic. Logistic
/// offsets are recomputed from (k, m, delta) so the trend stays continuous.
///
/// `prior_weight` multiplies the two penalty sums. A weight of sigma^2 gives
/// the same minimiser as a Gaussian likelihood with noise sigma, which is
/// how fitting accounts for the noise level; 1 is the plain objective above.
class MapObjective {
public:
    MapObjective(const DesignMatrix& design, std::span<const double> y, double prior_weight = 1.0);

    std::size_t dimension() const { return 2 + design_->trend_width() + design_->feature_width(); }

    double value(std::span<const double> params) const;

    /// Writes the gradient into `grad` and returns the objective value.
    double value_and_gradient(std::span<const double> params, std::span<double> grad) const;

    /// Scaled predictions for every design row.
    std::vector<double> predict(std::span<const double> params) const;

    /// Scaled trend g(t) for every design row.
    std::vector<double> trend(std::span<const double> params) const;

    /// d yhat / d params, one row per design row.
    Eigen::MatrixXd jacobian(std::span<const double> params) const;

    /// J^T J plus the exact Hessian of the prior terms. Equal to the true
    /// Hessian for linear growth without multiplicative blocks.
    Eigen::MatrixXd gauss_newton_hessian(std::span<const double> params) const;

private:
    struct Evaluation;
    Evaluation evaluate(std::span<const double> params, bool with_gradient) const;

    const DesignMatrix* design_;
    Eigen::Map<const Eigen::VectorXd> y_;
    double prior_weight_ = 1.0;
    Eigen::MatrixXd features_;
    Eigen::VectorXd additive_mask_;
    Eigen::VectorXd multiplicative_mask_;
    bool any_multiplicative_ = false;
};

double map_objective(std::span<const double> params, const DesignMatrix& design, std::span<const double> y);

std::vector<double> map_gradient(std::span<const double> params, const DesignMatrix& design,
                                 std::span<const double> y);

/// Trend in scaled units over arbitrary scaled times. `capacity` is ignored
/// for linear growth and must match `t` in length for logistic growth.
std::vector<double> trend_series(std::span<const double> t, Growth growth, double k, double m,
                                 std::span<const double> delta, std::span<const double> changepoints,
                                 std::span<const double> capacity);

} // namespace trendline
