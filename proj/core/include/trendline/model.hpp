#pragma once

#include "trendline/config.hpp"
#include "trendline/design.hpp"
#include "trendline/optimizer.hpp"
#include "trendline/timeseries.hpp"

#include <span>
#include <vector>

namespace trendline {

/// MAP estimate of the additive model. Trend parameters and coefficients
/// live in scaled units (t in [0, 1] over the training span, y divided by
/// y_scale). The continuity offsets gamma are always derived, never stored.
struct FittedModel {
    ModelConfig config;
    DesignContext context;
    double k = 0.0;
    double m = 0.0;
    std::vector<double> delta;
    /// Feature coefficients in design column order (seasonalities, holidays,
    /// regressors), excluding the changepoint basis.
    std::vector<double> beta;
    /// Residual standard deviation in scaled-y units.
    double sigma = 0.0;
    /// Training observations and the covariates seen at fit time.
    TimeSeries history;
    Covariates history_covariates;

    /// Packed [k, m, delta, beta] as used by MapObjective.
    std::vector<double> packed() const;

    /// Coefficient slice for a seasonality by name; empty if unknown.
    std::span<const double> seasonality_coefficients(const std::string& name) const;
    std::span<const double> holiday_coefficients() const;
    std::span<const double> regressor_coefficients() const;
};

struct FitTrace {
    /// The parameter solve of the final noise round.
    LbfgsResult optimizer;
    std::vector<double> initial_params;
    /// Noise variance (scaled units) used as prior weight in each round.
    std::vector<double> noise_variance;
};

/// Sample standard deviation (n - 1 divisor).
double estimate_sigma(std::span<const double> residuals);

/// Deterministic joint MAP fit of the parameters and the noise variance; the
/// reported `sigma` is still the post-hoc residual estimate. `covariates`
/// supplies regressor columns and, for logistic growth without a constant
/// capacity, the `cap` column.
FittedModel fit(const TimeSeries& ts, const ModelConfig& config, const Covariates& covariates = {},
                FitTrace* trace = nullptr);

} // namespace trendline
