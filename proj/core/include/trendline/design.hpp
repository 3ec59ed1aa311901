#pragma once

#include "trendline/config.hpp"
#include "trendline/timeseries.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace trendline {

/// Affine maps from calendar days and target units into the unit-scaled
/// space where all parameters live. The training span maps to t in [0, 1].
struct Scaling {
    EpochDay t_start = 0;
    double t_span = 1.0;
    double y_scale = 1.0;

    double time(EpochDay day) const { return static_cast<double>(day - t_start) / t_span; }
};

struct RegressorNorm {
    double mean = 0.0;
    double stddev = 1.0;
};

/// Everything fixed at fit time that later design matrices must reuse.
struct DesignContext {
    Scaling scaling;
    std::vector<double> changepoints; // scaled time, ascending
    std::vector<RegressorNorm> regressor_norms;
};

enum class BlockKind { TrendBasis, Seasonality, Holidays, Regressors };

struct DesignBlock {
    BlockKind kind = BlockKind::TrendBasis;
    std::string name;
    std::size_t begin = 0;
    std::size_t width = 0;
    SeasonalityMode mode = SeasonalityMode::Additive;
};

/// Feature columns grouped into prior-scaled blocks. The first block is the
/// changepoint indicator basis a(t); the rest are linear features whose
/// coefficients enter the prediction directly.
struct DesignMatrix {
    Eigen::MatrixXd columns;
    std::vector<DesignBlock> blocks;
    std::vector<double> prior_scales;
    std::vector<double> t;            // scaled time per row
    std::vector<double> changepoints; // scaled time
    std::vector<double> capacity;     // scaled capacity per row (logistic only)
    Growth growth = Growth::Linear;

    std::size_t rows() const { return t.size(); }
    std::size_t trend_width() const { return changepoints.size(); }
    /// Number of coefficient columns after the trend basis.
    std::size_t feature_width() const { return static_cast<std::size_t>(columns.cols()) - trend_width(); }
    /// Per coefficient column (excluding the trend basis): multiplicative?
    std::vector<bool> multiplicative_mask() const;
};

/// Indicator columns, one per holiday name: 1 when the day falls inside
/// any of that holiday's widened windows.
Eigen::MatrixXd holiday_features(std::span<const EpochDay> days, std::span<const HolidaySpec> specs);

/// Derives scaling, changepoints and regressor standardisation from a
/// training series.
DesignContext make_design_context(const TimeSeries& train, const ModelConfig& config,
                                  const Covariates& covariates);

/// Assembles [trend basis, seasonalities in declaration order, holidays,
/// regressors]. Throws MissingRegressorValue when a declared regressor (or
/// the logistic `cap` column) lacks a value for any requested day.
DesignMatrix build_design(std::span<const EpochDay> days, const ModelConfig& config,
                          const DesignContext& context, const Covariates& covariates);

DesignMatrix build_design(const TimeSeries& ts, const ModelConfig& config,
                          const Covariates& covariates = {});

} // namespace trendline
