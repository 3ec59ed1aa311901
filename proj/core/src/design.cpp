#include "trendline/design.hpp"

#include "trendline/error.hpp"
#include "trendline/trend.hpp"

#include <algorithm>
#include <cmath>

namespace trendline {

std::vector<bool> DesignMatrix::multiplicative_mask() const {
    std::vector<bool> mask(feature_width(), false);
    for (const auto& block : blocks) {
        if (block.kind == BlockKind::Seasonality && block.mode == SeasonalityMode::Multiplicative) {
            for (std::size_t c = 0; c < block.width; ++c) {
                mask[block.begin + c - trend_width()] = true;
            }
        }
    }
    return mask;
}

Eigen::MatrixXd holiday_features(std::span<const EpochDay> days, std::span<const HolidaySpec> specs) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(days.size()),
                                                static_cast<Eigen::Index>(specs.size()));
    for (std::size_t h = 0; h < specs.size(); ++h) {
        std::vector<EpochDay> dates(specs[h].dates.begin(), specs[h].dates.end());
        std::sort(dates.begin(), dates.end());
        for (std::size_t r = 0; r < days.size(); ++r) {
            // Active when some date d satisfies d - lower <= day <= d + upper.
            const EpochDay day = days[r];
            auto it = std::lower_bound(dates.begin(), dates.end(), day - specs[h].upper_window);
            if (it != dates.end() && *it <= day + specs[h].lower_window) {
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h)) = 1.0;
            }
        }
    }
    return out;
}

namespace {

double lookup(const Covariates& covariates, const std::string& column, EpochDay day) {
    const auto col = covariates.find(column);
    if (col == covariates.end()) {
        fail(ErrorKind::MissingRegressorValue, "no values supplied for '" + column + "'");
    }
    const auto it = col->second.find(day);
    if (it == col->second.end()) {
        fail(ErrorKind::MissingRegressorValue,
             "'" + column + "' has no value for " + format_iso_date(day));
    }
    return it->second;
}

} // namespace

DesignContext make_design_context(const TimeSeries& train, const ModelConfig& config,
                                  const Covariates& covariates) {
    if (train.size() < 2) {
        fail(ErrorKind::EmptySeries, "at least two observations are required");
    }
    DesignContext ctx;
    ctx.scaling.t_start = train.first();
    ctx.scaling.t_span = static_cast<double>(train.last() - train.first());
    double y_max = 0.0;
    for (double v : train.values()) {
        y_max = std::max(y_max, std::abs(v));
    }
    ctx.scaling.y_scale = y_max > 0.0 ? y_max : 1.0;

    for (EpochDay d : place_changepoints(train.timestamps(), config.trend.n_changepoints,
                                         config.trend.changepoint_range)) {
        ctx.changepoints.push_back(ctx.scaling.time(d));
    }

    for (const auto& reg : config.regressors) {
        double sum = 0.0;
        std::vector<double> values;
        values.reserve(train.size());
        for (EpochDay d : train.timestamps()) {
            values.push_back(lookup(covariates, reg.name, d));
            sum += values.back();
        }
        RegressorNorm norm;
        norm.mean = sum / static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) {
            ss += (v - norm.mean) * (v - norm.mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        norm.stddev = sd > 0.0 ? sd : 1.0;
        ctx.regressor_norms.push_back(norm);
    }
    return ctx;
}

DesignMatrix build_design(std::span<const EpochDay> days, const ModelConfig& config,
                          const DesignContext& context, const Covariates& covariates) {
    DesignMatrix dm;
    dm.growth = config.trend.growth;
    dm.changepoints = context.changepoints;
    const auto n = static_cast<Eigen::Index>(days.size());
    dm.t.reserve(days.size());
    for (EpochDay d : days) {
        dm.t.push_back(context.scaling.time(d));
    }

    if (config.trend.growth == Growth::Logistic) {
        dm.capacity.reserve(days.size());
        for (EpochDay d : days) {
            const double cap = config.trend.capacity ? *config.trend.capacity : lookup(covariates, "cap", d);
            if (!(cap > 0.0)) {
                fail(ErrorKind::InvalidConfig, "capacity must be > 0 at " + format_iso_date(d));
            }
            dm.capacity.push_back(cap / context.scaling.y_scale);
        }
    }

    std::size_t width = dm.changepoints.size();
    dm.blocks.push_back({BlockKind::TrendBasis, "trend", 0, width, SeasonalityMode::Additive});
    for (const auto& s : config.seasonalities) {
        const auto w = 2 * static_cast<std::size_t>(s.fourier_order);
        dm.blocks.push_back({BlockKind::Seasonality, s.name, width, w, s.mode});
        width += w;
    }
    if (!config.holidays.empty()) {
        dm.blocks.push_back({BlockKind::Holidays, "holidays", width, config.holidays.size(),
                             SeasonalityMode::Additive});
        width += config.holidays.size();
    }
    if (!config.regressors.empty()) {
        dm.blocks.push_back({BlockKind::Regressors, "regressors", width, config.regressors.size(),
                             SeasonalityMode::Additive});
        width += config.regressors.size();
    }

    dm.columns = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(width));
    dm.prior_scales.assign(width, 0.0);

    for (std::size_t j = 0; j < dm.changepoints.size(); ++j) {
        dm.prior_scales[j] = config.trend.changepoint_prior_scale;
        for (Eigen::Index r = 0; r < n; ++r) {
            dm.columns(r, static_cast<Eigen::Index>(j)) =
                dm.t[static_cast<std::size_t>(r)] >= dm.changepoints[j] ? 1.0 : 0.0;
        }
    }

    std::size_t block = 1;
    for (const auto& s : config.seasonalities) {
        const auto& b = dm.blocks[block++];
        for (std::size_t c = 0; c < b.width; ++c) {
            dm.prior_scales[b.begin + c] = s.prior_scale;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto f = fourier_features(static_cast<double>(days[static_cast<std::size_t>(r)]),
                                            s.period, s.fourier_order);
            for (std::size_t c = 0; c < f.size(); ++c) {
                dm.columns(r, static_cast<Eigen::Index>(b.begin + c)) = f[c];
            }
        }
    }

    if (!config.holidays.empty()) {
        const auto& b = dm.blocks[block++];
        dm.columns.block(0, static_cast<Eigen::Index>(b.begin), n, static_cast<Eigen::Index>(b.width)) =
            holiday_features(days, config.holidays);
        for (std::size_t h = 0; h < config.holidays.size(); ++h) {
            dm.prior_scales[b.begin + h] = config.holidays[h].prior_scale;
        }
    }

    if (!config.regressors.empty()) {
        const auto& b = dm.blocks[block++];
        for (std::size_t i = 0; i < config.regressors.size(); ++i) {
            const auto& reg = config.regressors[i];
            const auto& norm = context.regressor_norms.at(i);
            dm.prior_scales[b.begin + i] = reg.prior_scale;
            for (Eigen::Index r = 0; r < n; ++r) {
                const double v = lookup(covariates, reg.name, days[static_cast<std::size_t>(r)]);
                dm.columns(r, static_cast<Eigen::Index>(b.begin + i)) = (v - norm.mean) / norm.stddev;
            }
        }
    }
    return dm;
}

DesignMatrix build_design(const TimeSeries& ts, const ModelConfig& config, const Covariates& covariates) {
    const auto ctx = make_design_context(ts, config, covariates);
    return build_design(ts.timestamps(), config, ctx, covariates);
}

} // namespace trendline
