#include "trendline/forecast.hpp"

#include "trendline/csv.hpp"
#include "trendline/error.hpp"
#include "trendline/objective.hpp"
#include "trendline/rng.hpp"

#include <algorithm>
#include <cmath>

namespace trendline {

const IntervalBand* Forecast::band(double level) const {
    for (const auto& b : bands) {
        if (std::abs(b.level - level) < 1e-12) {
            return &b;
        }
    }
    return nullptr;
}

FutureGrid make_future_grid(const FittedModel& model, int periods, const Covariates& future) {
    if (periods < 0) {
        fail(ErrorKind::InvalidConfig, "periods must be >= 0");
    }
    FutureGrid grid;
    const auto hist = model.history.timestamps();
    grid.timestamps.assign(hist.begin(), hist.end());
    for (int i = 1; i <= periods; ++i) {
        grid.timestamps.push_back(model.history.last() + i);
    }
    grid.covariates = model.history_covariates;
    for (const auto& [name, column] : future) {
        auto& dst = grid.covariates[name];
        for (const auto& [day, value] : column) {
            dst.emplace(day, value);
        }
    }

    std::vector<std::string> required;
    for (const auto& r : model.config.regressors) {
        required.push_back(r.name);
    }
    if (model.config.trend.growth == Growth::Logistic && !model.config.trend.capacity) {
        required.emplace_back("cap");
    }
    for (const auto& name : required) {
        const auto col = grid.covariates.find(name);
        for (EpochDay d : grid.timestamps) {
            if (col == grid.covariates.end() || !col->second.contains(d)) {
                fail(ErrorKind::MissingRegressorValue,
                     "'" + name + "' has no value for " + format_iso_date(d));
            }
        }
    }
    return grid;
}

namespace {

struct Evaluation {
    DesignMatrix design;
    Eigen::VectorXd g;     // scaled trend
    Eigen::VectorXd s_add; // scaled additive features
    Eigen::VectorXd s_mul; // scaled multiplicative features
};

Evaluation evaluate(const FittedModel& model, const FutureGrid& grid) {
    Evaluation ev;
    ev.design = build_design(grid.timestamps, model.config, model.context, grid.covariates);
    const auto& d = ev.design;
    const auto trend = trend_series(d.t, d.growth, model.k, model.m, model.delta, d.changepoints, d.capacity);
    ev.g = Eigen::Map<const Eigen::VectorXd>(trend.data(), static_cast<Eigen::Index>(trend.size()));

    const auto q = static_cast<Eigen::Index>(d.feature_width());
    const Eigen::Map<const Eigen::VectorXd> beta(model.beta.data(), q);
    const auto mask = d.multiplicative_mask();
    Eigen::VectorXd add = beta;
    Eigen::VectorXd mul = Eigen::VectorXd::Zero(q);
    for (Eigen::Index c = 0; c < q; ++c) {
        if (mask[static_cast<std::size_t>(c)]) {
            mul(c) = beta(c);
            add(c) = 0.0;
        }
    }
    const auto features = d.columns.rightCols(q);
    ev.s_add = features * add;
    ev.s_mul = features * mul;
    return ev;
}

Forecast point_forecast(const FittedModel& model, const FutureGrid& grid, const Evaluation& ev) {
    const auto& d = ev.design;
    const double scale = model.context.scaling.y_scale;
    const auto n = static_cast<Eigen::Index>(grid.timestamps.size());
    Forecast fc;
    fc.ds = grid.timestamps;
    fc.yhat.resize(static_cast<std::size_t>(n));
    fc.trend.resize(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto ri = static_cast<std::size_t>(r);
        fc.yhat[ri] = (ev.g(r) * (1.0 + ev.s_mul(r)) + ev.s_add(r)) * scale;
        fc.trend[ri] = ev.g(r) * scale;
    }

    const auto s = d.trend_width();
    for (const auto& block : d.blocks) {
        if (block.kind == BlockKind::TrendBasis) {
            continue;
        }
        const auto first = block.begin - s;
        auto contribution = [&](Eigen::Index r, std::size_t c) {
            const double v = d.columns(r, static_cast<Eigen::Index>(block.begin + c)) * model.beta[first + c];
            return block.mode == SeasonalityMode::Multiplicative ? v * ev.g(r) * scale : v * scale;
        };
        if (block.kind == BlockKind::Seasonality) {
            NamedSeries series{block.name, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
            for (Eigen::Index r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < block.width; ++c) {
                    series.values[static_cast<std::size_t>(r)] += contribution(r, c);
                }
            }
            fc.seasonal.push_back(std::move(series));
        } else if (block.kind == BlockKind::Holidays) {
            fc.holidays.assign(static_cast<std::size_t>(n), 0.0);
            for (Eigen::Index r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < block.width; ++c) {
                    fc.holidays[static_cast<std::size_t>(r)] += contribution(r, c);
                }
            }
        } else {
            for (std::size_t c = 0; c < block.width; ++c) {
                NamedSeries series{model.config.regressors[c].name,
                                   std::vector<double>(static_cast<std::size_t>(n), 0.0)};
                for (Eigen::Index r = 0; r < n; ++r) {
                    series.values[static_cast<std::size_t>(r)] = contribution(r, c);
                }
                fc.regressors.push_back(std::move(series));
            }
        }
    }
    if (fc.holidays.empty()) {
        fc.holidays.assign(static_cast<std::size_t>(n), 0.0);
    }
    return fc;
}

std::vector<IntervalBand> simulate(const FittedModel& model, const Evaluation& ev, std::uint64_t seed) {
    const auto& d = ev.design;
    const auto& cfg = model.config;
    const double scale = model.context.scaling.y_scale;
    const std::size_t n = d.rows();
    const auto samples = static_cast<std::size_t>(cfg.interval_samples);

    // Only rows after the training span see simulated trend changes.
    std::vector<std::size_t> future_rows;
    std::vector<double> future_t;
    std::vector<double> future_cap;
    double horizon_end = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
        if (d.t[r] > 1.0) {
            future_rows.push_back(r);
            future_t.push_back(d.t[r]);
            if (d.growth == Growth::Logistic) {
                future_cap.push_back(d.capacity[r]);
            }
            horizon_end = std::max(horizon_end, d.t[r]);
        }
    }

    double mean_abs_delta = 0.0;
    for (double v : model.delta) {
        mean_abs_delta += std::abs(v);
    }
    if (!model.delta.empty()) {
        mean_abs_delta /= static_cast<double>(model.delta.size());
    }
    const double change_rate = static_cast<double>(model.delta.size());
    const bool simulate_trend = !future_rows.empty() && mean_abs_delta > 0.0 && change_rate > 0.0;

    std::vector<double> draws(n * samples);
    std::vector<double> g(ev.g.data(), ev.g.data() + ev.g.size());
    for (std::size_t s = 0; s < samples; ++s) {
        CounterRng rng(seed, s);
        std::copy(ev.g.data(), ev.g.data() + ev.g.size(), g.begin());
        if (simulate_trend) {
            const auto count = rng.poisson(change_rate * (horizon_end - 1.0));
            std::vector<double> locations(count);
            for (auto& loc : locations) {
                loc = 1.0 + (horizon_end - 1.0) * rng.uniform();
            }
            std::sort(locations.begin(), locations.end());
            if (count > 0) {
                std::vector<double> cps = d.changepoints;
                std::vector<double> delta = model.delta;
                for (double loc : locations) {
                    cps.push_back(loc);
                    delta.push_back(rng.laplace(mean_abs_delta));
                }
                const auto sim = trend_series(future_t, d.growth, model.k, model.m, delta, cps, future_cap);
                for (std::size_t i = 0; i < future_rows.size(); ++i) {
                    g[future_rows[i]] = sim[i];
                }
            }
        }
        for (std::size_t r = 0; r < n; ++r) {
            const auto ri = static_cast<Eigen::Index>(r);
            const double noise = model.sigma * rng.normal();
            draws[r * samples + s] = (g[r] * (1.0 + ev.s_mul(ri)) + ev.s_add(ri) + noise) * scale;
        }
    }

    std::vector<IntervalBand> bands;
    for (double level : cfg.interval_levels) {
        bands.push_back({level, std::vector<double>(n), std::vector<double>(n)});
    }
    std::vector<double> row(samples);
    for (std::size_t r = 0; r < n; ++r) {
        std::copy(draws.begin() + static_cast<std::ptrdiff_t>(r * samples),
                  draws.begin() + static_cast<std::ptrdiff_t>((r + 1) * samples), row.begin());
        std::sort(row.begin(), row.end());
        for (auto& band : bands) {
            band.lower[r] = quantile_type7(row, (1.0 - band.level) / 2.0);
            band.upper[r] = quantile_type7(row, (1.0 + band.level) / 2.0);
        }
    }
    return bands;
}

} // namespace

double quantile_type7(std::vector<double>& values, double q) {
    if (values.empty()) {
        fail(ErrorKind::EmptyInput, "quantile of an empty sample");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
        std::sort(values.begin(), values.end());
    }
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Forecast predict_point(const FittedModel& model, const FutureGrid& grid) {
    const auto ev = evaluate(model, grid);
    return point_forecast(model, grid, ev);
}

Forecast predict(const FittedModel& model, const FutureGrid& grid, std::uint64_t seed) {
    const auto ev = evaluate(model, grid);
    auto fc = point_forecast(model, grid, ev);
    fc.bands = simulate(model, ev, seed);
    return fc;
}

Forecast predict(const FittedModel& model, const FutureGrid& grid) {
    return predict(model, grid, model.config.seed);
}

std::vector<IntervalBand> simulate_intervals(const FittedModel& model, const FutureGrid& grid,
                                             std::uint64_t seed) {
    return simulate(model, evaluate(model, grid), seed);
}

std::string level_label(double level) {
    const double pct = level * 100.0;
    if (std::abs(pct - std::round(pct)) < 1e-9) {
        return std::to_string(static_cast<long long>(std::llround(pct)));
    }
    auto text = csv::format_double(pct);
    std::replace(text.begin(), text.end(), '.', '_');
    return text;
}

std::string forecast_to_csv(const Forecast& fc) {
    std::string out = "ds,yhat";
    for (const auto& b : fc.bands) {
        const auto label = level_label(b.level);
        out += ",yhat_lower_" + label + ",yhat_upper_" + label;
    }
    out += ",trend";
    for (const auto& s : fc.seasonal) {
        out += "," + s.name;
    }
    out += ",holidays";
    for (const auto& r : fc.regressors) {
        out += "," + r.name;
    }
    out += '\n';
    for (std::size_t i = 0; i < fc.ds.size(); ++i) {
        out += format_iso_date(fc.ds[i]);
        out += ',' + csv::format_double(fc.yhat[i]);
        for (const auto& b : fc.bands) {
            out += ',' + csv::format_double(b.lower[i]);
            out += ',' + csv::format_double(b.upper[i]);
        }
        out += ',' + csv::format_double(fc.trend[i]);
        for (const auto& s : fc.seasonal) {
            out += ',' + csv::format_double(s.values[i]);
        }
        out += ',' + csv::format_double(fc.holidays[i]);
        for (const auto& r : fc.regressors) {
            out += ',' + csv::format_double(r.values[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace trendline
