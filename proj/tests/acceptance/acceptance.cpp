// End-to-end acceptance checks. Each criterion prints one line:
//   criterion <n>: PASS|FAIL <title> (<measurements>) [<seconds>s]
// The process exits nonzero when any criterion fails, except those listed
// with --expect-fail, which are still reported as FAIL.

#include "scratch.hpp"
#include "synthetic.hpp"

#include <trendline/baselines.hpp>
#include <trendline/cross_validation.hpp>
#include <trendline/csv.hpp>
#include <trendline/dm_test.hpp>
#include <trendline/forecast.hpp>
#include <trendline/metrics.hpp>
#include <trendline/objective.hpp>
#include <trendline/persistence.hpp>
#include <trendline/trend.hpp>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

namespace acceptance {

using namespace trendline;
using trendline::testing::day;
using trendline::testing::Generator;
using trendline::testing::read_text;
using trendline::testing::write_text;
using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    std::string cli;
    fs::path workdir;
};

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

int run_process(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) {
    return "'" + p.string() + "'";
}

void write_series(const TimeSeries& ts, const fs::path& path) {
    write_csv(TimeSeries({ts.timestamps().begin(), ts.timestamps().end()}, {ts.values().begin(), ts.values().end()},
                         "y"),
              path);
}

std::vector<double> scaled(std::span<const double> y, double scale) {
    std::vector<double> out(y.begin(), y.end());
    for (auto& v : out) {
        v /= scale;
    }
    return out;
}

double max_abs(std::span<const double> y) {
    double m = 0.0;
    for (double v : y) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

// --- 1 ---------------------------------------------------------------------

// Draws follow the changepoint prior for delta (Laplace, scale 0.05) and a
// broad range for the base rate. A continuous curve with slope r moves by
// exactly 2 eps |r| across [t - eps, t + eps], so the literal bound only
// holds where every adjacent slope stays within 0.5; the discontinuity net
// of that slope term is reported alongside.
Outcome trend_continuity(const Context&) {
    Generator gen(2001);
    CounterRng laplace(2001, 7);
    const double eps = 1e-9;
    double worst_literal = 0.0;
    double worst_net = 0.0;
    double worst_logistic = 0.0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t violations_with_small_slope = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto s = static_cast<std::size_t>(gen.uniform(1.0, 26.0));
        std::vector<double> cps(s);
        std::vector<double> delta(s);
        for (std::size_t j = 0; j < s; ++j) {
            cps[j] = gen.uniform(0.0, 1.0);
            delta[j] = laplace.laplace(0.05);
        }
        std::sort(cps.begin(), cps.end());
        const double k = gen.uniform(-2.0, 2.0);
        const double m = gen.uniform(-1.0, 1.0);
        const double cap = gen.uniform(0.5, 3.0);
        const auto gamma = logistic_gamma(cps, k, m, delta);
        double before = k;
        for (std::size_t j = 0; j < s; ++j) {
            const double after = before + delta[j];
            const double tj = cps[j];
            const double lo = linear_trend(tj - eps, k, m, delta, cps);
            const double hi = linear_trend(tj + eps, k, m, delta, cps);
            const double literal = std::abs(lo - hi);
            const double net = std::abs((hi - lo) - eps * (before + after));
            worst_literal = std::max(worst_literal, literal);
            worst_net = std::max(worst_net, net);
            if (literal > 1e-9) {
                ++violations;
                if (std::max(std::abs(before), std::abs(after)) <= 0.5) {
                    ++violations_with_small_slope;
                }
            }
            const double glo = logistic_trend(tj - eps, k, m, delta, gamma, cps, cap);
            const double ghi = logistic_trend(tj + eps, k, m, delta, gamma, cps, cap);
            worst_logistic = std::max(worst_logistic, std::abs(glo - ghi));
            ++checked;
            before = after;
        }
    }
    const bool pass = violations == 0 && worst_logistic <= 1e-9;
    return {pass, std::to_string(checked) + " changepoints; linear max |g(t-e)-g(t+e)| " + fmt(worst_literal) +
                      ", over bound at " + std::to_string(violations) + " (" +
                      std::to_string(violations_with_small_slope) + " with |slope| <= 0.5); jump net of slope " +
                      fmt(worst_net) + "; logistic max " + fmt(worst_logistic)};
}

// --- 2 ---------------------------------------------------------------------

Outcome gradient_check(const Context&) {
    const auto ts = trendline::testing::seasonal_retail_series(77, day("2022-03-01"), 200);
    ModelConfig config = ModelConfig::defaults();
    config.holidays = {{"event", {day("2022-05-10"), day("2022-08-01")}, 1, 1, 10.0}};
    const auto design = build_design(ts, config);
    const auto y = scaled(ts.values(), max_abs(ts.values()));
    const std::size_t dim = 2 + design.trend_width() + design.feature_width();
    // Fitting uses the same objective with the penalties weighted by the
    // noise variance; that variant is checked at the same points.
    const MapObjective weighted(design, y, 2.5e-3);

    Generator gen(5150);
    const double h = 1e-6;
    double worst = 0.0;
    double worst_normwise = 0.0;
    double worst_weighted = 0.0;
    for (int point = 0; point < 10; ++point) {
        std::vector<double> x(dim);
        for (auto& v : x) {
            v = gen.uniform(-0.5, 0.5);
        }
        const auto g = map_gradient(x, design, y);
        std::vector<double> gw(dim);
        weighted.value_and_gradient(x, gw);
        double diff2 = 0.0;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            auto xp = x;
            auto xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (map_objective(xp, design, y) - map_objective(xm, design, y)) / (2.0 * h);
            worst = std::max(worst, std::abs(g[i] - fd) / std::max(std::abs(fd), 1e-8));
            diff2 += (g[i] - fd) * (g[i] - fd);
            norm2 += fd * fd;
            const double fdw = (weighted.value(xp) - weighted.value(xm)) / (2.0 * h);
            worst_weighted = std::max(worst_weighted, std::abs(gw[i] - fdw) / std::max(std::abs(fdw), 1e-8));
        }
        worst_normwise = std::max(worst_normwise, std::sqrt(diff2 / norm2));
    }
    return {worst <= 1e-4 && worst_weighted <= 1e-4,
            std::to_string(dim) + " parameters x 10 points; max componentwise relative error " + fmt(worst) +
                ", max normwise " + fmt(worst_normwise) + "; noise-weighted objective " + fmt(worst_weighted)};
}

// --- 3 ---------------------------------------------------------------------

Outcome ridge_oracle(const Context&) {
    Generator gen(31337);
    double worst = 0.0;
    double noise = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const auto n = static_cast<std::size_t>(gen.uniform(150.0, 400.0));
        const EpochDay start = day("2019-01-01") + static_cast<EpochDay>(gen.uniform(0.0, 900.0));
        const auto days = trendline::testing::consecutive_days(start, n);
        const double wk = gen.uniform(0.5, 3.0);
        const double phase = gen.uniform(0.0, 6.0);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = static_cast<double>(days[i]);
            values[i] = 20.0 + 0.01 * static_cast<double>(i) + wk * std::sin(2.0 * std::numbers::pi * d / 7.0 + phase) +
                        2.0 * std::cos(2.0 * std::numbers::pi * d / 365.25) + gen.normal(0.7);
        }
        const TimeSeries ts(days, values);

        ModelConfig config;
        config.trend.n_changepoints = 0;
        config.seasonalities = {{"weekly", 7.0, 3, gen.uniform(0.05, 2.0), SeasonalityMode::Additive},
                                {"yearly", 365.25, 4, gen.uniform(0.05, 2.0), SeasonalityMode::Additive}};
        const EpochDay event = start + static_cast<EpochDay>(n / 2);
        config.holidays = {{"event", {event, event + 30}, 1, 2, gen.uniform(0.1, 5.0)}};
        const auto model = fit(ts, config);

        // Independent normal equations over hand-built columns:
        // [t, 1, weekly cos/sin, yearly cos/sin, holiday indicator].
        const double span = static_cast<double>(days.back() - days.front());
        const double ys = max_abs(values);
        const Eigen::Index p = 2 + 6 + 8 + 1;
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), p);
        Eigen::VectorXd b(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const auto d = static_cast<double>(days[i]);
            a(r, 0) = static_cast<double>(days[i] - days.front()) / span;
            a(r, 1) = 1.0;
            Eigen::Index c = 2;
            for (const auto& s : config.seasonalities) {
                for (int k = 1; k <= s.fourier_order; ++k) {
                    const double x = 2.0 * std::numbers::pi * k * d / s.period;
                    a(r, c++) = std::cos(x);
                    a(r, c++) = std::sin(x);
                }
            }
            const bool in_window = (days[i] >= event - 1 && days[i] <= event + 2) ||
                                   (days[i] >= event + 29 && days[i] <= event + 32);
            a(r, c) = in_window ? 1.0 : 0.0;
            b(r) = values[i] / ys;
        }
        Eigen::VectorXd penalty = Eigen::VectorXd::Zero(p);
        penalty.segment(2, 6).setConstant(1.0 / std::pow(config.seasonalities[0].prior_scale, 2));
        penalty.segment(8, 8).setConstant(1.0 / std::pow(config.seasonalities[1].prior_scale, 2));
        penalty(16) = 1.0 / std::pow(config.holidays[0].prior_scale, 2);
        // The fit is a joint MAP over the coefficients and the noise variance
        // v: for fixed v it is ridge with penalty v P, and v is the mean
        // squared residual. Iterate the closed form to that fixed point.
        const Eigen::MatrixXd gram = a.transpose() * a;
        const Eigen::VectorXd rhs = a.transpose() * b;
        Eigen::VectorXd theta;
        double v = 1.0;
        for (int round = 0; round < 1000; ++round) {
            Eigen::MatrixXd lhs = gram;
            lhs.diagonal() += v * penalty;
            theta = lhs.ldlt().solve(rhs);
            const double next = (a * theta - b).squaredNorm() / static_cast<double>(n);
            const bool settled = std::abs(next - v) <= 1e-15 * v;
            v = next;
            if (settled) {
                break;
            }
        }
        noise = std::max(noise, std::sqrt(v));

        const auto fitted = model.packed();
        if (fitted.size() != static_cast<std::size_t>(p)) {
            return {false, "parameter count " + std::to_string(fitted.size()) + " != " + std::to_string(p)};
        }
        for (std::size_t i = 0; i < fitted.size(); ++i) {
            worst = std::max(worst, std::abs(fitted[i] - theta(static_cast<Eigen::Index>(i))));
        }
    }
    return {worst <= 1e-6, "5 instances; max |theta_fit - theta_ridge| " + fmt(worst) +
                               " (scaled units; largest fixed-point noise sd " + fmt(noise) + ")"};
}

// --- 4 ---------------------------------------------------------------------

Outcome synthetic_recovery(const Context&) {
    const std::size_t n = 1000;
    const auto days = trendline::testing::consecutive_days(day("2020-01-06"), n);
    const std::vector<double> a{1.2, -0.4, 0.25};
    const std::vector<double> b{0.8, 0.6, -0.3};
    Generator gen(404);
    std::vector<double> trend(n);
    std::vector<double> weekly(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = static_cast<double>(i);
        // Slope 0.01 per day, then -0.004 after day 350, then 0.007 after day 700.
        trend[i] = 10.0 + 0.01 * x - 0.014 * std::max(0.0, x - 350.0) + 0.011 * std::max(0.0, x - 700.0);
        weekly[i] = trendline::testing::fourier_value(static_cast<double>(days[i]), 7.0, a, b);
        y[i] = trend[i] + weekly[i] + gen.normal(0.1);
    }
    const auto model = fit(TimeSeries(days, y), ModelConfig::defaults());
    const auto fc = predict_point(model, make_future_grid(model, 0));

    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sq += (fc.trend[i] - trend[i]) * (fc.trend[i] - trend[i]);
    }
    const double trend_rmse = std::sqrt(sq / static_cast<double>(n));

    const auto it = std::ranges::find_if(fc.seasonal, [](const NamedSeries& s) { return s.name == "weekly"; });
    if (it == fc.seasonal.end()) {
        return {false, "no weekly component"};
    }
    const auto& rec = it->values;
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += rec[i];
        mb += weekly[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (rec[i] - ma) * (weekly[i] - mb);
        saa += (rec[i] - ma) * (rec[i] - ma);
        sbb += (weekly[i] - mb) * (weekly[i] - mb);
    }
    const double corr = sab / std::sqrt(saa * sbb);
    return {trend_rmse <= 0.05 && corr >= 0.99,
            "trend RMSE " + fmt(trend_rmse) + " (<= 0.05), weekly correlation " + fmt(corr, 6) + " (>= 0.99)"};
}

// --- 5 ---------------------------------------------------------------------

Outcome interval_calibration(const Context&) {
    const double sigma = 1.0;
    const std::size_t train_n = 730;
    const std::size_t test_n = 100;
    std::size_t inside = 0;
    std::size_t total = 0;
    std::size_t nesting_violations = 0;
    ModelConfig config;
    config.seasonalities = {weekly_seasonality(3)};
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        Generator gen(900 + rep);
        const double level = gen.uniform(20.0, 60.0);
        const double slope = gen.uniform(-0.02, 0.02);
        const double amp = gen.uniform(1.0, 4.0);
        const auto days = trendline::testing::consecutive_days(day("2021-01-01"), train_n + test_n);
        std::vector<double> y(days.size());
        for (std::size_t i = 0; i < days.size(); ++i) {
            y[i] = level + slope * static_cast<double>(i) +
                   amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(days[i]) / 7.0) + gen.normal(sigma);
        }
        const TimeSeries train({days.begin(), days.begin() + train_n}, {y.begin(), y.begin() + train_n});
        const auto model = fit(train, config);
        const auto fc = predict(model, make_future_grid(model, static_cast<int>(test_n)), 42 + rep);
        const auto* b95 = fc.band(0.95);
        const auto* b80 = fc.band(0.80);
        if (!b95 || !b80) {
            return {false, "missing 80% or 95% band"};
        }
        for (std::size_t i = 0; i < fc.ds.size(); ++i) {
            if (!(b95->lower[i] < b80->lower[i] && b80->upper[i] < b95->upper[i])) {
                ++nesting_violations;
            }
            if (i >= train_n) {
                const double truth = y[i];
                inside += (truth >= b95->lower[i] && truth <= b95->upper[i]) ? 1 : 0;
                ++total;
            }
        }
    }
    const double cov = 100.0 * static_cast<double>(inside) / static_cast<double>(total);
    return {cov >= 90.0 && cov <= 98.0 && nesting_violations == 0,
            std::to_string(total) + " held-out points; 95% coverage " + fmt(cov, 4) + "% (in [90, 98]); " +
                std::to_string(nesting_violations) + " points where the 80% band is not strictly inside"};
}

// --- 6 ---------------------------------------------------------------------

Outcome metric_oracles(const Context&) {
    const std::vector<double> t{2.0, 4.0};
    const std::vector<double> p{1.0, 5.0};
    const double r = rmse(t, p);
    const double a = mae(t, p);
    const double m = mape(t, p).value_or(-1.0);
    const std::vector<double> truth{1.0, 2.0, 3.0};
    const std::vector<double> lo{0.0, 2.5, 2.0};
    const std::vector<double> hi{1.5, 3.0, 3.0};
    const double c = coverage(truth, lo, hi);
    const double err = std::max({std::abs(r - 1.0), std::abs(a - 1.0), std::abs(m - 37.5),
                                 std::abs(c - 200.0 / 3.0)});
    return {err <= 1e-12, "rmse " + fmt(r, 17) + ", mae " + fmt(a, 17) + ", mape " + fmt(m, 17) + "%, coverage " +
                              fmt(c, 17) + "%; max error " + fmt(err)};
}

// --- 7 ---------------------------------------------------------------------

Outcome dm_oracle(const Context&) {
    const std::vector<double> e1{2.0, 0.0, 2.0, 0.0};
    const std::vector<double> e2{1.0, 1.0, 1.0, 1.0};
    const auto r = dm_test(e1, e2, Loss::Squared, 1);
    // p = 2 (1 - Phi(1)) = erfc(1 / sqrt 2).
    const double p_expected = std::erfc(1.0 / std::numbers::sqrt2);
    bool ok = std::abs(r.statistic - 1.0) <= 1e-6 && std::abs(r.p_value - 0.317311) <= 1e-6 &&
              std::abs(r.p_value - p_expected) <= 1e-12;

    Generator gen(777);
    double worst_asym = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto n = static_cast<std::size_t>(gen.uniform(5.0, 200.0));
        const int h = 1 + rep % 4;
        std::vector<double> a(n);
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = gen.normal(1.0);
            b[i] = gen.normal(1.3);
        }
        const auto loss = rep % 2 ? Loss::Absolute : Loss::Squared;
        const auto ab = dm_test(a, b, loss, h);
        const auto ba = dm_test(b, a, loss, h);
        worst_asym = std::max({worst_asym, std::abs(ab.statistic + ba.statistic), std::abs(ab.p_value - ba.p_value)});
    }
    ok = ok && worst_asym <= 1e-12;
    const auto same = dm_test(e1, e1);
    ok = ok && same.statistic == 0.0 && same.p_value == 1.0;
    return {ok, "statistic " + fmt(r.statistic, 10) + ", p " + fmt(r.p_value, 10) + "; antisymmetry max " +
                    fmt(worst_asym) + " over 100 pairs; identical -> (" + fmt(same.statistic) + ", " +
                    fmt(same.p_value) + ")"};
}

// --- 8 ---------------------------------------------------------------------

Outcome cv_enumeration(const Context&) {
    const std::size_t n = 1826; // span of 1825 days
    const auto days = trendline::testing::consecutive_days(day("2015-01-01"), n);
    Generator gen(8);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 50.0 + 0.01 * static_cast<double>(i) +
               3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(days[i]) / 7.0) + gen.normal(1.0);
    }
    const TimeSeries ts(days, y);
    const int initial = 730;
    const int period = 90;
    const int horizon = 90;

    std::vector<EpochDay> brute;
    for (EpochDay c = ts.first(); c <= ts.last(); ++c) {
        const bool enough_history = c - ts.first() >= initial;
        const bool room_for_horizon = c + horizon <= ts.last();
        const bool on_grid = (ts.last() - horizon - c) % period == 0;
        if (enough_history && room_for_horizon && on_grid) {
            brute.push_back(c);
        }
    }
    const auto cutoffs = enumerate_cutoffs(ts, initial, period, horizon);

    ModelConfig config;
    config.trend.n_changepoints = 10;
    config.seasonalities = {weekly_seasonality(3)};
    config.interval_samples = 200;
    const auto folds = rolling_cv(config, ts, initial, period, horizon);
    std::size_t rows = 0;
    std::size_t leaks = 0;
    for (const auto& f : folds) {
        for (const auto& r : f.rows) {
            ++rows;
            leaks += (r.ds <= f.cutoff || r.ds > f.cutoff + horizon) ? 1 : 0;
        }
    }
    std::vector<EpochDay> fold_cutoffs;
    for (const auto& f : folds) {
        fold_cutoffs.push_back(f.cutoff);
    }
    const bool ok = cutoffs.size() == 12 && cutoffs == brute && fold_cutoffs == cutoffs && leaks == 0;
    return {ok, std::to_string(cutoffs.size()) + " cutoffs (brute force " + std::to_string(brute.size()) + ", " +
                    (cutoffs == brute ? "identical" : "different") + "); " + std::to_string(folds.size()) +
                    " folds, " + std::to_string(rows) + " rows, " + std::to_string(leaks) + " leaking"};
}

// --- 9 ---------------------------------------------------------------------

Outcome serialization_round_trip(const Context&) {
    const auto ts = trendline::testing::seasonal_retail_series(99, day("2020-01-01"), 500);
    ModelConfig config;
    config.holidays = {{"launch", {day("2020-06-01"), day("2021-02-14")}, 1, 1, 10.0}};
    config.seasonalities.push_back({"monthly", 30.5, 3, 5.0, SeasonalityMode::Multiplicative});
    const auto model = fit(ts, config);
    const auto text = model_to_text(model);
    const auto restored = model_from_text(text);

    const auto grid = make_future_grid(model, 60);
    const auto a = predict(model, grid, 7);
    const auto b = predict(restored, make_future_grid(restored, 60), 7);
    bool same = a.ds == b.ds && a.yhat == b.yhat && a.trend == b.trend && a.bands.size() == b.bands.size();
    for (std::size_t i = 0; same && i < a.bands.size(); ++i) {
        same = a.bands[i].lower == b.bands[i].lower && a.bands[i].upper == b.bands[i].upper;
    }
    const bool re_serialised = model_to_text(restored) == text;
    const bool refit_identical = model_to_text(fit(ts, config)) == text;
    return {same && re_serialised && refit_identical,
            std::string("predictions ") + (same ? "bit-identical" : "differ") + "; re-serialised document " +
                (re_serialised ? "identical" : "differs") + "; independent refit document " +
                (refit_identical ? "byte-identical" : "differs") + " (" + std::to_string(text.size()) + " bytes)"};
}

// --- 10 --------------------------------------------------------------------

std::vector<std::string> interval_columns(const fs::path& path) {
    const auto table = csv::read_file(path);
    std::vector<std::string> out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c].starts_with("yhat_lower_") || table.header[c].starts_with("yhat_upper_")) {
            out.push_back(table.header[c]);
            for (const auto& row : table.rows) {
                out.push_back(row[c]);
            }
        }
    }
    return out;
}

Outcome cli_seed_determinism(const Context& ctx) {
    const auto dir = ctx.workdir / "seed_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_series(trendline::testing::seasonal_retail_series(10, day("2021-01-01"), 400), dir / "data.csv");
    const auto model = dir / "model.json";
    if (run_process(quote(ctx.cli) + " fit --input " + quote(dir / "data.csv") + " --output " + quote(model) +
                    " > /dev/null") != 0) {
        return {false, "fit failed"};
    }
    auto predict = [&](const fs::path& out, int seed) {
        return run_process(quote(ctx.cli) + " predict --input " + quote(model) + " --periods 90 --seed " +
                           std::to_string(seed) + " --output " + quote(out));
    };
    if (predict(dir / "a.csv", 42) != 0 || predict(dir / "b.csv", 42) != 0 || predict(dir / "c.csv", 43) != 0) {
        return {false, "predict failed"};
    }
    const auto a = interval_columns(dir / "a.csv");
    const auto b = interval_columns(dir / "b.csv");
    const auto c = interval_columns(dir / "c.csv");
    const bool identical = !a.empty() && a == b;
    const bool seed_matters = a != c;
    return {identical && seed_matters,
            std::to_string(a.size()) + " interval cells; seed 42 twice " +
                (identical ? "byte-identical" : "different") + "; seed 43 " +
                (seed_matters ? "differs" : "identical (seed ignored)") + "; whole files " +
                (read_text(dir / "a.csv") == read_text(dir / "b.csv") ? "identical" : "differ")};
}

// --- 11 --------------------------------------------------------------------

Outcome retail_direction(const Context& ctx) {
    const auto dir = ctx.workdir / "retail_direction";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_text(dir / "additive.json", R"({"name": "additive"})");
    int wins = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        // Three training years and one test year, as in the retail study.
        const auto data = dir / ("data_" + std::to_string(seed) + ".csv");
        write_series(trendline::testing::seasonal_retail_series(seed, day("2014-01-01"), 365 * 4 + 1), data);
        const auto report_path = dir / ("compare_" + std::to_string(seed) + ".json");
        const int code = run_process(quote(ctx.cli) + " compare --input " + quote(data) + " --config " +
                                     quote(dir / "additive.json") + " --cutoff 2016-12-31 --baseline seasonal-naive"
                                     " --baseline lag-linear --seed " + std::to_string(seed) + " --output " +
                                     quote(report_path) + " > /dev/null");
        if (code != 0) {
            return {false, "compare failed for seed " + std::to_string(seed)};
        }
        const auto report = json::parse(read_text(report_path));
        std::map<std::string, double> rmse_by;
        for (const auto& m : report.at("models")) {
            rmse_by[m.at("name").get<std::string>()] = m.at("metrics").at("rmse").get<double>();
        }
        bool win = rmse_by.at("additive") < rmse_by.at("seasonal-naive") &&
                   rmse_by.at("additive") < rmse_by.at("lag-linear");
        double worst_p = 0.0;
        for (const auto& row : report.at("dm")) {
            if (row.at("model_a") != "additive") {
                continue;
            }
            const double p = row.at("p_value").get<double>();
            worst_p = std::max(worst_p, p);
            win = win && row.at("statistic").get<double>() < 0.0 && p < 0.05;
        }
        wins += win ? 1 : 0;
        per_seed += (seed > 1 ? "; " : "") + std::to_string(seed) + ": " + fmt(rmse_by.at("additive")) + "/" +
                    fmt(rmse_by.at("seasonal-naive")) + "/" + fmt(rmse_by.at("lag-linear")) + " p<=" + fmt(worst_p, 2);
    }
    return {wins >= 9, std::to_string(wins) + "/10 replications favour the additive model (RMSE additive/"
                                              "seasonal-naive/lag-linear, worst DM p) " + per_seed};
}

// --- 12 --------------------------------------------------------------------

// Records every feature row it is asked to score.
class RecordingRegressor final : public LagRegressor {
public:
    explicit RecordingRegressor(const LagRegressor& inner) : inner_(inner) {}
    double predict(const LagFeatureRow& row) const override {
        rows.push_back(row);
        return inner_.predict(row);
    }
    mutable std::vector<LagFeatureRow> rows;

private:
    const LagRegressor& inner_;
};

Outcome walk_forward_poisoning(const Context&) {
    const auto full = trendline::testing::seasonal_retail_series(12, day("2019-01-01"), 900);
    const std::size_t train_n = 800;
    const auto dates = full.timestamps();
    const TimeSeries train({dates.begin(), dates.begin() + train_n},
                           {full.values().begin(), full.values().begin() + train_n});
    const auto regressor = fit_linear_lag_regressor(train);
    const auto test_dates = dates.subspan(train_n);

    std::vector<double> clean(full.values().begin(), full.values().end());
    std::vector<double> poisoned = clean;
    const double sentinel = 1e12;
    for (std::size_t i = train_n; i < poisoned.size(); ++i) {
        poisoned[i] = sentinel;
    }
    const auto a = walk_forward_forecast(regressor, std::span(clean).first(train_n), test_dates);
    RecordingRegressor recorder(regressor);
    const auto b = walk_forward_forecast(recorder, std::span(poisoned).first(train_n), test_dates);

    std::size_t tainted = 0;
    for (const auto& row : recorder.rows) {
        for (double v : row.as_array()) {
            tainted += std::abs(v) >= sentinel / 10.0 ? 1 : 0;
        }
    }
    const bool equal = a == b;
    return {equal && tainted == 0 && a.size() == test_dates.size(),
            std::to_string(a.size()) + " steps; outputs " + (equal ? "exactly equal" : "differ") + "; " +
                std::to_string(tainted) + " feature values touched poisoned targets"};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome(const Context&)> run;
};

} // namespace acceptance

int main(int argc, char** argv) {
    using namespace acceptance;
    Context ctx;
    std::vector<int> expect_fail;
    std::vector<int> only;
    CLI::App app{"Acceptance checks"};
    app.add_option("--cli", ctx.cli, "Path to the trendline executable")->required();
    app.add_option("--workdir", ctx.workdir, "Scratch directory")->required();
    app.add_option("--expect-fail", expect_fail, "Criteria whose failure is documented and tolerated");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(ctx.workdir);

    const std::vector<Criterion> criteria = {
        {1, "trend continuity at changepoints", trend_continuity},
        {2, "objective gradient vs central differences", gradient_check},
        {3, "Gaussian-prior fit equals closed-form ridge", ridge_oracle},
        {4, "synthetic trend and weekly recovery", synthetic_recovery},
        {5, "interval calibration and nesting", interval_calibration},
        {6, "metric worked examples", metric_oracles},
        {7, "Diebold-Mariano oracle and antisymmetry", dm_oracle},
        {8, "CV cutoff enumeration and leakage", cv_enumeration},
        {9, "serialization round trip", serialization_round_trip},
        {10, "CLI predict seed determinism", cli_seed_determinism},
        {11, "additive model beats baselines on retail-like data", retail_direction},
        {12, "walk-forward ignores test targets", walk_forward_poisoning},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::ranges::find(only, c.id) == only.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(ctx);
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool tolerated = std::ranges::find(expect_fail, c.id) != expect_fail.end();
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << ' ' << c.title << " ("
                  << o.detail << ") [" << fmt(secs, 3) << "s]" << (!o.pass && tolerated ? " [expected]" : "")
                  << std::endl;
        if (!o.pass && !tolerated) {
            ++unexpected;
        }
    }
    return unexpected == 0 ? 0 : 1;
}
