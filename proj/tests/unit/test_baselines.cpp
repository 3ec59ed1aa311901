#include <doctest.h>

#include "synthetic.hpp"

#include <trendline/baselines.hpp>
#include <trendline/error.hpp>
#include <trendline/metrics.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

using namespace trendline;
using trendline::testing::day;

namespace {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::IoError;
}

class LastValue final : public LagRegressor {
public:
    double predict(const LagFeatureRow& row) const override { return row.lag_1; }
};

TimeSeries random_walk(std::uint64_t seed, std::size_t n) {
    trendline::testing::Generator gen(seed);
    std::vector<double> y(n);
    double level = 50.0;
    for (std::size_t i = 0; i < n; ++i) {
        level += gen.normal(1.0);
        y[i] = level + 5.0 * std::sin(static_cast<double>(i) * 2.0 * 3.141592653589793 / 7.0);
    }
    return TimeSeries(trendline::testing::consecutive_days(day("2020-01-01"), n), y);
}

} // namespace

TEST_CASE("naive and seasonal naive") {
    const std::vector<double> train{1, 2, 3, 4, 5};
    CHECK(naive_forecast(train, 3) == std::vector<double>{5, 5, 5});
    CHECK(naive_forecast(train, 0).empty());
    CHECK(kind_of([] { naive_forecast(std::vector<double>{}, 1); }) == ErrorKind::EmptySeries);

    std::vector<double> periodic(21);
    for (std::size_t i = 0; i < periodic.size(); ++i) {
        periodic[i] = static_cast<double>((i * 3) % 7);
    }
    const auto sn = seasonal_naive(std::span<const double>(periodic).first(14), 7, 7);
    CHECK(rmse(std::span<const double>(periodic).last(7), sn) == 0.0);
    CHECK(kind_of([] { seasonal_naive(std::vector<double>{1, 2}, 3, 7); }) == ErrorKind::SeriesShorterThanPeriod);

    const std::vector<double> constant(10, 4.0);
    CHECK(rmse(naive_forecast(constant, 10), constant) == 0.0);

    trendline::testing::Generator gen(2);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(static_cast<std::size_t>(gen.uniform(1, 40)));
        for (auto& x : v) {
            x = gen.normal();
        }
        const auto h = static_cast<std::size_t>(gen.uniform(0, 30));
        CHECK(seasonal_naive(v, h, 1) == naive_forecast(v, h));
    }
}

TEST_CASE("lag features by index arithmetic") {
    std::vector<double> history(365);
    std::iota(history.begin(), history.end(), 1.0);
    const EpochDay monday = day("2024-01-01");
    REQUIRE(day_of_week(monday) == 0);
    const auto row = build_lag_features(history, monday);
    CHECK(row.lag_1 == 365);
    CHECK(row.lag_7 == 359);
    CHECK(row.lag_30 == 336);
    CHECK(row.lag_365 == 1);
    CHECK(row.rolling_mean_7 == 362);
    CHECK(row.rolling_mean_30 == 350.5);
    CHECK(row.day_of_week == 0);
    CHECK(row.month == 1);

    const std::vector<double> constant(400, 2.5);
    const auto c = build_lag_features(constant, monday);
    CHECK(c.lag_1 == 2.5);
    CHECK(c.lag_365 == 2.5);
    CHECK(c.rolling_mean_7 == 2.5);
    CHECK(c.rolling_mean_30 == 2.5);

    CHECK(kind_of([] { build_lag_features(std::vector<double>(364, 1.0), 0); }) == ErrorKind::InsufficientHistory);
}

TEST_CASE("walk-forward recursion") {
    const auto ts = random_walk(1, 400);
    const std::vector<EpochDay> test_dates{ts.last() + 1, ts.last() + 2, ts.last() + 3};

    const auto naive = walk_forward_forecast(LastValue{}, ts.values(), test_dates);
    CHECK(naive == naive_forecast(ts.values(), 3));
    CHECK(walk_forward_forecast(LastValue{}, ts.values(), {}).empty());

    std::array<double, kLagFeatureCount> w{0.5, 0.2, 0.1, 0.05, 0.1, 0.05, 0.01, -0.02};
    const LinearLagRegressor reg(1.5, w);
    const auto out = walk_forward_forecast(reg, ts.values(), test_dates);

    // Hand-unrolled three steps.
    std::vector<double> h(ts.values().begin(), ts.values().end());
    auto step = [&](EpochDay date) {
        const std::size_t n = h.size();
        const double r7 = (h[n - 1] + h[n - 2] + h[n - 3] + h[n - 4] + h[n - 5] + h[n - 6] + h[n - 7]) / 7.0;
        double r30 = 0.0;
        for (std::size_t i = n - 30; i < n; ++i) {
            r30 += h[i];
        }
        r30 /= 30.0;
        const double y = 1.5 + 0.5 * h[n - 1] + 0.2 * h[n - 7] + 0.1 * h[n - 30] + 0.05 * h[n - 365] + 0.1 * r7 +
                         0.05 * r30 + 0.01 * day_of_week(date) - 0.02 * month_of(date);
        h.push_back(y);
        return y;
    };
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(out[i] == doctest::Approx(step(test_dates[i])).epsilon(1e-13));
    }

    CHECK(kind_of([&] { walk_forward_forecast(reg, ts.values().first(300), test_dates); }) ==
          ErrorKind::InsufficientHistory);
}

TEST_CASE("walk-forward never reads test targets") {
    const auto full = random_walk(5, 500);
    const auto train = TimeSeries({full.timestamps().begin(), full.timestamps().begin() + 430},
                                  {full.values().begin(), full.values().begin() + 430});
    const auto reg = fit_linear_lag_regressor(train);
    const std::vector<EpochDay> test_dates(full.timestamps().begin() + 430, full.timestamps().end());

    // The API cannot see test targets; poisoning the buffer beyond the
    // training prefix must therefore change nothing.
    std::vector<double> buffer(full.values().begin(), full.values().end());
    const auto clean = walk_forward_forecast(reg, std::span<const double>(buffer).first(430), test_dates);
    for (std::size_t i = 430; i < buffer.size(); ++i) {
        buffer[i] = 1e300;
    }
    const auto poisoned = walk_forward_forecast(reg, std::span<const double>(buffer).first(430), test_dates);
    CHECK(clean == poisoned);
}

TEST_CASE("incremental rows equal batch rows on the realised history") {
    const auto ts = random_walk(3, 420);
    const auto batch = batch_lag_features(ts);
    REQUIRE(batch.size() == 55);
    std::vector<double> history(ts.values().begin(), ts.values().begin() + 365);
    for (std::size_t i = 365; i < ts.size(); ++i) {
        CHECK(build_lag_features(history, ts.timestamps()[i]) == batch[i - 365]);
        history.push_back(ts.values()[i]);
    }
}

TEST_CASE("lag regressor fitting") {
    SUBCASE("exact linear target") {
        const auto ts = random_walk(8, 600);
        const std::array<double, kLagFeatureCount> w{0.3, -0.2, 0.1, 0.4, 0.25, -0.15, 0.7, -0.3};
        // Each target is an exact function of the values before it.
        std::vector<double> z(ts.values().begin(), ts.values().end());
        for (std::size_t i = 365; i < z.size(); ++i) {
            const auto x = build_lag_features(std::span<const double>(z).first(i), ts.timestamps()[i]).as_array();
            double v = 2.0;
            for (std::size_t j = 0; j < w.size(); ++j) {
                v += w[j] * x[j];
            }
            z[i] = v;
        }
        const auto reg = fit_linear_lag_regressor(TimeSeries({ts.timestamps().begin(), ts.timestamps().end()}, z));
        for (std::size_t j = 0; j < w.size(); ++j) {
            CHECK(std::abs(reg.weights()[j] - w[j]) <= 1e-6);
        }
        CHECK(std::abs(reg.intercept() - 2.0) <= 1e-6 * 50);
    }
    SUBCASE("normal-equations oracle") {
        const auto ts = random_walk(9, 700);
        const auto rows = batch_lag_features(ts);
        const auto reg = fit_linear_lag_regressor(ts);
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd x(n, 9);
        Eigen::VectorXd y(n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto a = rows[static_cast<std::size_t>(r)].as_array();
            x(r, 0) = 1.0;
            for (int c = 0; c < 8; ++c) {
                x(r, c + 1) = a[static_cast<std::size_t>(c)];
            }
            y(r) = ts.values()[static_cast<std::size_t>(r) + 365];
        }
        Eigen::MatrixXd gram = x.transpose() * x;
        gram.diagonal().tail(8).array() += kLagRidgePenalty;
        const Eigen::VectorXd sol = gram.colPivHouseholderQr().solve(x.transpose() * y);
        CHECK(std::abs(reg.intercept() - sol(0)) <= 1e-8 * std::max(1.0, std::abs(sol(0))));
        for (int j = 0; j < 8; ++j) {
            CHECK(std::abs(reg.weights()[static_cast<std::size_t>(j)] - sol(j + 1)) <= 1e-8);
        }
    }
    SUBCASE("constant target is singular without calendar variation") {
        const TimeSeries flat(trendline::testing::consecutive_days(day("2020-01-01"), 400), std::vector<double>(400, 3.0));
        // Lags and rolling means are all identical columns; only the ridge
        // term keeps the system solvable.
        const auto reg = fit_linear_lag_regressor(flat);
        const double pred = reg.predict(build_lag_features(flat.values(), flat.last() + 1));
        CHECK(pred == doctest::Approx(3.0).epsilon(1e-6));
    }
    SUBCASE("too short") {
        const TimeSeries short_ts(trendline::testing::consecutive_days(0, 365), std::vector<double>(365, 1.0));
        CHECK(kind_of([&] { fit_linear_lag_regressor(short_ts); }) == ErrorKind::InsufficientHistory);
    }
}
