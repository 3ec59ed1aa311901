#include "trendline/config.hpp"

#include "trendline/csv.hpp"
#include "trendline/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace trendline {

SeasonalitySpec yearly_seasonality(int fourier_order) {
    return {"yearly", kYearlyPeriod, fourier_order, 10.0, SeasonalityMode::Additive};
}

SeasonalitySpec weekly_seasonality(int fourier_order) {
    return {"weekly", kWeeklyPeriod, fourier_order, 10.0, SeasonalityMode::Additive};
}

ModelConfig ModelConfig::defaults() {
    ModelConfig cfg;
    cfg.seasonalities = {yearly_seasonality(), weekly_seasonality()};
    return cfg;
}

bool ModelConfig::has_multiplicative() const {
    return std::any_of(seasonalities.begin(), seasonalities.end(),
                       [](const auto& s) { return s.mode == SeasonalityMode::Multiplicative; });
}

namespace {

void check(bool ok, const std::string& message) {
    if (!ok) {
        fail(ErrorKind::InvalidConfig, message);
    }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ModelConfig::validate() const {
    check(trend.n_changepoints >= 0, "n_changepoints must be >= 0");
    check(std::isfinite(trend.changepoint_range) && trend.changepoint_range > 0.0 &&
              trend.changepoint_range <= 1.0,
          "changepoint_range must lie in (0, 1]");
    check(positive(trend.changepoint_prior_scale), "changepoint_prior_scale must be > 0");
    if (trend.capacity) {
        check(trend.growth == Growth::Logistic, "capacity is only meaningful for logistic growth");
        check(positive(*trend.capacity), "capacity must be > 0");
    }

    // Column names in the forecast export must be unambiguous.
    std::set<std::string> names{"ds", "yhat", "trend", "holidays"};
    for (const auto& s : seasonalities) {
        check(!s.name.empty(), "seasonality name must be non-empty");
        check(names.insert(s.name).second, "duplicate component name '" + s.name + "'");
        check(positive(s.period), "seasonality '" + s.name + "': period must be > 0");
        check(s.fourier_order >= 1, "seasonality '" + s.name + "': fourier_order must be >= 1");
        check(positive(s.prior_scale), "seasonality '" + s.name + "': prior_scale must be > 0");
    }
    std::set<std::string> holiday_names;
    for (const auto& h : holidays) {
        check(!h.name.empty(), "holiday name must be non-empty");
        check(holiday_names.insert(h.name).second, "duplicate holiday '" + h.name + "'");
        check(h.lower_window >= 0 && h.upper_window >= 0,
              "holiday '" + h.name + "': windows are day counts and must be >= 0");
        check(positive(h.prior_scale), "holiday '" + h.name + "': prior_scale must be > 0");
    }
    for (const auto& r : regressors) {
        check(!r.name.empty(), "regressor name must be non-empty");
        check(r.name != "cap", "'cap' is reserved for logistic capacity");
        check(names.insert(r.name).second, "duplicate component name '" + r.name + "'");
        check(positive(r.prior_scale), "regressor '" + r.name + "': prior_scale must be > 0");
    }
    for (std::size_t i = 0; i < interval_levels.size(); ++i) {
        const double lvl = interval_levels[i];
        check(lvl > 0.0 && lvl < 1.0, "interval levels must lie in (0, 1)");
        check(i == 0 || lvl > interval_levels[i - 1], "interval levels must be strictly increasing");
    }
    check(interval_samples >= 100, "interval_samples must be >= 100");
}

std::vector<HolidaySpec> load_holiday_calendar(const std::filesystem::path& path,
                                               double default_prior_scale) {
    const auto table = csv::read_file(path);
    const auto name_idx = table.require("holiday");
    const auto ds_idx = table.require("ds");
    const auto lower_idx = table.find("lower_window");
    const auto upper_idx = table.find("upper_window");
    const auto scale_idx = table.find("prior_scale");

    std::vector<HolidaySpec> out;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = "holiday calendar line " + std::to_string(table.line_numbers[r]);
        auto read_int = [&](std::optional<std::size_t> col) {
            if (!col || row[*col].empty()) {
                return 0;
            }
            const auto v = csv::parse_double(row[*col]);
            if (!v || *v != std::floor(*v)) {
                fail(ErrorKind::ParseError, where + ": window must be an integer");
            }
            return static_cast<int>(*v);
        };
        const int lower = read_int(lower_idx);
        const int upper = read_int(upper_idx);
        double scale = default_prior_scale;
        if (scale_idx && !row[*scale_idx].empty()) {
            const auto v = csv::parse_double(row[*scale_idx]);
            if (!v) {
                fail(ErrorKind::ParseError, where + ": invalid prior_scale");
            }
            scale = *v;
        }
        EpochDay day = 0;
        try {
            day = parse_iso_date(row[ds_idx]);
        } catch (const Error& e) {
            fail(ErrorKind::ParseError, where + ": " + e.what());
        }
        const auto& name = row[name_idx];
        auto [it, inserted] = index.emplace(name, out.size());
        if (inserted) {
            out.push_back(HolidaySpec{name, {}, lower, upper, scale});
        }
        auto& spec = out[it->second];
        if (spec.lower_window != lower || spec.upper_window != upper) {
            fail(ErrorKind::SchemaError, where + ": holiday '" + name + "' has inconsistent windows");
        }
        spec.dates.push_back(day);
    }
    for (auto& spec : out) {
        std::sort(spec.dates.begin(), spec.dates.end());
        spec.dates.erase(std::unique(spec.dates.begin(), spec.dates.end()), spec.dates.end());
    }
    return out;
}

} // namespace trendline
