#pragma once

#include "trendline/calendar.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trendline {

enum class Growth { Linear, Logistic };
enum class SeasonalityMode { Additive, Multiplicative };

struct TrendSpec {
    Growth growth = Growth::Linear;
    int n_changepoints = 25;
    double changepoint_range = 0.8;
    double changepoint_prior_scale = 0.05;
    /// Constant saturation level for logistic growth. When unset, logistic
    /// models read a per-date `cap` covariate instead.
    std::optional<double> capacity;
};

struct SeasonalitySpec {
    std::string name;
    double period = 7.0;
    int fourier_order = 3;
    double prior_scale = 10.0;
    SeasonalityMode mode = SeasonalityMode::Additive;
};

/// One named event. Every listed date is widened to
/// [date - lower_window, date + upper_window], both counts in days.
struct HolidaySpec {
    std::string name;
    std::vector<EpochDay> dates;
    int lower_window = 0;
    int upper_window = 0;
    double prior_scale = 10.0;
};

struct RegressorSpec {
    std::string name;
    double prior_scale = 10.0;
};

struct ModelConfig {
    std::string name = "additive";
    TrendSpec trend;
    std::vector<SeasonalitySpec> seasonalities;
    std::vector<HolidaySpec> holidays;
    std::vector<RegressorSpec> regressors;
    std::vector<double> interval_levels = {0.80, 0.95};
    int interval_samples = 1000;
    std::uint64_t seed = 42;

    /// Linear trend, yearly (N=10) and weekly (N=4) additive seasonality.
    static ModelConfig defaults();

    /// Throws InvalidConfig describing the first violated constraint.
    void validate() const;

    bool has_multiplicative() const;
};

inline constexpr double kYearlyPeriod = 365.25;
inline constexpr double kWeeklyPeriod = 7.0;

SeasonalitySpec yearly_seasonality(int fourier_order = 10);
SeasonalitySpec weekly_seasonality(int fourier_order = 4);

/// Reads a `holiday,ds,lower_window,upper_window` calendar. Rows sharing a
/// holiday name become one HolidaySpec and must agree on their windows.
/// An optional `prior_scale` column is honoured when present.
std::vector<HolidaySpec> load_holiday_calendar(const std::filesystem::path& path,
                                               double default_prior_scale = 10.0);

} // namespace trendline
