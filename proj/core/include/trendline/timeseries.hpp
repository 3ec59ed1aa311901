#pragma once

#include "trendline/calendar.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace trendline {

/// Marker for an unobserved value. Only loaders and forward_fill see it;
/// anything handed to the model must be dense.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Daily observations keyed by strictly increasing epoch-days.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::vector<EpochDay> timestamps, std::vector<double> values, std::string name = "y");

    std::size_t size() const { return timestamps_.size(); }
    bool empty() const { return timestamps_.empty(); }

    std::span<const EpochDay> timestamps() const { return timestamps_; }
    std::span<const double> values() const { return values_; }
    const std::string& name() const { return name_; }

    EpochDay first() const { return timestamps_.front(); }
    EpochDay last() const { return timestamps_.back(); }

    bool has_missing() const;

    /// Throws MissingValues if any entry is still a missing marker.
    void require_dense() const;

    bool operator==(const TimeSeries& other) const;

private:
    std::vector<EpochDay> timestamps_;
    std::vector<double> values_;
    std::string name_ = "y";
};

struct SplitResult {
    TimeSeries train;
    TimeSeries test;
    EpochDay cutoff = 0;
};

/// Per-timestamp side columns (external regressors, logistic capacity).
using DatedValues = std::map<EpochDay, double>;
using Covariates = std::map<std::string, DatedValues>;

/// Reads a dated value column. Empty fields and "NA" become missing markers;
/// rows are sorted ascending and duplicate dates rejected.
TimeSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                    const std::string& value_column);

TimeSeries parse_series_csv(std::string_view text, const std::string& date_column,
                            const std::string& value_column);

/// `ds,<name>` with values printed in shortest round-trip form, missing as NA.
std::string series_to_csv(const TimeSeries& ts);
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);

/// Loads the named columns (when present) from a dated CSV. Columns absent
/// from the file are simply not returned; missing cells are skipped.
Covariates load_covariates(const std::filesystem::path& path, const std::string& date_column,
                           const std::vector<std::string>& columns);

TimeSeries log_transform(const TimeSeries& ts, double offset);
TimeSeries forward_fill(const TimeSeries& ts);
TimeSeries filter_weekdays(const TimeSeries& ts);

/// Points at or before `cutoff` go to train, the rest to test.
SplitResult chronological_split(const TimeSeries& ts, EpochDay cutoff);

} // namespace trendline
