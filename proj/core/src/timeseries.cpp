#include "trendline/timeseries.hpp"

#include "trendline/csv.hpp"
#include "trendline/error.hpp"

#include <algorithm>
#include <numeric>

namespace trendline {

TimeSeries::TimeSeries(std::vector<EpochDay> timestamps, std::vector<double> values, std::string name)
    : timestamps_(std::move(timestamps)), values_(std::move(values)), name_(std::move(name)) {
    if (timestamps_.size() != values_.size()) {
        fail(ErrorKind::LengthMismatch, "timestamps and values differ in length");
    }
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (timestamps_[i] == timestamps_[i - 1]) {
            fail(ErrorKind::DuplicateTimestamp, "duplicate date " + format_iso_date(timestamps_[i]));
        }
        if (timestamps_[i] < timestamps_[i - 1]) {
            fail(ErrorKind::ParseError, "timestamps must be strictly increasing");
        }
    }
}

bool TimeSeries::has_missing() const {
    return std::any_of(values_.begin(), values_.end(), is_missing);
}

void TimeSeries::require_dense() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (is_missing(values_[i])) {
            fail(ErrorKind::MissingValues,
                 "missing value at " + format_iso_date(timestamps_[i]) + " (forward-fill first)");
        }
    }
}

bool TimeSeries::operator==(const TimeSeries& other) const {
    if (timestamps_ != other.timestamps_ || values_.size() != other.values_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const bool a = is_missing(values_[i]);
        const bool b = is_missing(other.values_[i]);
        if (a != b || (!a && values_[i] != other.values_[i])) {
            return false;
        }
    }
    return true;
}

namespace {

bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA";
}

TimeSeries series_from_table(const csv::Table& table, const std::string& date_column,
                             const std::string& value_column) {
    const auto date_idx = table.require(date_column);
    const auto value_idx = table.require(value_column);
    if (table.rows.empty()) {
        fail(ErrorKind::EmptySeries, "no data rows");
    }
    std::vector<std::pair<EpochDay, double>> rows;
    rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto row_label = "line " + std::to_string(table.line_numbers[r]);
        EpochDay day = 0;
        try {
            day = parse_iso_date(row[date_idx]);
        } catch (const Error& e) {
            fail(ErrorKind::ParseError, row_label + ": " + e.what());
        }
        double value = kMissing;
        if (!is_missing_token(row[value_idx])) {
            const auto parsed = csv::parse_double(row[value_idx]);
            if (!parsed) {
                fail(ErrorKind::ParseError, row_label + ": invalid number '" + row[value_idx] + "'");
            }
            value = *parsed;
        }
        rows.emplace_back(day, value);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<EpochDay> ts;
    std::vector<double> vs;
    ts.reserve(rows.size());
    vs.reserve(rows.size());
    for (const auto& [d, v] : rows) {
        if (!ts.empty() && ts.back() == d) {
            fail(ErrorKind::DuplicateTimestamp, "duplicate date " + format_iso_date(d));
        }
        ts.push_back(d);
        vs.push_back(v);
    }
    return TimeSeries(std::move(ts), std::move(vs), value_column);
}

} // namespace

TimeSeries parse_series_csv(std::string_view text, const std::string& date_column,
                            const std::string& value_column) {
    return series_from_table(csv::parse(text), date_column, value_column);
}

TimeSeries load_csv(const std::filesystem::path& path, const std::string& date_column,
                    const std::string& value_column) {
    return series_from_table(csv::read_file(path), date_column, value_column);
}

std::string series_to_csv(const TimeSeries& ts) {
    std::string out = "ds," + ts.name() + "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out += format_iso_date(ts.timestamps()[i]);
        out += ',';
        out += is_missing(ts.values()[i]) ? std::string("NA") : csv::format_double(ts.values()[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
    csv::write_atomic(path, series_to_csv(ts));
}

Covariates load_covariates(const std::filesystem::path& path, const std::string& date_column,
                           const std::vector<std::string>& columns) {
    const auto table = csv::read_file(path);
    const auto date_idx = table.require(date_column);
    Covariates out;
    for (const auto& name : columns) {
        const auto idx = table.find(name);
        if (!idx) {
            continue;
        }
        auto& column = out[name];
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& cell = table.rows[r][*idx];
            if (is_missing_token(cell)) {
                continue;
            }
            const auto parsed = csv::parse_double(cell);
            if (!parsed) {
                fail(ErrorKind::ParseError,
                     "line " + std::to_string(table.line_numbers[r]) + ": invalid number '" + cell + "' in column " + name);
            }
            column[parse_iso_date(table.rows[r][date_idx])] = *parsed;
        }
    }
    return out;
}

TimeSeries log_transform(const TimeSeries& ts, double offset) {
    if (!(offset >= 0.0)) {
        fail(ErrorKind::DomainError, "log offset must be nonnegative");
    }
    std::vector<double> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double v = ts.values()[i];
        if (is_missing(v)) {
            out[i] = kMissing;
            continue;
        }
        if (!(v + offset > 0.0)) {
            fail(ErrorKind::DomainError, "value " + csv::format_double(v) + " at " +
                                             format_iso_date(ts.timestamps()[i]) +
                                             " is not positive after offset");
        }
        out[i] = std::log(v + offset);
    }
    return TimeSeries({ts.timestamps().begin(), ts.timestamps().end()}, std::move(out), ts.name());
}

TimeSeries forward_fill(const TimeSeries& ts) {
    if (ts.empty()) {
        return ts;
    }
    if (is_missing(ts.values()[0])) {
        fail(ErrorKind::LeadingMissing, "first observation is missing; nothing to carry forward");
    }
    std::vector<double> out(ts.values().begin(), ts.values().end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (is_missing(out[i])) {
            out[i] = out[i - 1];
        }
    }
    return TimeSeries({ts.timestamps().begin(), ts.timestamps().end()}, std::move(out), ts.name());
}

TimeSeries filter_weekdays(const TimeSeries& ts) {
    std::vector<EpochDay> days;
    std::vector<double> vals;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (is_weekday(ts.timestamps()[i])) {
            days.push_back(ts.timestamps()[i]);
            vals.push_back(ts.values()[i]);
        }
    }
    if (days.empty()) {
        fail(ErrorKind::EmptySeries, "no weekday observations");
    }
    return TimeSeries(std::move(days), std::move(vals), ts.name());
}

SplitResult chronological_split(const TimeSeries& ts, EpochDay cutoff) {
    if (ts.empty() || cutoff < ts.first() || cutoff >= ts.last()) {
        fail(ErrorKind::CutoffOutOfRange, "cutoff " + format_iso_date(cutoff) + " outside series range");
    }
    const auto ds = ts.timestamps();
    const auto split = static_cast<std::size_t>(
        std::upper_bound(ds.begin(), ds.end(), cutoff) - ds.begin());
    const auto vs = ts.values();
    SplitResult out;
    out.cutoff = cutoff;
    out.train = TimeSeries({ds.begin(), ds.begin() + split}, {vs.begin(), vs.begin() + split}, ts.name());
    out.test = TimeSeries({ds.begin() + split, ds.end()}, {vs.begin() + split, vs.end()}, ts.name());
    return out;
}

} // namespace trendline
