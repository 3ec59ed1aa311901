#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace trendline {

/// Calendar date as a count of days since 1970-01-01 (UTC).
using EpochDay = std::int64_t;

/// Parses a strict `YYYY-MM-DD` date. Anything carrying a time-of-day part
/// is rejected, since the library only handles daily data.
EpochDay parse_iso_date(std::string_view text);

std::string format_iso_date(EpochDay day);

/// Monday = 0 ... Sunday = 6.
int day_of_week(EpochDay day);

/// 1 ... 12.
int month_of(EpochDay day);

inline bool is_weekday(EpochDay day) { return day_of_week(day) < 5; }

} // namespace trendline
