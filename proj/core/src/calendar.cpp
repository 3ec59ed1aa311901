#include "trendline/calendar.hpp"

#include "trendline/error.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>

namespace trendline {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (!std::isdigit(c)) {
            return -1;
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

} // namespace

EpochDay parse_iso_date(std::string_view text) {
    if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ')) {
        fail(ErrorKind::ParseError,
             "sub-daily timestamp '" + std::string(text) + "' is not supported");
    }
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        fail(ErrorKind::ParseError, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const int y = parse_digits(text, 0, 4);
    const int m = parse_digits(text, 5, 2);
    const int d = parse_digits(text, 8, 2);
    if (y < 0 || m < 0 || d < 0) {
        fail(ErrorKind::ParseError, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        fail(ErrorKind::ParseError, "invalid calendar date '" + std::string(text) + "'");
    }
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(EpochDay day) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int day_of_week(EpochDay day) {
    const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{day}}};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

int month_of(EpochDay day) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
    return static_cast<int>(static_cast<unsigned>(ymd.month()));
}

} // namespace trendline
