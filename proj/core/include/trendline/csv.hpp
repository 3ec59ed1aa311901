#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendline::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based source line of each row

    /// Column position by name, or nullopt.
    std::optional<std::size_t> find(std::string_view column) const;
    std::size_t require(std::string_view column) const;
};

/// Minimal RFC-4180 reader: comma separated, optional double quotes, header
/// row required. A UTF-8 byte-order mark on the first line is skipped.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

/// Reads a whole file into memory.
std::string slurp(const std::filesystem::path& path);

/// Shortest text that parses back to the same double (at most 17 digits).
std::string format_double(double value);

/// Parses a finite real. Returns nullopt on malformed or non-finite text.
std::optional<double> parse_double(std::string_view text);

/// Writes `content` through a temporary sibling file and renames it into
/// place so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace trendline::csv
