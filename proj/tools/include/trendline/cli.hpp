#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trendline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Parsed command line. Flags override the matching model-config fields;
/// the seed resolves as --seed, then the config file's `seed`, then 42.
struct CliConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::vector<std::string> configs;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> cutoff;
    int initial_days = 0;
    int period_days = 0;
    int horizon_days = 0;
    int periods = 0;
    std::string loss = "squared";
    int h = 1;
    std::optional<double> log_offset;
    bool weekdays_only = false;
    bool forward_fill = false;
    std::string date_column = "ds";
    std::string value_column = "y";
    std::string covariates;
    std::vector<std::string> baselines;
    int season_period = 7;
};

/// Raised for command lines that parse but cannot be run as given.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs one subcommand. Results go to `out` (and to --output when given);
/// failures produce a single JSON line {"error": kind, "message": text} on
/// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches an already parsed command line; throws on failure.
void execute(const CliConfig& config, std::ostream& out);

} // namespace trendline::cli
