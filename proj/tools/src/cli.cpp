#include "trendline/cli.hpp"

#include "trendline/error.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ostream>

namespace trendline::cli {

namespace {

void error_line(std::ostream& err, std::string_view kind, std::string_view message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

struct Flags {
    bool inputs = false;
    bool configs = false;
    bool output = false;
    bool seed = false;
    bool cutoff = false;
    bool windows = false;
    bool periods = false;
    bool dm = false;
    bool preprocess = false;
    bool covariates = false;
    bool baselines = false;
};

void add_flags(CLI::App& sub, CliConfig& c, std::optional<std::uint64_t>& seed, std::optional<double>& offset,
               std::optional<std::string>& cutoff, const Flags& f) {
    // `-h` would collide with the DM horizon flag `--h`.
    sub.set_help_flag("--help", "Print this help message and exit");
    if (f.inputs) {
        sub.add_option("--input", c.inputs, "Input file (repeat for commands taking several)")->required();
    }
    if (f.configs) {
        sub.add_option("--config", c.configs, "Model config JSON (compare accepts several)");
    }
    if (f.output) {
        sub.add_option("--output", c.output, "Output path");
    }
    if (f.seed) {
        sub.add_option("--seed", seed, "Random seed; overrides the config file (default 42)");
    }
    if (f.cutoff) {
        sub.add_option("--cutoff", cutoff, "Last training date, YYYY-MM-DD");
    }
    if (f.windows) {
        sub.add_option("--initial-days", c.initial_days, "Minimum training span before the first cutoff")
            ->required()
            ->check(CLI::PositiveNumber);
        sub.add_option("--period-days", c.period_days, "Spacing between cutoffs")
            ->required()
            ->check(CLI::PositiveNumber);
        sub.add_option("--horizon-days", c.horizon_days, "Forecast horizon after each cutoff")
            ->required()
            ->check(CLI::PositiveNumber);
    }
    if (f.periods) {
        sub.add_option("--periods", c.periods, "Future days to forecast")->check(CLI::NonNegativeNumber);
        sub.add_option("--covariates", c.covariates, "CSV with future regressor or cap values");
    }
    if (f.dm) {
        sub.add_option("--loss", c.loss, "squared or absolute")->check(CLI::IsMember({"squared", "absolute"}));
        sub.add_option("--h", c.h, "Forecast horizon of the errors")->check(CLI::PositiveNumber);
    }
    if (f.preprocess) {
        sub.add_option("--log-offset", offset, "Model log(y + offset) instead of y");
        sub.add_flag("--weekdays-only", c.weekdays_only, "Drop Saturdays and Sundays");
        sub.add_flag("--forward-fill", c.forward_fill, "Carry the last observation over gaps");
    }
    if (f.covariates) {
        sub.add_option("--covariates", c.covariates, "CSV with regressor or cap columns (default: the input)");
    }
    if (f.baselines) {
        sub.add_option("--baseline", c.baselines, "naive, seasonal-naive or lag-linear (repeatable)")
            ->check(CLI::IsMember({"naive", "seasonal-naive", "lag-linear"}));
        sub.add_option("--season-period", c.season_period, "Seasonal-naive period in rows (default 7)")
            ->check(CLI::PositiveNumber);
    }
    sub.add_option("--date-column", c.date_column, "Date column name (default ds)");
    sub.add_option("--value-column", c.value_column, "Value column name (default y)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig c;
    std::optional<std::uint64_t> seed;
    std::optional<double> offset;
    std::optional<std::string> cutoff;

    CLI::App app{"Additive time-series forecasting and evaluation", "trendline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", TRENDLINE_VERSION);

    auto* fit = app.add_subcommand("fit", "Fit a model and write its document");
    add_flags(*fit, c, seed, offset, cutoff,
              {.inputs = true, .configs = true, .output = true, .seed = true, .preprocess = true, .covariates = true});
    auto* predict = app.add_subcommand("predict", "Forecast from a saved model");
    add_flags(*predict, c, seed, offset, cutoff, {.inputs = true, .output = true, .seed = true, .periods = true});
    auto* cv = app.add_subcommand("cv", "Rolling-origin cross-validation");
    add_flags(*cv, c, seed, offset, cutoff,
              {.inputs = true,
               .configs = true,
               .output = true,
               .seed = true,
               .windows = true,
               .preprocess = true,
               .covariates = true});
    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against truth");
    add_flags(*evaluate, c, seed, offset, cutoff, {.inputs = true, .output = true});
    auto* dm = app.add_subcommand("dm", "Diebold-Mariano test on two error series");
    add_flags(*dm, c, seed, offset, cutoff, {.inputs = true, .output = true, .dm = true});
    auto* compare = app.add_subcommand("compare", "Fit models and baselines on a split and compare them");
    add_flags(*compare, c, seed, offset, cutoff,
              {.inputs = true,
               .configs = true,
               .output = true,
               .seed = true,
               .cutoff = true,
               .dm = true,
               .preprocess = true,
               .covariates = true,
               .baselines = true});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kExitOk;
        }
        error_line(err, "UsageError", e.what());
        return kExitUsage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    c.seed = seed;
    c.log_offset = offset;
    c.cutoff = cutoff;

    try {
        execute(c, out);
    } catch (const UsageError& e) {
        error_line(err, "UsageError", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        error_line(err, e.kind_name(), e.what());
        return kExitDomainError;
    } catch (const std::exception& e) {
        error_line(err, "InternalError", e.what());
        return kExitDomainError;
    }
    return kExitOk;
}

} // namespace trendline::cli
