#include "trendline/cli.hpp"

#include "trendline/baselines.hpp"
#include "trendline/cross_validation.hpp"
#include "trendline/csv.hpp"
#include "trendline/dm_test.hpp"
#include "trendline/error.hpp"
#include "trendline/forecast.hpp"
#include "trendline/metrics.hpp"
#include "trendline/model.hpp"
#include "trendline/persistence.hpp"

#include <algorithm>
#include <filesystem>
#include <iterator>
#include <ostream>
#include <set>

namespace trendline::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void require_inputs(const CliConfig& c, std::size_t count, const char* what) {
    if (c.inputs.size() != count) {
        throw UsageError(c.subcommand + " expects " + std::to_string(count) + " --input " + what + ", got " +
                         std::to_string(c.inputs.size()));
    }
}

void require_output(const CliConfig& c) {
    if (c.output.empty()) {
        throw UsageError(c.subcommand + " requires --output");
    }
}

/// `out.csv` -> `out<suffix>`, e.g. `out.manifest.json`.
fs::path sidecar(const std::string& output, const char* suffix) {
    fs::path p(output);
    p.replace_extension(suffix);
    return p;
}

/// Load order: read, forward fill, weekday filter, log transform.
TimeSeries load_series(const CliConfig& c, const std::string& path) {
    TimeSeries ts = load_csv(path, c.date_column, c.value_column);
    if (c.forward_fill) {
        ts = forward_fill(ts);
    }
    if (c.weekdays_only) {
        ts = filter_weekdays(ts);
    }
    if (c.log_offset) {
        ts = log_transform(ts, *c.log_offset);
    }
    return ts;
}

ModelConfig resolve_config(const CliConfig& c, const std::string& path) {
    ModelConfig config = path.empty() ? ModelConfig::defaults() : load_config(path);
    if (c.seed) {
        config.seed = *c.seed;
    }
    config.validate();
    return config;
}

std::vector<ModelConfig> resolve_configs(const CliConfig& c, bool allow_many) {
    if (c.configs.size() > 1 && !allow_many) {
        throw UsageError(c.subcommand + " takes at most one --config");
    }
    std::vector<ModelConfig> out;
    if (c.configs.empty()) {
        out.push_back(resolve_config(c, {}));
    }
    for (const auto& path : c.configs) {
        out.push_back(resolve_config(c, path));
    }
    return out;
}

std::vector<std::string> covariate_columns(const ModelConfig& config) {
    std::vector<std::string> names;
    for (const auto& r : config.regressors) {
        names.push_back(r.name);
    }
    if (config.trend.growth == Growth::Logistic && !config.trend.capacity) {
        names.push_back("cap");
    }
    return names;
}

/// Regressor and capacity columns come from --covariates when given,
/// otherwise from the input file itself.
Covariates load_side_columns(const CliConfig& c, const std::string& input, const ModelConfig& config) {
    const auto names = covariate_columns(config);
    if (names.empty()) {
        return {};
    }
    return load_covariates(c.covariates.empty() ? input : c.covariates, c.date_column, names);
}

std::uint64_t effective_seed(const CliConfig& c, std::uint64_t fallback) {
    return c.seed.value_or(fallback);
}

void emit(std::ostream& out, const json& doc) {
    out << doc.dump(2) << '\n';
}

void emit_to(const CliConfig& c, std::ostream& out, const json& doc) {
    if (!c.output.empty()) {
        csv::write_atomic(c.output, doc.dump(2) + "\n");
    }
    emit(out, doc);
}

void write_run_manifest(const CliConfig& c, std::uint64_t seed, const std::string& config_digest,
                        const TimeSeries& data, const json& metrics) {
    RunManifest m;
    m.seed = seed;
    m.version = std::string(library_version());
    m.config_digest = config_digest;
    m.dataset_digest = dataset_digest(data);
    m.metrics = metrics;
    m.created_at = utc_timestamp();
    write_manifest(m, sidecar(c.output, ".manifest.json"));
}

/// First of `candidates` present in the file header.
std::string pick_column(const fs::path& path, std::initializer_list<std::string> candidates) {
    const auto table = csv::parse(csv::slurp(path));
    for (const auto& name : candidates) {
        if (table.find(name)) {
            return name;
        }
    }
    std::string list;
    for (const auto& name : candidates) {
        list += (list.empty() ? "'" : ", '") + name + "'";
    }
    fail(ErrorKind::ParseError, path.string() + ": none of the columns " + list + " is present");
}

void require_same_dates(const TimeSeries& a, const TimeSeries& b, const std::string& name_a,
                        const std::string& name_b) {
    if (std::ranges::equal(a.timestamps(), b.timestamps())) {
        return;
    }
    std::vector<EpochDay> only_a;
    std::vector<EpochDay> only_b;
    std::ranges::set_difference(a.timestamps(), b.timestamps(), std::back_inserter(only_a));
    std::ranges::set_difference(b.timestamps(), a.timestamps(), std::back_inserter(only_b));
    auto list = [](const std::vector<EpochDay>& days) {
        constexpr std::size_t kShown = 10;
        std::string s;
        for (std::size_t i = 0; i < std::min(days.size(), kShown); ++i) {
            s += (i ? " " : "") + format_iso_date(days[i]);
        }
        if (days.size() > kShown) {
            s += " ... (" + std::to_string(days.size()) + " total)";
        }
        return s.empty() ? std::string("none") : s;
    };
    fail(ErrorKind::LengthMismatch, "dates differ: only in " + name_a + ": " + list(only_a) + "; only in " + name_b +
                                        ": " + list(only_b));
}

std::vector<double> in_sample_fit(const FittedModel& model) {
    return predict_point(model, make_future_grid(model, 0)).yhat;
}

// --- fit -------------------------------------------------------------------

void cmd_fit(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 1, "data file");
    require_output(c);
    const TimeSeries ts = load_series(c, c.inputs[0]);
    const ModelConfig config = resolve_configs(c, false).front();
    FitTrace trace;
    const FittedModel model = fit(ts, config, load_side_columns(c, c.inputs[0], config), &trace);
    save_model(model, c.output);

    const auto yhat = in_sample_fit(model);
    json report = {{"model", config.name},
                   {"in_sample", report_to_json(evaluate_forecast(config.name, ts.values(), yhat))},
                   {"sigma", model.sigma * model.context.scaling.y_scale},
                   {"changepoints", model.delta.size()},
                   {"objective", trace.optimizer.value},
                   {"iterations", trace.optimizer.iterations},
                   {"refinement_steps", trace.optimizer.refinement_steps},
                   {"stop_reason", trace.optimizer.stop_reason}};
    write_run_manifest(c, config.seed, config_digest(config), ts, report);
    emit(out, report);
}

// --- predict ---------------------------------------------------------------

void cmd_predict(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 1, "model file");
    const FittedModel model = load_model(c.inputs[0]);
    Covariates future;
    if (!c.covariates.empty()) {
        future = load_covariates(c.covariates, c.date_column, covariate_columns(model.config));
    }
    const auto grid = make_future_grid(model, c.periods, future);
    const auto text = forecast_to_csv(predict(model, grid, effective_seed(c, model.config.seed)));
    if (c.output.empty()) {
        out << text;
    } else {
        csv::write_atomic(c.output, text);
    }
}

// --- cv --------------------------------------------------------------------

void cmd_cv(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 1, "data file");
    require_output(c);
    if (c.initial_days <= 0 || c.period_days <= 0 || c.horizon_days <= 0) {
        throw UsageError("cv requires positive --initial-days, --period-days and --horizon-days");
    }
    const TimeSeries ts = load_series(c, c.inputs[0]);
    const ModelConfig config = resolve_configs(c, false).front();
    const auto folds = rolling_cv(config, ts, c.initial_days, c.period_days, c.horizon_days,
                                  load_side_columns(c, c.inputs[0], config));
    csv::write_atomic(c.output, folds_to_csv(folds));

    const json metrics = horizon_metrics_to_json(performance_by_horizon(folds));
    csv::write_atomic(sidecar(c.output, ".metrics.json"), metrics.dump(2) + "\n");

    json cutoffs = json::array();
    for (const auto& f : folds) {
        cutoffs.push_back(format_iso_date(f.cutoff));
    }
    const json run = {{"config", config_to_json(config)},
                      {"initial_days", c.initial_days},
                      {"period_days", c.period_days},
                      {"horizon_days", c.horizon_days}};
    const json summary = {{"folds", folds.size()}, {"cutoffs", cutoffs}, {"horizons", metrics}};
    write_run_manifest(c, config.seed, sha256_hex(canonical_dump(run)), ts, summary);
    emit(out, summary);
}

// --- evaluate --------------------------------------------------------------

void cmd_evaluate(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 2, "files (truth, predictions)");
    const TimeSeries truth = load_csv(c.inputs[0], c.date_column, c.value_column);
    const TimeSeries pred = load_csv(c.inputs[1], c.date_column, pick_column(c.inputs[1], {"yhat", c.value_column}));
    truth.require_dense();
    pred.require_dense();
    require_same_dates(truth, pred, c.inputs[0], c.inputs[1]);

    const auto bounds = load_covariates(c.inputs[1], c.date_column, {"yhat_lower_95", "yhat_upper_95"});
    std::vector<double> lower;
    std::vector<double> upper;
    if (bounds.size() == 2 && bounds.at("yhat_lower_95").size() == truth.size() &&
        bounds.at("yhat_upper_95").size() == truth.size()) {
        for (const auto& [day, v] : bounds.at("yhat_lower_95")) {
            lower.push_back(v);
        }
        for (const auto& [day, v] : bounds.at("yhat_upper_95")) {
            upper.push_back(v);
        }
    }
    const std::string name = fs::path(c.inputs[1]).stem().string();
    json report = report_to_json(evaluate_forecast(name, truth.values(), pred.values(), lower, upper));
    report["model"] = name;
    emit_to(c, out, report);
}

// --- dm --------------------------------------------------------------------

void cmd_dm(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 2, "error files");
    if (c.h < 1) {
        throw UsageError("--h must be >= 1");
    }
    const Loss loss = parse_loss(c.loss);
    const TimeSeries a = load_csv(c.inputs[0], c.date_column, pick_column(c.inputs[0], {"error", c.value_column}));
    const TimeSeries b = load_csv(c.inputs[1], c.date_column, pick_column(c.inputs[1], {"error", c.value_column}));
    a.require_dense();
    b.require_dense();
    require_same_dates(a, b, c.inputs[0], c.inputs[1]);
    emit_to(c, out, dm_to_json(dm_test(a.values(), b.values(), loss, c.h), loss, c.h));
}

// --- compare ---------------------------------------------------------------

struct Contender {
    std::string name;
    std::string kind;
    MetricReport report;
    std::vector<double> errors;
};

std::vector<double> forecast_errors(std::span<const double> truth, std::span<const double> pred) {
    std::vector<double> e(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        e[i] = truth[i] - pred[i];
    }
    return e;
}

Contender score(std::string name, std::string kind, const TimeSeries& test, std::span<const double> pred,
                std::span<const double> lower = {}, std::span<const double> upper = {}) {
    Contender out{std::move(name), std::move(kind), {}, forecast_errors(test.values(), pred)};
    out.report = evaluate_forecast(out.name, test.values(), pred, lower, upper);
    return out;
}

Contender run_model(const CliConfig& c, const ModelConfig& config, const SplitResult& split) {
    const FittedModel model = fit(split.train, config, load_side_columns(c, c.inputs[0], config));
    const int periods = static_cast<int>(split.test.last() - split.train.last());
    Covariates future;
    if (!covariate_columns(config).empty()) {
        future = load_side_columns(c, c.inputs[0], config);
    }
    const Forecast fc = predict(model, make_future_grid(model, periods, future), config.seed);

    // The grid is daily; keep the rows that line up with test observations.
    std::vector<double> yhat;
    std::vector<double> lower;
    std::vector<double> upper;
    const IntervalBand* band = fc.band(0.95);
    std::size_t j = 0;
    for (EpochDay day : split.test.timestamps()) {
        while (fc.ds[j] != day) {
            ++j;
        }
        yhat.push_back(fc.yhat[j]);
        if (band) {
            lower.push_back(band->lower[j]);
            upper.push_back(band->upper[j]);
        }
    }
    return score(config.name, "model", split.test, yhat, lower, upper);
}

Contender run_baseline(const CliConfig& c, const std::string& name, const SplitResult& split) {
    const auto train = split.train.values();
    const std::size_t horizon = split.test.size();
    if (name == "naive") {
        return score(name, "baseline", split.test, naive_forecast(train, horizon));
    }
    if (name == "seasonal-naive") {
        return score(name, "baseline", split.test,
                     seasonal_naive(train, horizon, static_cast<std::size_t>(c.season_period)));
    }
    if (name == "lag-linear") {
        const auto regressor = fit_linear_lag_regressor(split.train);
        return score(name, "baseline", split.test,
                     walk_forward_forecast(regressor, train, split.test.timestamps()));
    }
    throw UsageError("unknown baseline '" + name + "' (expected naive, seasonal-naive or lag-linear)");
}

void cmd_compare(const CliConfig& c, std::ostream& out) {
    require_inputs(c, 1, "data file");
    require_output(c);
    if (!c.cutoff) {
        throw UsageError("compare requires --cutoff");
    }
    if (c.h < 1 || c.season_period < 1) {
        throw UsageError("--h and --season-period must be >= 1");
    }
    const Loss loss = parse_loss(c.loss);
    const TimeSeries ts = load_series(c, c.inputs[0]);
    ts.require_dense();
    const SplitResult split = chronological_split(ts, parse_iso_date(*c.cutoff));
    const auto configs = resolve_configs(c, true);

    std::vector<Contender> contenders;
    std::set<std::string> names;
    auto add = [&](Contender x) {
        if (!names.insert(x.name).second) {
            fail(ErrorKind::InvalidConfig, "duplicate model name '" + x.name + "' in comparison");
        }
        contenders.push_back(std::move(x));
    };
    for (const auto& config : configs) {
        add(run_model(c, config, split));
    }
    for (const auto& name : c.baselines) {
        add(run_baseline(c, name, split));
    }

    json models = json::array();
    for (const auto& x : contenders) {
        models.push_back({{"name", x.name}, {"kind", x.kind}, {"metrics", report_to_json(x.report)}});
    }
    // Negative statistics favour model_a.
    json dm_rows = json::array();
    for (std::size_t i = 0; i < contenders.size(); ++i) {
        for (std::size_t j = i + 1; j < contenders.size(); ++j) {
            const auto r = dm_test(contenders[i].errors, contenders[j].errors, loss, c.h);
            json row = dm_to_json(r, loss, c.h);
            row["model_a"] = contenders[i].name;
            row["model_b"] = contenders[j].name;
            row["favoured"] = r.statistic < 0 ? contenders[i].name : r.statistic > 0 ? contenders[j].name : "";
            dm_rows.push_back(std::move(row));
        }
    }
    const json report = {{"cutoff", format_iso_date(split.cutoff)},
                         {"n_train", split.train.size()},
                         {"n_test", split.test.size()},
                         {"models", models},
                         {"dm", dm_rows}};
    csv::write_atomic(c.output, report.dump(2) + "\n");

    json run = {{"cutoff", *c.cutoff}, {"baselines", c.baselines}, {"season_period", c.season_period},
                {"loss", to_string(loss)}, {"h", c.h}, {"configs", json::array()}};
    for (const auto& config : configs) {
        run["configs"].push_back(config_to_json(config));
    }
    write_run_manifest(c, effective_seed(c, configs.front().seed), sha256_hex(canonical_dump(run)), ts, report);
    emit(out, report);
}

} // namespace

void execute(const CliConfig& c, std::ostream& out) {
    if (c.subcommand == "fit") {
        cmd_fit(c, out);
    } else if (c.subcommand == "predict") {
        cmd_predict(c, out);
    } else if (c.subcommand == "cv") {
        cmd_cv(c, out);
    } else if (c.subcommand == "evaluate") {
        cmd_evaluate(c, out);
    } else if (c.subcommand == "dm") {
        cmd_dm(c, out);
    } else if (c.subcommand == "compare") {
        cmd_compare(c, out);
    } else {
        throw UsageError("unknown subcommand '" + c.subcommand + "'");
    }
}

} // namespace trendline::cli
