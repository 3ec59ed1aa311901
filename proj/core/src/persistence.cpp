#include "trendline/persistence.hpp"

#include "trendline/csv.hpp"
#include "trendline/error.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <set>

#ifndef TRENDLINE_VERSION
#define TRENDLINE_VERSION "0.0.0"
#endif

namespace trendline {

using nlohmann::json;

std::string_view library_version() noexcept {
    return TRENDLINE_VERSION;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        fail(ErrorKind::IoError, "SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string canonical_dump(const json& value) {
    return value.dump();
}

namespace {

std::string_view growth_name(Growth g) {
    return g == Growth::Linear ? "linear" : "logistic";
}

std::string_view mode_name(SeasonalityMode m) {
    return m == SeasonalityMode::Additive ? "additive" : "multiplicative";
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) {
        fail(ErrorKind::SchemaError, std::string(where) + " must be a JSON object");
    }
    const std::set<std::string_view> keys(allowed);
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) {
            fail(ErrorKind::SchemaError, "unknown key '" + key + "' in " + std::string(where));
        }
    }
}

Growth parse_growth(const std::string& s) {
    if (s == "linear") {
        return Growth::Linear;
    }
    if (s == "logistic") {
        return Growth::Logistic;
    }
    fail(ErrorKind::SchemaError, "growth must be 'linear' or 'logistic', got '" + s + "'");
}

SeasonalityMode parse_mode(const std::string& s) {
    if (s == "additive") {
        return SeasonalityMode::Additive;
    }
    if (s == "multiplicative") {
        return SeasonalityMode::Multiplicative;
    }
    fail(ErrorKind::SchemaError, "mode must be 'additive' or 'multiplicative', got '" + s + "'");
}

std::optional<SeasonalitySpec> standard_block(const json& doc, const char* key, SeasonalitySpec (*make)(int),
                                              int default_order) {
    if (!doc.contains(key)) {
        return make(default_order);
    }
    const auto& v = doc.at(key);
    if (v.is_boolean()) {
        return v.get<bool>() ? std::optional(make(default_order)) : std::nullopt;
    }
    const int order = v.get<int>();
    if (order <= 0) {
        return std::nullopt;
    }
    return make(order);
}

} // namespace

json config_to_json(const ModelConfig& c) {
    json doc;
    doc["name"] = c.name;
    doc["growth"] = growth_name(c.trend.growth);
    doc["n_changepoints"] = c.trend.n_changepoints;
    doc["changepoint_range"] = c.trend.changepoint_range;
    doc["changepoint_prior_scale"] = c.trend.changepoint_prior_scale;
    doc["capacity"] = c.trend.capacity ? json(*c.trend.capacity) : json(nullptr);
    doc["seasonalities"] = json::array();
    for (const auto& s : c.seasonalities) {
        doc["seasonalities"].push_back({{"name", s.name},
                                        {"period", s.period},
                                        {"fourier_order", s.fourier_order},
                                        {"prior_scale", s.prior_scale},
                                        {"mode", mode_name(s.mode)}});
    }
    doc["holidays"] = json::array();
    for (const auto& h : c.holidays) {
        json dates = json::array();
        for (EpochDay d : h.dates) {
            dates.push_back(format_iso_date(d));
        }
        doc["holidays"].push_back({{"name", h.name},
                                   {"dates", dates},
                                   {"lower_window", h.lower_window},
                                   {"upper_window", h.upper_window},
                                   {"prior_scale", h.prior_scale}});
    }
    doc["regressors"] = json::array();
    for (const auto& r : c.regressors) {
        doc["regressors"].push_back({{"name", r.name}, {"prior_scale", r.prior_scale}});
    }
    doc["interval_levels"] = c.interval_levels;
    doc["interval_samples"] = c.interval_samples;
    doc["seed"] = c.seed;
    return doc;
}

ModelConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown(doc,
                   {"name", "growth", "n_changepoints", "changepoint_range", "changepoint_prior_scale", "capacity",
                    "seasonalities", "yearly_seasonality", "weekly_seasonality", "seasonality_prior_scale",
                    "seasonality_mode", "holidays", "holidays_csv", "holidays_prior_scale", "regressors",
                    "interval_levels", "interval_samples", "seed"},
                   "model config");
    ModelConfig c;
    try {
        c.name = doc.value("name", c.name);
        c.trend.growth = parse_growth(doc.value("growth", std::string("linear")));
        c.trend.n_changepoints = doc.value("n_changepoints", c.trend.n_changepoints);
        c.trend.changepoint_range = doc.value("changepoint_range", c.trend.changepoint_range);
        c.trend.changepoint_prior_scale = doc.value("changepoint_prior_scale", c.trend.changepoint_prior_scale);
        if (doc.contains("capacity") && !doc.at("capacity").is_null()) {
            c.trend.capacity = doc.at("capacity").get<double>();
        }

        const double seasonality_scale = doc.value("seasonality_prior_scale", 10.0);
        const auto seasonality_mode = parse_mode(doc.value("seasonality_mode", std::string("additive")));
        if (doc.contains("seasonalities")) {
            for (const auto& s : doc.at("seasonalities")) {
                reject_unknown(s, {"name", "period", "fourier_order", "prior_scale", "mode"}, "seasonality");
                SeasonalitySpec spec;
                spec.name = s.at("name").get<std::string>();
                spec.period = s.at("period").get<double>();
                spec.fourier_order = s.at("fourier_order").get<int>();
                spec.prior_scale = s.value("prior_scale", seasonality_scale);
                spec.mode = s.contains("mode") ? parse_mode(s.at("mode").get<std::string>()) : seasonality_mode;
                c.seasonalities.push_back(std::move(spec));
            }
        } else {
            for (auto block : {standard_block(doc, "yearly_seasonality", yearly_seasonality, 10),
                               standard_block(doc, "weekly_seasonality", weekly_seasonality, 4)}) {
                if (block) {
                    block->prior_scale = seasonality_scale;
                    block->mode = seasonality_mode;
                    c.seasonalities.push_back(*block);
                }
            }
        }

        const double holiday_scale = doc.value("holidays_prior_scale", 10.0);
        if (doc.contains("holidays")) {
            for (const auto& h : doc.at("holidays")) {
                reject_unknown(h, {"name", "dates", "lower_window", "upper_window", "prior_scale"}, "holiday");
                HolidaySpec spec;
                spec.name = h.at("name").get<std::string>();
                for (const auto& d : h.at("dates")) {
                    spec.dates.push_back(parse_iso_date(d.get<std::string>()));
                }
                spec.lower_window = h.value("lower_window", 0);
                spec.upper_window = h.value("upper_window", 0);
                spec.prior_scale = h.value("prior_scale", holiday_scale);
                c.holidays.push_back(std::move(spec));
            }
        }
        if (doc.contains("holidays_csv")) {
            std::filesystem::path p = doc.at("holidays_csv").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) {
                p = base_dir / p;
            }
            for (auto& spec : load_holiday_calendar(p, holiday_scale)) {
                c.holidays.push_back(std::move(spec));
            }
        }
        if (doc.contains("regressors")) {
            for (const auto& r : doc.at("regressors")) {
                reject_unknown(r, {"name", "prior_scale"}, "regressor");
                c.regressors.push_back({r.at("name").get<std::string>(), r.value("prior_scale", 10.0)});
            }
        }
        if (doc.contains("interval_levels")) {
            c.interval_levels = doc.at("interval_levels").get<std::vector<double>>();
        }
        c.interval_samples = doc.value("interval_samples", c.interval_samples);
        c.seed = doc.value("seed", c.seed);
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, std::string("model config: ") + e.what());
    }
    c.validate();
    return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(csv::slurp(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, "cannot parse '" + path.string() + "': " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

std::string config_digest(const ModelConfig& config) {
    return sha256_hex(canonical_dump(config_to_json(config)));
}

std::string dataset_digest(const TimeSeries& ts) {
    return sha256_hex(series_to_csv(ts));
}

json report_to_json(const MetricReport& r) {
    return {{"rmse", r.rmse},
            {"mae", r.mae},
            {"mape", r.mape_percent ? json(*r.mape_percent) : json(nullptr)},
            {"coverage", r.coverage_percent ? json(*r.coverage_percent) : json(nullptr)},
            {"n", r.n}};
}

json horizon_metrics_to_json(const std::vector<HorizonMetrics>& metrics) {
    json out = json::array();
    for (const auto& m : metrics) {
        auto row = report_to_json(m.report);
        row["horizon_days"] = m.horizon_days;
        out.push_back(std::move(row));
    }
    return out;
}

json dm_to_json(const DmResult& r, Loss loss, int h) {
    return {{"statistic", r.statistic},
            {"p_value", r.p_value},
            {"mean_loss_diff", r.mean_loss_diff},
            {"interpretation", r.interpretation},
            {"loss", to_string(loss)},
            {"h", h}};
}

bool RunManifest::same_run(const RunManifest& other) const {
    return seed == other.seed && version == other.version && config_digest == other.config_digest &&
           dataset_digest == other.dataset_digest && metrics == other.metrics;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest_to_json(const RunManifest& m) {
    return {{"seed", m.seed},
            {"version", m.version},
            {"config_digest", m.config_digest},
            {"dataset_digest", m.dataset_digest},
            {"metrics", m.metrics},
            {"created_at", m.created_at}};
}

RunManifest manifest_from_json(const json& doc) {
    reject_unknown(doc, {"seed", "version", "config_digest", "dataset_digest", "metrics", "created_at"}, "manifest");
    RunManifest m;
    try {
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.version = doc.at("version").get<std::string>();
        m.config_digest = doc.at("config_digest").get<std::string>();
        m.dataset_digest = doc.at("dataset_digest").get<std::string>();
        m.metrics = doc.at("metrics");
        m.created_at = doc.at("created_at").get<std::string>();
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, std::string("manifest: ") + e.what());
    }
    return m;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    csv::write_atomic(path, manifest_to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(csv::slurp(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, "cannot parse manifest '" + path.string() + "': " + e.what());
    }
    return manifest_from_json(doc);
}

} // namespace trendline
