#pragma once

#include "trendline/config.hpp"
#include "trendline/cross_validation.hpp"
#include "trendline/dm_test.hpp"
#include "trendline/metrics.hpp"
#include "trendline/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace trendline {

inline constexpr int kModelFormatVersion = 1;

std::string_view library_version() noexcept;

/// SHA-256 of `bytes`, lowercase hex.
std::string sha256_hex(std::string_view bytes);

/// Compact JSON with sorted keys and shortest round-trip floats. Equal values
/// always produce identical bytes.
std::string canonical_dump(const nlohmann::json& value);

// --- Model configuration -------------------------------------------------

nlohmann::json config_to_json(const ModelConfig& config);

/// Accepts the canonical form plus two conveniences: when `seasonalities` is
/// absent, `yearly_seasonality` / `weekly_seasonality` (bool or Fourier
/// order, both default on) select the standard blocks; `holidays_csv` names a
/// calendar file resolved against `base_dir`. Unknown keys are rejected.
ModelConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

ModelConfig load_config(const std::filesystem::path& path);

/// Digest of the canonical config form, independent of source formatting.
std::string config_digest(const ModelConfig& config);

/// Digest of the series in canonical CSV form.
std::string dataset_digest(const TimeSeries& ts);

// --- Model documents -----------------------------------------------------

/// Top-level keys: format_version, config, parameters, scaling, train_summary.
nlohmann::json model_to_document(const FittedModel& model);

/// Throws UnsupportedVersion for unknown format versions and SchemaError for
/// malformed documents.
FittedModel model_from_document(const nlohmann::json& doc);

std::string model_to_text(const FittedModel& model);
FittedModel model_from_text(std::string_view text);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

// --- Reports -------------------------------------------------------------

nlohmann::json report_to_json(const MetricReport& report);
nlohmann::json horizon_metrics_to_json(const std::vector<HorizonMetrics>& metrics);
nlohmann::json dm_to_json(const DmResult& result, Loss loss, int h);

// --- Run manifests -------------------------------------------------------

struct RunManifest {
    std::uint64_t seed = 42;
    std::string version;
    std::string config_digest;
    std::string dataset_digest;
    nlohmann::json metrics = nlohmann::json::object();
    std::string created_at;

    /// Equality ignoring the wall-clock field.
    bool same_run(const RunManifest& other) const;
    bool operator==(const RunManifest&) const = default;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

} // namespace trendline
