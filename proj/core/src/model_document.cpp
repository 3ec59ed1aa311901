#include "trendline/csv.hpp"
#include "trendline/error.hpp"
#include "trendline/persistence.hpp"

namespace trendline {

using nlohmann::json;

namespace {

json dated_to_json(const DatedValues& values) {
    json ds = json::array();
    json v = json::array();
    for (const auto& [day, value] : values) {
        ds.push_back(format_iso_date(day));
        v.push_back(value);
    }
    return {{"ds", ds}, {"values", v}};
}

DatedValues dated_from_json(const json& doc) {
    const auto& ds = doc.at("ds");
    const auto& v = doc.at("values");
    if (ds.size() != v.size()) {
        fail(ErrorKind::SchemaError, "covariate ds and values differ in length");
    }
    DatedValues out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out.emplace(parse_iso_date(ds[i].get<std::string>()), v[i].get<double>());
    }
    return out;
}

std::vector<double> take(const json& doc, const std::string& key, std::size_t expected) {
    auto values = doc.at(key).get<std::vector<double>>();
    if (values.size() != expected) {
        fail(ErrorKind::SchemaError, "'" + key + "' has " + std::to_string(values.size()) +
                                         " coefficients, expected " + std::to_string(expected));
    }
    return values;
}

} // namespace

json model_to_document(const FittedModel& model) {
    json params;
    params["k"] = model.k;
    params["m"] = model.m;
    params["delta"] = model.delta;
    params["sigma"] = model.sigma;
    params["changepoints"] = model.context.changepoints;
    json seasonal = json::object();
    for (const auto& s : model.config.seasonalities) {
        const auto c = model.seasonality_coefficients(s.name);
        seasonal[s.name] = std::vector<double>(c.begin(), c.end());
    }
    params["seasonalities"] = seasonal;
    json holidays = json::object();
    const auto hc = model.holiday_coefficients();
    for (std::size_t i = 0; i < model.config.holidays.size(); ++i) {
        holidays[model.config.holidays[i].name] = hc[i];
    }
    params["holidays"] = holidays;
    json regressors = json::object();
    const auto rc = model.regressor_coefficients();
    for (std::size_t i = 0; i < model.config.regressors.size(); ++i) {
        regressors[model.config.regressors[i].name] = rc[i];
    }
    params["regressors"] = regressors;

    const auto& sc = model.context.scaling;
    json norms = json::object();
    for (std::size_t i = 0; i < model.config.regressors.size(); ++i) {
        const auto& n = model.context.regressor_norms[i];
        norms[model.config.regressors[i].name] = {{"mean", n.mean}, {"stddev", n.stddev}};
    }
    json scaling = {{"t_start", format_iso_date(sc.t_start)},
                    {"t_span", sc.t_span},
                    {"y_scale", sc.y_scale},
                    {"regressor_norms", norms}};

    const auto& h = model.history;
    json ds = json::array();
    for (EpochDay d : h.timestamps()) {
        ds.push_back(format_iso_date(d));
    }
    json covariates = json::object();
    for (const auto& [name, values] : model.history_covariates) {
        covariates[name] = dated_to_json(values);
    }
    json summary = {{"n_obs", h.size()},
                    {"first", format_iso_date(h.first())},
                    {"last", format_iso_date(h.last())},
                    {"name", h.name()},
                    {"ds", ds},
                    {"y", std::vector<double>(h.values().begin(), h.values().end())},
                    {"covariates", covariates}};

    return {{"format_version", kModelFormatVersion},
            {"library_version", library_version()},
            {"config", config_to_json(model.config)},
            {"parameters", params},
            {"scaling", scaling},
            {"train_summary", summary}};
}

FittedModel model_from_document(const json& doc) {
    if (!doc.is_object() || !doc.contains("format_version")) {
        fail(ErrorKind::SchemaError, "model document lacks format_version");
    }
    const auto& version = doc.at("format_version");
    if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
        fail(ErrorKind::UnsupportedVersion, "unsupported model format version " + version.dump() + " (expected " +
                                                std::to_string(kModelFormatVersion) + ")");
    }
    FittedModel model;
    try {
        model.config = config_from_json(doc.at("config"));
        const auto& c = model.config;
        const auto& params = doc.at("parameters");
        model.k = params.at("k").get<double>();
        model.m = params.at("m").get<double>();
        model.delta = params.at("delta").get<std::vector<double>>();
        model.sigma = params.at("sigma").get<double>();
        model.context.changepoints = take(params, "changepoints", model.delta.size());

        for (const auto& s : c.seasonalities) {
            const auto coefs = take(params.at("seasonalities"), s.name, 2 * static_cast<std::size_t>(s.fourier_order));
            model.beta.insert(model.beta.end(), coefs.begin(), coefs.end());
        }
        for (const auto& hspec : c.holidays) {
            model.beta.push_back(params.at("holidays").at(hspec.name).get<double>());
        }
        for (const auto& r : c.regressors) {
            model.beta.push_back(params.at("regressors").at(r.name).get<double>());
        }

        const auto& scaling = doc.at("scaling");
        model.context.scaling.t_start = parse_iso_date(scaling.at("t_start").get<std::string>());
        model.context.scaling.t_span = scaling.at("t_span").get<double>();
        model.context.scaling.y_scale = scaling.at("y_scale").get<double>();
        for (const auto& r : c.regressors) {
            const auto& n = scaling.at("regressor_norms").at(r.name);
            model.context.regressor_norms.push_back({n.at("mean").get<double>(), n.at("stddev").get<double>()});
        }

        const auto& summary = doc.at("train_summary");
        std::vector<EpochDay> days;
        for (const auto& d : summary.at("ds")) {
            days.push_back(parse_iso_date(d.get<std::string>()));
        }
        auto values = summary.at("y").get<std::vector<double>>();
        if (values.size() != days.size() || summary.at("n_obs").get<std::size_t>() != days.size()) {
            fail(ErrorKind::SchemaError, "train_summary history is inconsistent");
        }
        model.history = TimeSeries(std::move(days), std::move(values), summary.value("name", std::string("y")));
        for (const auto& [name, values_doc] : summary.at("covariates").items()) {
            model.history_covariates[name] = dated_from_json(values_doc);
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, std::string("model document: ") + e.what());
    }
    return model;
}

std::string model_to_text(const FittedModel& model) {
    return model_to_document(model).dump(2) + "\n";
}

FittedModel model_from_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, std::string("model document is not valid JSON: ") + e.what());
    }
    return model_from_document(doc);
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
    csv::write_atomic(path, model_to_text(model));
}

FittedModel load_model(const std::filesystem::path& path) {
    return model_from_text(csv::slurp(path));
}

} // namespace trendline
