#include "trendline/model.hpp"

#include "trendline/error.hpp"
#include "trendline/objective.hpp"

#include <algorithm>
#include <cmath>

namespace trendline {

std::vector<double> FittedModel::packed() const {
    std::vector<double> p;
    p.reserve(2 + delta.size() + beta.size());
    p.push_back(k);
    p.push_back(m);
    p.insert(p.end(), delta.begin(), delta.end());
    p.insert(p.end(), beta.begin(), beta.end());
    return p;
}

std::span<const double> FittedModel::seasonality_coefficients(const std::string& name) const {
    std::size_t offset = 0;
    for (const auto& s : config.seasonalities) {
        const auto w = 2 * static_cast<std::size_t>(s.fourier_order);
        if (s.name == name) {
            return std::span<const double>(beta).subspan(offset, w);
        }
        offset += w;
    }
    return {};
}

std::span<const double> FittedModel::holiday_coefficients() const {
    std::size_t offset = 0;
    for (const auto& s : config.seasonalities) {
        offset += 2 * static_cast<std::size_t>(s.fourier_order);
    }
    return std::span<const double>(beta).subspan(offset, config.holidays.size());
}

std::span<const double> FittedModel::regressor_coefficients() const {
    return std::span<const double>(beta).last(config.regressors.size());
}

double estimate_sigma(std::span<const double> residuals) {
    if (residuals.size() < 2) {
        fail(ErrorKind::TooFewResiduals, "need at least two residuals to estimate sigma");
    }
    double mean = 0.0;
    for (double r : residuals) {
        mean += r;
    }
    mean /= static_cast<double>(residuals.size());
    double ss = 0.0;
    for (double r : residuals) {
        ss += (r - mean) * (r - mean);
    }
    return std::sqrt(ss / static_cast<double>(residuals.size() - 1));
}

namespace {

// Ordinary least-squares line y ~ a + b t.
std::pair<double, double> least_squares_line(std::span<const double> t, std::span<const double> y) {
    const auto n = static_cast<double>(t.size());
    double mt = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    return {my - slope * mt, slope};
}

Covariates restrict_covariates(const Covariates& covariates, const ModelConfig& config,
                               std::span<const EpochDay> days) {
    std::vector<std::string> wanted;
    for (const auto& r : config.regressors) {
        wanted.push_back(r.name);
    }
    if (config.trend.growth == Growth::Logistic && !config.trend.capacity) {
        wanted.emplace_back("cap");
    }
    Covariates out;
    for (const auto& name : wanted) {
        const auto col = covariates.find(name);
        if (col == covariates.end()) {
            continue;
        }
        auto& dst = out[name];
        for (EpochDay d : days) {
            if (auto it = col->second.find(d); it != col->second.end()) {
                dst.emplace(d, it->second);
            }
        }
    }
    return out;
}

constexpr int kMaxNoiseRounds = 100;
constexpr double kNoiseTolerance = 1e-10;
// Keeps the prior weight positive when the data are fitted exactly.
// Multiplicative blocks make the Gauss-Newton model loose; some noise rounds
// need a few hundred damped steps.
constexpr int kMaxWarmNewtonSteps = 1000;
constexpr double kNoiseVarianceFloor = 1e-20;

LbfgsResult solve_map(const MapObjective& objective, std::vector<double> start) {
    const ObjectiveFn fn = [&objective](std::span<const double> x, std::span<double> g) {
        return objective.value_and_gradient(x, g);
    };
    const CurvatureFn curvature = [&objective](std::span<const double> x) {
        return objective.gauss_newton_hessian(x);
    };
    // With weak priors the changepoint columns are nearly collinear and a
    // cold quasi-Newton run crawls, so Newton steps go first. Afterwards they
    // also settle the stiff softabs directions the quasi-Newton stopping rule
    // leaves loosely resolved.
    LbfgsResult warm;
    warm.x = std::move(start);
    refine_newton(fn, curvature, warm, kMaxWarmNewtonSteps);
    auto result = minimize_lbfgs(fn, std::move(warm.x));
    refine_newton(fn, curvature, result);
    result.refinement_steps += warm.refinement_steps;
    result.evaluations += warm.evaluations;
    return result;
}

} // namespace

FittedModel fit(const TimeSeries& ts, const ModelConfig& config, const Covariates& covariates, FitTrace* trace) {
    config.validate();
    if (ts.size() < 2) {
        fail(ErrorKind::EmptySeries, "fitting requires at least two observations");
    }
    ts.require_dense();
    if (config.trend.growth == Growth::Logistic && !config.trend.capacity && !covariates.contains("cap")) {
        fail(ErrorKind::InvalidConfig, "logistic growth requires a capacity");
    }

    FittedModel model;
    model.config = config;
    model.context = make_design_context(ts, config, covariates);
    const DesignMatrix design = build_design(ts.timestamps(), config, model.context, covariates);

    const std::size_t n = ts.size();
    const std::size_t n_params = 2 + design.trend_width() + design.feature_width();
    if (n_params > n || static_cast<double>(n) < 2.0 + static_cast<double>(n_params) / 10.0) {
        fail(ErrorKind::UnderdeterminedModel, std::to_string(n_params) + " parameters for " +
                                                  std::to_string(n) + " observations");
    }

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = ts.values()[i] / model.context.scaling.y_scale;
    }

    std::vector<double> x0(n_params, 0.0);
    if (config.trend.growth == Growth::Linear) {
        const auto [intercept, slope] = least_squares_line(design.t, y);
        x0[0] = slope;
        x0[1] = intercept;
    } else {
        // Straight line through logit(y / C), so that k (t - m) matches it.
        std::vector<double> logit(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = std::clamp(y[i] / design.capacity[i], 0.01, 0.99);
            logit[i] = std::log(p / (1.0 - p));
        }
        auto [intercept, slope] = least_squares_line(design.t, logit);
        if (std::abs(slope) < 1e-3) {
            slope = std::copysign(1e-3, slope == 0.0 ? 1.0 : slope);
        }
        x0[0] = slope;
        x0[1] = -intercept / slope;
    }

    // Joint MAP estimate of the parameters and the noise variance v in scaled
    // units, by block coordinate descent on
    //   sum r^2 / (2 v) + (n / 2) log v + penalties.
    // For fixed v the parameter block is the objective with prior weight v;
    // for fixed parameters v = sum r^2 / n. Neither step can raise the joint
    // objective, and the first round (v = 1) is the unweighted objective.
    double noise = 1.0;
    std::vector<double> x = x0;
    LbfgsResult result;
    std::vector<double> noise_path;
    std::vector<double> yhat;
    for (int round = 1;; ++round) {
        const MapObjective objective(design, y, noise);
        result = solve_map(objective, std::move(x));
        x = result.x;
        yhat = objective.predict(x);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        }
        noise_path.push_back(noise);
        const double next = std::max(ss / static_cast<double>(n), kNoiseVarianceFloor);
        if (std::abs(next - noise) <= kNoiseTolerance * noise || round == kMaxNoiseRounds) {
            break;
        }
        noise = next;
    }

    const std::size_t s = design.trend_width();
    model.k = result.x[0];
    model.m = result.x[1];
    model.delta.assign(result.x.begin() + 2, result.x.begin() + 2 + static_cast<std::ptrdiff_t>(s));
    model.beta.assign(result.x.begin() + 2 + static_cast<std::ptrdiff_t>(s), result.x.end());

    std::vector<double> residuals(n);
    for (std::size_t i = 0; i < n; ++i) {
        residuals[i] = y[i] - yhat[i];
    }
    model.sigma = estimate_sigma(residuals);
    model.history = ts;
    model.history_covariates = restrict_covariates(covariates, config, ts.timestamps());

    if (trace) {
        trace->initial_params = std::move(x0);
        trace->noise_variance = std::move(noise_path);
        trace->optimizer = std::move(result);
    }
    return model;
}

} // namespace trendline
