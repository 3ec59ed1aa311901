#include "trendline/objective.hpp"

#include "trendline/error.hpp"
#include "trendline/trend.hpp"

#include <algorithm>
#include <cmath>

namespace trendline {

struct MapObjective::Evaluation {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::VectorXd yhat;
    Eigen::VectorXd g;
};

MapObjective::MapObjective(const DesignMatrix& design, std::span<const double> y, double prior_weight)
    : design_(&design), y_(y.data(), static_cast<Eigen::Index>(y.size())), prior_weight_(prior_weight) {
    if (y.size() != design.rows()) {
        fail(ErrorKind::LengthMismatch, "target length does not match design rows");
    }
    if (!(prior_weight > 0.0) || !std::isfinite(prior_weight)) {
        fail(ErrorKind::InvalidConfig, "prior weight must be positive and finite");
    }
    const auto q = static_cast<Eigen::Index>(design.feature_width());
    features_ = design.columns.rightCols(q);
    additive_mask_ = Eigen::VectorXd::Ones(q);
    multiplicative_mask_ = Eigen::VectorXd::Zero(q);
    const auto mask = design.multiplicative_mask();
    for (Eigen::Index c = 0; c < q; ++c) {
        if (mask[static_cast<std::size_t>(c)]) {
            additive_mask_(c) = 0.0;
            multiplicative_mask_(c) = 1.0;
            any_multiplicative_ = true;
        }
    }
}

namespace {

// Offsets m_j of every logistic segment plus d m_j / d(k, m, delta).
struct LogisticSegments {
    std::vector<double> rate;            // k_j, j = 0..S
    std::vector<double> offset;          // m_j
    std::vector<Eigen::VectorXd> d_offset; // over the 2 + S trend parameters
};

LogisticSegments logistic_segments(double k, double m, std::span<const double> delta,
                                   std::span<const double> cps, bool with_gradient) {
    const std::size_t s = cps.size();
    const auto dim = static_cast<Eigen::Index>(2 + s);
    LogisticSegments seg;
    seg.rate.resize(s + 1);
    seg.offset.resize(s + 1);
    seg.rate[0] = k;
    seg.offset[0] = m;
    Eigen::VectorXd d_rate;
    if (with_gradient) {
        seg.d_offset.resize(s + 1);
        d_rate = Eigen::VectorXd::Zero(dim);
        d_rate(0) = 1.0;
        seg.d_offset[0] = Eigen::VectorXd::Zero(dim);
        seg.d_offset[0](1) = 1.0;
    }
    for (std::size_t j = 1; j <= s; ++j) {
        const double prev_rate = seg.rate[j - 1];
        const double next_rate = prev_rate + delta[j - 1];
        const double tj = cps[j - 1];
        seg.rate[j] = next_rate;
        if (next_rate == 0.0) {
            seg.offset[j] = seg.offset[j - 1];
            if (with_gradient) {
                seg.d_offset[j] = seg.d_offset[j - 1];
                d_rate(static_cast<Eigen::Index>(1 + j)) = 1.0;
            }
            continue;
        }
        const double ratio = prev_rate / next_rate;
        const double lever = tj - seg.offset[j - 1];
        seg.offset[j] = tj - ratio * lever;
        if (with_gradient) {
            Eigen::VectorXd d_next = d_rate;
            d_next(static_cast<Eigen::Index>(1 + j)) += 1.0;
            const Eigen::VectorXd d_ratio = (d_rate * next_rate - prev_rate * d_next) / (next_rate * next_rate);
            seg.d_offset[j] = -lever * d_ratio + ratio * seg.d_offset[j - 1];
            d_rate = std::move(d_next);
        }
    }
    return seg;
}

std::size_t active_count(double t, std::span<const double> cps) {
    return static_cast<std::size_t>(std::upper_bound(cps.begin(), cps.end(), t) - cps.begin());
}

} // namespace

MapObjective::Evaluation MapObjective::evaluate(std::span<const double> params, bool with_gradient) const {
    const auto& d = *design_;
    const std::size_t s = d.trend_width();
    const auto q = static_cast<Eigen::Index>(d.feature_width());
    const auto n = static_cast<Eigen::Index>(d.rows());
    if (params.size() != dimension()) {
        fail(ErrorKind::LengthMismatch, "parameter vector has wrong length");
    }
    const double k = params[0];
    const double m = params[1];
    const std::span<const double> delta = params.subspan(2, s);
    const Eigen::Map<const Eigen::VectorXd> beta(params.data() + 2 + s, q);
    const std::span<const double> cps = d.changepoints;

    Evaluation ev;
    const Eigen::VectorXd s_add = features_ * beta.cwiseProduct(additive_mask_);
    Eigen::VectorXd s_mul;
    if (any_multiplicative_) {
        s_mul = features_ * beta.cwiseProduct(multiplicative_mask_);
    }

    ev.g.resize(n);
    // dg/dz for logistic rows and the segment each row sits in.
    Eigen::VectorXd slope;
    std::vector<std::size_t> segment;
    LogisticSegments seg;
    if (d.growth == Growth::Linear) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double t = d.t[static_cast<std::size_t>(r)];
            double g = k * t + m;
            for (std::size_t j = 0; j < s; ++j) {
                if (t >= cps[j]) {
                    g += delta[j] * (t - cps[j]);
                }
            }
            ev.g(r) = g;
        }
    } else {
        seg = logistic_segments(k, m, delta, cps, with_gradient);
        slope.resize(n);
        segment.resize(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            const double t = d.t[ri];
            const std::size_t j = active_count(t, cps);
            segment[ri] = j;
            const double z = seg.rate[j] * (t - seg.offset[j]);
            const double sig = 1.0 / (1.0 + std::exp(-z));
            ev.g(r) = d.capacity[ri] * sig;
            slope(r) = d.capacity[ri] * sig * (1.0 - sig);
        }
    }

    ev.yhat = any_multiplicative_ ? Eigen::VectorXd(ev.g.cwiseProduct(Eigen::VectorXd::Ones(n) + s_mul) + s_add)
                                  : Eigen::VectorXd(ev.g + s_add);
    const Eigen::VectorXd resid = y_ - ev.yhat;

    double penalty = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
        penalty += softabs(delta[j]) / d.prior_scales[j];
    }
    for (Eigen::Index c = 0; c < q; ++c) {
        const double scale = d.prior_scales[s + static_cast<std::size_t>(c)];
        penalty += beta(c) * beta(c) / (2.0 * scale * scale);
    }
    ev.value = 0.5 * resid.squaredNorm() + prior_weight_ * penalty;
    if (!std::isfinite(ev.value)) {
        fail(ErrorKind::NonFiniteObjective, "MAP objective is not finite");
    }
    if (!with_gradient) {
        return ev;
    }

    const auto dim = static_cast<Eigen::Index>(dimension());
    ev.gradient = Eigen::VectorXd::Zero(dim);
    const Eigen::VectorXd u = -resid;
    const Eigen::VectorXd w = any_multiplicative_ ? Eigen::VectorXd(u.cwiseProduct(Eigen::VectorXd::Ones(n) + s_mul))
                                                  : u;

    if (d.growth == Growth::Linear) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double t = d.t[static_cast<std::size_t>(r)];
            ev.gradient(0) += w(r) * t;
            ev.gradient(1) += w(r);
            for (std::size_t j = 0; j < s; ++j) {
                if (t >= cps[j]) {
                    ev.gradient(static_cast<Eigen::Index>(2 + j)) += w(r) * (t - cps[j]);
                }
            }
        }
    } else {
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            const std::size_t j = segment[ri];
            const double t = d.t[ri];
            const double rate = seg.rate[j];
            const double lever = t - seg.offset[j];
            const double coef = w(r) * slope(r);
            // dz = d(rate) * lever - rate * d(offset)
            Eigen::VectorXd dz = -rate * seg.d_offset[j];
            dz(0) += lever;
            for (std::size_t i = 0; i < j; ++i) {
                dz(static_cast<Eigen::Index>(2 + i)) += lever;
            }
            ev.gradient.head(static_cast<Eigen::Index>(2 + s)) += coef * dz;
        }
    }

    Eigen::VectorXd g_beta = (features_.transpose() * u).cwiseProduct(additive_mask_);
    if (any_multiplicative_) {
        g_beta += (features_.transpose() * u.cwiseProduct(ev.g)).cwiseProduct(multiplicative_mask_);
    }
    ev.gradient.tail(q) = g_beta;

    for (std::size_t j = 0; j < s; ++j) {
        ev.gradient(static_cast<Eigen::Index>(2 + j)) +=
            prior_weight_ * delta[j] / (softabs(delta[j]) * d.prior_scales[j]);
    }
    for (Eigen::Index c = 0; c < q; ++c) {
        const double scale = d.prior_scales[s + static_cast<std::size_t>(c)];
        ev.gradient(static_cast<Eigen::Index>(2 + s) + c) += prior_weight_ * beta(c) / (scale * scale);
    }
    if (!ev.gradient.allFinite()) {
        fail(ErrorKind::NonFiniteGradient, "MAP gradient is not finite");
    }
    return ev;
}

Eigen::MatrixXd MapObjective::jacobian(std::span<const double> params) const {
    const auto& d = *design_;
    const std::size_t s = d.trend_width();
    const auto q = static_cast<Eigen::Index>(d.feature_width());
    const auto n = static_cast<Eigen::Index>(d.rows());
    if (params.size() != dimension()) {
        fail(ErrorKind::LengthMismatch, "parameter vector has wrong length");
    }
    const double k = params[0];
    const double m = params[1];
    const std::span<const double> delta = params.subspan(2, s);
    const Eigen::Map<const Eigen::VectorXd> beta(params.data() + 2 + s, q);
    const std::span<const double> cps = d.changepoints;
    const auto trend_dim = static_cast<Eigen::Index>(2 + s);

    Eigen::VectorXd factor = Eigen::VectorXd::Ones(n);
    if (any_multiplicative_) {
        factor += features_ * beta.cwiseProduct(multiplicative_mask_);
    }

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(dimension()));
    Eigen::VectorXd g(n);
    if (d.growth == Growth::Linear) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double t = d.t[static_cast<std::size_t>(r)];
            g(r) = k * t + m;
            jac(r, 0) = t;
            jac(r, 1) = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                if (t >= cps[j]) {
                    g(r) += delta[j] * (t - cps[j]);
                    jac(r, static_cast<Eigen::Index>(2 + j)) = t - cps[j];
                }
            }
        }
    } else {
        const auto seg = logistic_segments(k, m, delta, cps, true);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            const double t = d.t[ri];
            const std::size_t j = active_count(t, cps);
            const double rate = seg.rate[j];
            const double lever = t - seg.offset[j];
            const double sig = 1.0 / (1.0 + std::exp(-rate * lever));
            g(r) = d.capacity[ri] * sig;
            Eigen::VectorXd dz = -rate * seg.d_offset[j];
            dz(0) += lever;
            for (std::size_t i = 0; i < j; ++i) {
                dz(static_cast<Eigen::Index>(2 + i)) += lever;
            }
            jac.row(r).head(trend_dim) = (d.capacity[ri] * sig * (1.0 - sig)) * dz.transpose();
        }
    }
    for (Eigen::Index r = 0; r < n; ++r) {
        jac.row(r).head(trend_dim) *= factor(r);
        for (Eigen::Index c = 0; c < q; ++c) {
            jac(r, trend_dim + c) = features_(r, c) * (multiplicative_mask_(c) > 0.0 ? g(r) : 1.0);
        }
    }
    return jac;
}

Eigen::MatrixXd MapObjective::gauss_newton_hessian(std::span<const double> params) const {
    const auto& d = *design_;
    const std::size_t s = d.trend_width();
    const Eigen::MatrixXd jac = jacobian(params);
    Eigen::MatrixXd h = jac.transpose() * jac;
    for (std::size_t j = 0; j < s; ++j) {
        const double x = params[2 + j];
        const double r = x * x + kSoftAbsEpsilon;
        h(static_cast<Eigen::Index>(2 + j), static_cast<Eigen::Index>(2 + j)) +=
            prior_weight_ * kSoftAbsEpsilon / (r * std::sqrt(r) * d.prior_scales[j]);
    }
    for (std::size_t c = 0; c < d.feature_width(); ++c) {
        const double scale = d.prior_scales[s + c];
        h(static_cast<Eigen::Index>(2 + s + c), static_cast<Eigen::Index>(2 + s + c)) += prior_weight_ / (scale * scale);
    }
    return h;
}

double MapObjective::value(std::span<const double> params) const {
    return evaluate(params, false).value;
}

double MapObjective::value_and_gradient(std::span<const double> params, std::span<double> grad) const {
    auto ev = evaluate(params, true);
    std::copy(ev.gradient.data(), ev.gradient.data() + ev.gradient.size(), grad.begin());
    return ev.value;
}

std::vector<double> MapObjective::predict(std::span<const double> params) const {
    auto ev = evaluate(params, false);
    return {ev.yhat.data(), ev.yhat.data() + ev.yhat.size()};
}

std::vector<double> MapObjective::trend(std::span<const double> params) const {
    auto ev = evaluate(params, false);
    return {ev.g.data(), ev.g.data() + ev.g.size()};
}

double map_objective(std::span<const double> params, const DesignMatrix& design, std::span<const double> y) {
    return MapObjective(design, y).value(params);
}

std::vector<double> map_gradient(std::span<const double> params, const DesignMatrix& design,
                                 std::span<const double> y) {
    MapObjective obj(design, y);
    std::vector<double> grad(obj.dimension());
    obj.value_and_gradient(params, grad);
    return grad;
}

std::vector<double> trend_series(std::span<const double> t, Growth growth, double k, double m,
                                 std::span<const double> delta, std::span<const double> changepoints,
                                 std::span<const double> capacity) {
    std::vector<double> out(t.size());
    if (growth == Growth::Linear) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            out[i] = linear_trend(t[i], k, m, delta, changepoints);
        }
        return out;
    }
    const auto gamma = logistic_gamma(changepoints, k, m, delta);
    for (std::size_t i = 0; i < t.size(); ++i) {
        out[i] = logistic_trend(t[i], k, m, delta, gamma, changepoints, capacity[i]);
    }
    return out;
}

} // namespace trendline
