#include "trendline/optimizer.hpp"

#include "trendline/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace trendline {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double inf_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

struct Trial {
    double alpha = 0.0;
    double f = 0.0;
    double slope = 0.0;
    std::vector<double> x;
    std::vector<double> g;
};

class LineSearch {
public:
    LineSearch(const ObjectiveFn& fn, const LbfgsOptions& opt, std::span<const double> x0, double f0,
               std::span<const double> dir, double slope0, int& evaluations)
        : fn_(fn), opt_(opt), x0_(x0), f0_(f0), dir_(dir), slope0_(slope0), evaluations_(evaluations) {}

    std::optional<Trial> run(double alpha) {
        Trial prev{0.0, f0_, slope0_, {}, {}};
        for (int i = 0; i < kMaxSteps; ++i) {
            Trial cur = probe(alpha);
            if (!std::isfinite(cur.f)) {
                alpha = 0.5 * (prev.alpha + alpha);
                continue;
            }
            if (cur.f > f0_ + opt_.armijo * alpha * slope0_ || (i > 0 && cur.f >= prev.f)) {
                return zoom(std::move(prev), std::move(cur));
            }
            if (std::abs(cur.slope) <= -opt_.curvature * slope0_) {
                return cur;
            }
            if (cur.slope >= 0.0) {
                return zoom(std::move(cur), std::move(prev));
            }
            remember(cur);
            prev = std::move(cur);
            alpha *= 2.0;
        }
        return best_;
    }

private:
    static constexpr int kMaxSteps = 50;

    Trial probe(double alpha) {
        Trial t;
        t.alpha = alpha;
        t.x.resize(x0_.size());
        t.g.resize(x0_.size());
        for (std::size_t i = 0; i < x0_.size(); ++i) {
            t.x[i] = x0_[i] + alpha * dir_[i];
        }
        ++evaluations_;
        try {
            t.f = fn_(t.x, t.g);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonFiniteObjective && e.kind() != ErrorKind::NonFiniteGradient) {
                throw;
            }
            t.f = std::numeric_limits<double>::infinity();
        }
        t.slope = std::isfinite(t.f) ? dot(t.g, dir_) : 0.0;
        return t;
    }

    void remember(const Trial& t) {
        if (std::isfinite(t.f) && t.f < f0_ && (!best_ || t.f < best_->f)) {
            best_ = t;
        }
    }

    // Safeguarded cubic interpolation inside (lo, hi).
    static double interpolate(const Trial& lo, const Trial& hi) {
        const double a = lo.alpha;
        const double b = hi.alpha;
        const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
        const double disc = d1 * d1 - lo.slope * hi.slope;
        double next = 0.5 * (a + b);
        if (disc >= 0.0) {
            const double d2 = std::copysign(std::sqrt(disc), b - a);
            const double denom = hi.slope - lo.slope + 2.0 * d2;
            if (denom != 0.0) {
                next = b - (b - a) * (hi.slope + d2 - d1) / denom;
            }
        }
        const double lo_edge = std::min(a, b) + 0.1 * std::abs(b - a);
        const double hi_edge = std::max(a, b) - 0.1 * std::abs(b - a);
        if (!std::isfinite(next) || next < lo_edge || next > hi_edge) {
            next = 0.5 * (a + b);
        }
        return next;
    }

    std::optional<Trial> zoom(Trial lo, Trial hi) {
        remember(lo);
        for (int i = 0; i < kMaxSteps; ++i) {
            if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) {
                break;
            }
            const double alpha = std::isfinite(hi.f) ? interpolate(lo, hi) : 0.5 * (lo.alpha + hi.alpha);
            Trial cur = probe(alpha);
            if (!std::isfinite(cur.f) || cur.f > f0_ + opt_.armijo * alpha * slope0_ || cur.f >= lo.f) {
                hi = std::move(cur);
                continue;
            }
            if (std::abs(cur.slope) <= -opt_.curvature * slope0_) {
                return cur;
            }
            if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) {
                hi = std::move(lo);
            }
            remember(cur);
            lo = std::move(cur);
        }
        return best_;
    }

    const ObjectiveFn& fn_;
    const LbfgsOptions& opt_;
    std::span<const double> x0_;
    double f0_;
    std::span<const double> dir_;
    double slope0_;
    int& evaluations_;
    std::optional<Trial> best_;
};

struct Correction {
    std::vector<double> s;
    std::vector<double> y;
    double rho = 0.0;
};

std::vector<double> two_loop(const std::deque<Correction>& memory, std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
        alpha[i] = memory[i].rho * dot(memory[i].s, q);
        for (std::size_t j = 0; j < q.size(); ++j) {
            q[j] -= alpha[i] * memory[i].y[j];
        }
    }
    if (!memory.empty()) {
        const auto& last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) {
            v *= gamma;
        }
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const double beta = memory[i].rho * dot(memory[i].y, q);
        for (std::size_t j = 0; j < q.size(); ++j) {
            q[j] += memory[i].s[j] * (alpha[i] - beta);
        }
    }
    for (double& v : q) {
        v = -v;
    }
    return q;
}

} // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn& fn, std::vector<double> x0, const LbfgsOptions& options) {
    LbfgsResult result;
    std::vector<double> x = std::move(x0);
    std::vector<double> g(x.size());
    double f = fn(x, g);
    result.evaluations = 1;
    result.trace.push_back(f);
    if (!std::isfinite(f)) {
        fail(ErrorKind::NonFiniteObjective, "objective is not finite at the starting point");
    }

    std::deque<Correction> memory;
    auto finish = [&](std::string reason, int iterations) {
        result.x = x;
        result.value = f;
        result.gradient_norm = inf_norm(g);
        result.iterations = iterations;
        result.stop_reason = std::move(reason);
        return result;
    };

    if (inf_norm(g) <= options.gradient_tol) {
        return finish("gradient", 0);
    }

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        std::vector<double> dir = two_loop(memory, g);
        double slope = dot(g, dir);
        if (!(slope < 0.0)) {
            memory.clear();
            dir = two_loop(memory, g);
            slope = dot(g, dir);
        }
        double alpha = memory.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(g, g))) : 1.0;

        std::optional<Trial> step;
        {
            LineSearch ls(fn, options, x, f, dir, slope, result.evaluations);
            step = ls.run(alpha);
        }
        if (!step && !memory.empty()) {
            memory.clear();
            dir = two_loop(memory, g);
            slope = dot(g, dir);
            alpha = std::min(1.0, 1.0 / std::sqrt(dot(g, g)));
            LineSearch ls(fn, options, x, f, dir, slope, result.evaluations);
            step = ls.run(alpha);
        }
        if (!step) {
            // No representable decrease along steepest descent: the iterate is
            // stationary to working precision.
            return finish("line search stalled", iter - 1);
        }

        Correction c;
        c.s.resize(x.size());
        c.y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            c.s[i] = step->x[i] - x[i];
            c.y[i] = step->g[i] - g[i];
        }
        const double sy = dot(c.s, c.y);
        if (sy > 1e-12 * std::sqrt(dot(c.y, c.y) * dot(c.s, c.s))) {
            c.rho = 1.0 / sy;
            memory.push_back(std::move(c));
            if (static_cast<int>(memory.size()) > options.memory) {
                memory.pop_front();
            }
        }

        const double previous = f;
        x = std::move(step->x);
        g = std::move(step->g);
        f = step->f;
        result.trace.push_back(f);

        if (inf_norm(g) <= options.gradient_tol) {
            return finish("gradient", iter);
        }
        if (std::abs(previous - f) <= options.relative_decrease_tol * (1.0 + std::abs(f))) {
            return finish("objective", iter);
        }
    }
    fail(ErrorKind::ConvergenceFailure,
         "optimizer hit the iteration cap of " + std::to_string(options.max_iterations));
}

void refine_newton(const ObjectiveFn& fn, const CurvatureFn& curvature, LbfgsResult& result, int max_steps) {
    const std::size_t n = result.x.size();
    std::vector<double> x = result.x;
    std::vector<double> g(n);
    double f = fn(x, g);
    ++result.evaluations;
    std::vector<double> trial(n);
    std::vector<double> trial_g(n);
    for (int step = 0; step < max_steps; ++step) {
        const Eigen::MatrixXd h = curvature(x);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
        if (ldlt.info() != Eigen::Success) {
            break;
        }
        const Eigen::VectorXd p = -ldlt.solve(Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(n)));
        if (!p.allFinite() || !(dot(g, std::span<const double>(p.data(), n)) < 0.0)) {
            break;
        }
        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-10; alpha *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = x[i] + alpha * p(static_cast<Eigen::Index>(i));
            }
            ++result.evaluations;
            double ft = std::numeric_limits<double>::infinity();
            try {
                ft = fn(trial, trial_g);
            } catch (const Error&) {
                continue;
            }
            if (ft < f) {
                x.swap(trial);
                g.swap(trial_g);
                f = ft;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
        result.trace.push_back(f);
        ++result.refinement_steps;
    }
    result.x = std::move(x);
    result.value = f;
    result.gradient_norm = inf_norm(g);
}

} // namespace trendline
