#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace trendline {

/// Objective callback: returns f(x) and writes the gradient into `grad`.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    int max_iterations = 2000;
    int memory = 10;
    double relative_decrease_tol = 1e-10; // |f_k - f_{k+1}| <= tol * (1 + |f_{k+1}|)
    double gradient_tol = 1e-8;           // ||g||_inf
    double armijo = 1e-4;
    double curvature = 0.9;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_norm = 0.0; // infinity norm at x
    int iterations = 0;
    int evaluations = 0;
    std::vector<double> trace; // objective after every accepted step, starting with f(x0)
    std::string stop_reason;
    int refinement_steps = 0;  // accepted Newton steps after the quasi-Newton phase
};

/// Positive semi-definite curvature model of the objective at x.
using CurvatureFn = std::function<Eigen::MatrixXd(std::span<const double> x)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Every accepted step
/// strictly decreases the objective. Throws ConvergenceFailure when the
/// iteration cap is reached before either tolerance is met.
LbfgsResult minimize_lbfgs(const ObjectiveFn& fn, std::vector<double> x0, const LbfgsOptions& options = {});

/// Damped Newton steps from `result.x` using `curvature` in place of the
/// Hessian. A step is accepted only if it strictly lowers the objective, so
/// the trace stays monotone; refinement ends when no step does.
void refine_newton(const ObjectiveFn& fn, const CurvatureFn& curvature, LbfgsResult& result,
                   int max_steps = 50);

} // namespace trendline
