#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "maxode/trajectory.hpp"

namespace maxode {

struct PicardConfig {
    Grid grid;
    double tol = 1e-10;
    int max_iter = 100;

    /// When set (and < 1), successive differences are checked against
    /// deltas[n+1] <= q * deltas[n] * (1 + eps_grid) and the geometric
    /// envelope deltas[0] * q^n is reported as the bound curve.
    std::optional<double> contraction_factor;

    /// Slack added to theoretical-bound checks; negative means the default
    /// 10 * grid.h.
    double eps_grid = -1.0;
};

struct PicardReport {
    int n_iters = 0;
    std::vector<double> deltas;        // sup-norm successive differences
    std::vector<double> bound_curve;   // theoretical envelope when available
    bool converged = false;
    int bound_violations = 0;
};

/// One application of the integral operator: F(x)(t_k) = x0 + cumulative
/// trapezoidal integral of s -> f(s, x(s), running max of h(x) up to s).
/// Node 0 equals x0 exactly.
Trajectory picard_operator(const ProblemSpec& spec, const Trajectory& x);

/// Iterate x <- F(x) from the constant trajectory x == x0 until the sup-norm
/// difference drops to cfg.tol or max_iter is reached. Non-finite iterates
/// abort with NonFiniteError.
std::pair<Trajectory, PicardReport> solve_picard(const ProblemSpec& spec, const PicardConfig& cfg);

/// Iterates of a scalar sequence sampled on a grid.
struct SampleSequence {
    Grid grid;
    std::vector<std::vector<double>> iterates;  // iterates[n][node]
};

/// Normalized logistic scheme g_0 == 1,
///   g_n(t) = 1 + int_0^t g_{n-1} - x0 * int_0^t max over [0,s] of g_{n-1}^2,
/// so that x_n = x0 * g_n solves the modified logistic recursion.
SampleSequence logistic_g_sequence(double x0, int n, const Grid& grid);

struct BoundCheckReport {
    int magnitude_violations = 0;     // iterate magnitude bound
    int difference_violations = 0;    // successive-difference bound
    double worst_magnitude_excess = 0.0;   // most positive (|value| - limit); <= 0 when clean
    double worst_difference_excess = 0.0;
    std::vector<double> bound_curve;  // sup over nodes of the difference bound, per n

    bool clean() const { return magnitude_violations == 0 && difference_violations == 0; }
};

/// Check |g_n| <= alpha + eps_grid and the factorial difference bound
/// |g_{n+1}-g_n|(t) <= |1-x0|/(1+2a|x0|) * ((1+2a|x0|) t)^{n+1}/(n+1)! + eps_grid
/// at every node. Requires alpha > 1 and grid end < logistic_horizon(x0, alpha).
BoundCheckReport logistic_bound_check(double x0, double alpha, const SampleSequence& g,
                                      double eps_grid);

/// Iterates of the coupled linear scheme (monotone case 0 < y0 < x0):
///   x_{n+1}(t) = x0 + int_0^t (x_n(s) - y0) ds,
///   y_{n+1}(t) = y0 + int_0^t (y_n(s) - x_n(s)) ds.
/// Equal initial data is rejected: the monotonicity argument that replaces
/// the running maxima with y0 and x_n(s) degenerates when x0 = y0.
struct CoupledSequences {
    Grid grid;
    std::vector<std::vector<double>> x;  // x[n][node]
    std::vector<std::vector<double>> y;
};

CoupledSequences coupled_linear_sequence(double x0, double y0, int n, const Grid& grid);

/// Factorial bounds |x_{n+1}-x_n|(t) <= |x0-y0| t^{n+1}/(n+1)! and
/// |y_{n+1}-y_n|(t) <= |x0-y0| T t^{n+1}/n!, with slack eps_grid; T = grid end.
BoundCheckReport coupled_linear_bound_check(double x0, double y0, const CoupledSequences& seq,
                                            double eps_grid);

/// Iterates of the coupled quadratic scheme
///   x_{n+1}(t) = x0 + int x_n - int (running max of y_n^2),
///   y_{n+1}(t) = y0 + int y_n - int (running max of x_n^2).
/// Requires x0, y0 > 0 and (T = grid end, c0) feasible.
CoupledSequences coupled_quadratic_sequence(double x0, double y0, double c0, int n,
                                            const Grid& grid);

/// Uniform bound |x_n|, |y_n| <= c0 + eps_grid and the difference bound
/// (c0/T) (1+2c0)^n t^{n+1}/(n+1)! + eps_grid, both checked at every node.
BoundCheckReport coupled_quadratic_bound_check(double c0, const CoupledSequences& seq,
                                               double eps_grid);

} // namespace maxode
