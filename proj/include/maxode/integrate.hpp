#pragma once

#include <optional>
#include <vector>

#include "maxode/trajectory.hpp"

namespace maxode {

/// Explicit Euler stepping for systems with running maxima: the max inputs at
/// t_k are the running maxima over accepted states up to and including x(t_k).
/// Throws NonFiniteError with the offending node when the state blows up.
Trajectory euler_max(const ProblemSpec& spec, const Grid& grid);

/// Heun (explicit trapezoid) stepping. The corrector stage's max input is the
/// stage-consistent value max(r(t_k), h_j(predicted state)); predictor states
/// are discarded from the persistent track after the corrector.
Trajectory heun_max(const ProblemSpec& spec, const Grid& grid);

/// Constant-coefficient coupled system
///   x' = a x - b (running max of y),   y' = c y - d (running max of x),
/// with derived A = a x0 - b y0 and B = c y0 - d x0. An explicit solution is
/// available only when A < 0, B < 0, a > 0 and c > 0 (both components then
/// decrease, so the running maxima stay pinned at the initial data).
struct ConstantCoeffSystem {
    double a, b, c, d;   // nonnegative rates
    double x0, y0;       // positive initial data

    double A() const { return a * x0 - b * y0; }
    double B() const { return c * y0 - d * x0; }

    void validate() const;                 // sign constraints on fields
    void validate_explicit_region() const; // additionally A<0, B<0, a>0, c>0

    /// The equivalent ProblemSpec (maxima h1 = x1, h2 = x2) with horizon T.
    ProblemSpec to_problem(double T) const;
};

/// Samples x(t) = x0 + (A/a)(e^{at}-1), y(t) = y0 + (B/c)(e^{ct}-1) on the
/// grid. Rejects parameters outside the explicit-solution region.
Trajectory closed_form_constant_coeff(const ConstantCoeffSystem& sys, const Grid& grid);

/// Zero-crossing times t_x = (1/a) log(b y0 / |A|), t_y = (1/c) log(d x0 / |B|).
/// A log argument below 1 means no crossing at t >= 0 (nullopt); argument 1
/// reports a crossing at the origin.
struct ZeroCrossings {
    std::optional<double> t_x;
    std::optional<double> t_y;
};

ZeroCrossings zero_crossings(const ConstantCoeffSystem& sys);

/// Defect of the integral reformulation: per node k the Euclidean norm of
/// x(t_k) - x0 - cumint(f(., x, running max of h(x)))(t_k).
struct ResidualReport {
    double sup_residual = 0.0;
    std::vector<double> per_node;
    int argmax_node = 0;
};

ResidualReport residual(const ProblemSpec& spec, const Trajectory& traj);

} // namespace maxode
