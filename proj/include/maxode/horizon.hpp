#pragma once

#include <array>
#include <optional>

#include "maxode/problem.hpp"
#include "maxode/sampling.hpp"

namespace maxode {

/// Constants feeding the contraction-horizon formula: the sup bound M of the
/// right-hand side over the radius-alpha box, Lipschitz constants L_f of the
/// right-hand side and L_g (common to all max functionals), the reference
/// horizon T and the state dimension m.
struct ContractionData {
    double alpha = 0.0;
    double T = 0.0;
    double M = 0.0;
    double L_f = 0.0;
    double L_g = 0.0;
    int m = 1;
};

enum class HorizonBranch { Radius, Lipschitz, Reference };

const char* horizon_branch_name(HorizonBranch branch);

struct HorizonResult {
    double t_sup = 0.0;                 // supremum of admissible horizons
    double t_rec = 0.0;                 // 0.9 * t_sup, a usable interior point
    double contraction_factor = 0.0;    // t_rec * L_f * (1 + sqrt(m) * L_g)
    HorizonBranch branch = HorizonBranch::Reference;
};

/// T_sup = min{ alpha/M, 1/(L_f*(1+L_g*sqrt(m))), T }; a zero denominator
/// makes that branch infinite. Requires M > 0.
HorizonResult existence_horizon(const ContractionData& data);

/// Admissible-horizon bound (alpha-1)/(alpha*(1+alpha*|x0|)) for the modified
/// logistic problem; requires alpha > 1.
double logistic_horizon(double x0, double alpha);

struct LogisticHorizonOpt {
    double alpha_star;   // maximizer; +infinity when the supremum is unattained
    double t_star;       // the bound's supremum over alpha > 1
    bool attained;       // false only for x0 = 0 (supremum 1 in the limit)
};

/// Maximize logistic_horizon(x0, .) over alpha > 1. For c = |x0| > 0 the
/// stationarity condition c*a^2 - 2*c*a - 1 = 0 gives a* = 1 + sqrt(1 + 1/c).
LogisticHorizonOpt logistic_horizon_opt(double x0);

/// The four feasibility inequalities for the coupled quadratic system:
///   |x0| + |x0 - y0^2|*T <= c0,      |y0| + |y0 - x0^2|*T <= c0,
///   |x0| + c0*T + c0^2*T <= c0,      |y0| + c0*T + c0^2*T <= c0.
/// slacks[i] = c0 - lhs_i; feasible iff every slack is >= 0.
struct QuadraticFeasibility {
    double x0, y0, T, c0;
    std::array<double, 4> slacks;
    bool feasible;
};

QuadraticFeasibility quadratic_feasible(double x0, double y0, double T, double c0);

/// Smallest feasible c0 on a 241-point logarithmic grid over
/// [max(|x0|, |y0|, 1e-6), 1e3], or nullopt when none is feasible.
std::optional<double> quadratic_search(double x0, double y0, double T);

/// Assemble ContractionData for a problem by lattice estimation over the box
/// |x - x0| <= alpha (componentwise): M and L_f over state and max-value
/// coordinates (max-value ranges are the sampled images of the functionals),
/// L_g over state coordinates only. Estimates, not certified bounds.
ContractionData estimate_contraction_data(const ProblemSpec& spec, double alpha,
                                          int points_per_dim = 33);

} // namespace maxode
