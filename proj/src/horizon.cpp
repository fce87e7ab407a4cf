#include "maxode/horizon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxode {

const char* horizon_branch_name(HorizonBranch branch) {
    switch (branch) {
        case HorizonBranch::Radius: return "radius";
        case HorizonBranch::Lipschitz: return "lipschitz";
        case HorizonBranch::Reference: return "reference";
    }
    return "?";
}

HorizonResult existence_horizon(const ContractionData& data) {
    if (!(data.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(data.T > 0.0)) throw std::invalid_argument("reference horizon T must be positive");
    if (data.m < 1) throw std::invalid_argument("dimension must be >= 1");
    if (data.L_f < 0.0 || data.L_g < 0.0)
        throw std::invalid_argument("Lipschitz constants must be nonnegative");
    if (!(data.M > 0.0)) throw std::invalid_argument("M must be positive");

    const double inf = std::numeric_limits<double>::infinity();
    const double radius = data.alpha / data.M;
    const double lip_denom = data.L_f * (1.0 + data.L_g * std::sqrt(static_cast<double>(data.m)));
    const double lipschitz = lip_denom > 0.0 ? 1.0 / lip_denom : inf;

    HorizonResult r;
    r.t_sup = radius;
    r.branch = HorizonBranch::Radius;
    if (lipschitz < r.t_sup) {
        r.t_sup = lipschitz;
        r.branch = HorizonBranch::Lipschitz;
    }
    if (data.T < r.t_sup) {
        r.t_sup = data.T;
        r.branch = HorizonBranch::Reference;
    }
    r.t_rec = std::min(0.9 * r.t_sup, data.T);
    r.contraction_factor = r.t_rec * data.L_f * (1.0 + std::sqrt(static_cast<double>(data.m)) * data.L_g);
    return r;
}

double logistic_horizon(double x0, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    return (alpha - 1.0) / (alpha * (1.0 + alpha * std::fabs(x0)));
}

LogisticHorizonOpt logistic_horizon_opt(double x0) {
    const double c = std::fabs(x0);
    if (c == 0.0) {
        // (alpha-1)/alpha increases to 1 as alpha grows; no finite maximizer.
        return {std::numeric_limits<double>::infinity(), 1.0, false};
    }
    const double alpha_star = 1.0 + std::sqrt(1.0 + 1.0 / c);
    return {alpha_star, logistic_horizon(x0, alpha_star), true};
}

QuadraticFeasibility quadratic_feasible(double x0, double y0, double T, double c0) {
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
    QuadraticFeasibility r{x0, y0, T, c0, {}, false};
    r.slacks[0] = c0 - (std::fabs(x0) + std::fabs(x0 - y0 * y0) * T);
    r.slacks[1] = c0 - (std::fabs(y0) + std::fabs(y0 - x0 * x0) * T);
    r.slacks[2] = c0 - (std::fabs(x0) + c0 * T + c0 * c0 * T);
    r.slacks[3] = c0 - (std::fabs(y0) + c0 * T + c0 * c0 * T);
    r.feasible = std::all_of(r.slacks.begin(), r.slacks.end(), [](double s) { return s >= 0.0; });
    return r;
}

std::optional<double> quadratic_search(double x0, double y0, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    const double lo = std::max({std::fabs(x0), std::fabs(y0), 1e-6});
    const double hi = 1e3;
    if (lo > hi) return std::nullopt;
    constexpr int kPoints = 241;
    const double ratio = std::log(hi / lo) / (kPoints - 1);
    // The feasible set in c0 is an interval, so the first feasible grid point
    // is the smallest one.
    for (int i = 0; i < kPoints; ++i) {
        const double c0 = lo * std::exp(ratio * i);
        if (quadratic_feasible(x0, y0, T, c0).feasible) return c0;
    }
    return std::nullopt;
}

ContractionData estimate_contraction_data(const ProblemSpec& spec, double alpha,
                                          int points_per_dim) {
    spec.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

    Box state_box;
    state_box.time = {0.0, spec.T};
    for (double c : spec.x0) state_box.state.push_back({c - alpha, c + alpha});

    // Max-value coordinates range over the sampled images of the functionals.
    Box full_box = state_box;
    for (const Expr& h : spec.maxima)
        full_box.maxima.push_back(sampled_range(h, state_box, points_per_dim));

    ContractionData data;
    data.alpha = alpha;
    data.T = spec.T;
    data.m = spec.m;
    data.M = estimate_bound(spec.f, full_box, points_per_dim);
    data.L_f = estimate_lipschitz(spec.f, full_box, points_per_dim);
    data.L_g = 0.0;
    for (const Expr& h : spec.maxima) {
        Expr one[] = {h};
        data.L_g = std::max(data.L_g, estimate_lipschitz(one, state_box, points_per_dim));
    }
    return data;
}

} // namespace maxode
