#include "maxode/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string_view>

#include "maxode/demos.hpp"
#include "maxode/horizon.hpp"
#include "maxode/integrate.hpp"
#include "maxode/picard.hpp"
#include "maxode/trajectory.hpp"

namespace maxode {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

ProblemSpec logistic_spec(double x0, double T) {
    ProblemSpec spec;
    spec.m = 1;
    spec.f = {parse_expr("x1 - m1")};
    spec.maxima = {parse_expr("x1^2")};
    spec.x0 = {x0};
    spec.T = T;
    return spec;
}

ProblemSpec coupled_linear_spec(double x0, double y0, double T) {
    ProblemSpec spec;
    spec.m = 2;
    spec.f = {parse_expr("x1 - m2"), parse_expr("x2 - m1")};
    spec.maxima = {parse_expr("x1"), parse_expr("x2")};
    spec.x0 = {x0, y0};
    spec.T = T;
    return spec;
}

double max_deviation_from(const Trajectory& traj, std::span<const double> value) {
    double worst = 0.0;
    for (int k = 0; k < traj.grid().n_nodes(); ++k)
        for (int i = 0; i < traj.dim(); ++i)
            worst = std::max(worst, std::fabs(traj.at(k, i) - value[static_cast<std::size_t>(i)]));
    return worst;
}

// Classical logistic solution; valid for the max problem while x is increasing.
double logistic_closed_form(double x0, double t) {
    const double e = std::exp(t);
    return x0 * e / (1.0 - x0 + x0 * e);
}

// Uniform double in [lo, hi] from raw engine draws (portable across
// standard libraries, unlike the distribution classes).
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

// --- criteria ---------------------------------------------------------------

CriterionResult constant_solutions(const VerifyOptions&) {
    CriterionResult r;
    r.pass = true;
    double worst = 0.0;
    for (double x0 : {0.0, 1.0}) {
        ProblemSpec spec = logistic_spec(x0, 0.2);
        Grid grid = Grid::over(0.2, 200);
        const double value[] = {x0};
        worst = std::max(worst, max_deviation_from(euler_max(spec, grid), value));
        worst = std::max(worst, max_deviation_from(heun_max(spec, grid), value));
        auto [traj, report] = solve_picard(spec, {grid, 1e-12, 50});
        worst = std::max(worst, max_deviation_from(traj, value));
        if (!report.converged) r.pass = false;
    }
    if (worst > 1e-14) r.pass = false;
    r.detail = "max deviation " + fmt(worst) + " (limit 1e-14)";
    return r;
}

CriterionResult logistic_bounds(const VerifyOptions& opts) {
    CriterionResult r;
    const double alpha = 2.0;
    double worst_mag = -1e300, worst_diff = -1e300;
    int violations = 0;
    for (double x0 : {0.25, 0.5, 0.75, 1.5, -0.5}) {
        const double t_star = 0.8 * logistic_horizon(x0, alpha);
        const int n_steps = std::max(1, static_cast<int>(std::llround(t_star / 1e-3)));
        Grid grid = Grid::over(t_star, n_steps);
        SampleSequence seq = logistic_g_sequence(x0, 20, grid);
        const double eps = opts.eps_grid.value_or(10.0 * grid.h);
        BoundCheckReport rep = logistic_bound_check(x0, alpha, seq, eps);
        violations += rep.magnitude_violations + rep.difference_violations;
        worst_mag = std::max(worst_mag, rep.worst_magnitude_excess);
        worst_diff = std::max(worst_diff, rep.worst_difference_excess);
    }
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations; worst excesses " + fmt(worst_mag) +
               " / " + fmt(worst_diff);
    return r;
}

CriterionResult logistic_reduction(const VerifyOptions&) {
    CriterionResult r;
    r.pass = true;
    ProblemSpec spec = logistic_spec(0.5, 0.2);
    Grid grid = Grid::over(0.2, 200);
    auto [traj, report] = solve_picard(spec, {grid, 1e-12, 200});
    if (!report.converged) {
        r.pass = false;
        r.detail = "picard iteration did not converge";
        return r;
    }
    bool monotone = true;
    for (int k = 0; k + 1 < grid.n_nodes(); ++k)
        if (traj.at(k + 1, 0) < traj.at(k, 0) - 1e-12) monotone = false;
    double worst = 0.0;
    for (int k = 0; k < grid.n_nodes(); ++k)
        worst = std::max(worst, std::fabs(traj.at(k, 0) - logistic_closed_form(0.5, grid.t(k))));
    r.pass = monotone && worst <= 1e-5;
    r.detail = "sup error " + fmt(worst) + " (limit 1e-5), " +
               (monotone ? "solution nondecreasing" : "monotonicity violated");
    return r;
}

CriterionResult coupled_linear(const VerifyOptions& opts) {
    CriterionResult r;
    r.pass = true;
    std::ostringstream detail;
    for (auto [x0, y0] : {std::pair{2.0, 1.0}, std::pair{1.0, 0.5}}) {
        const double T = 1.0;
        Grid grid = Grid::over(T, 1000);
        CoupledSequences seq = coupled_linear_sequence(x0, y0, 40, grid);

        // Order and monotonicity invariants at every node of every iterate.
        for (std::size_t n = 0; n < seq.x.size(); ++n) {
            for (int k = 0; k < grid.n_nodes(); ++k) {
                const std::size_t kk = static_cast<std::size_t>(k);
                if (seq.x[n][kk] < y0 - 1e-12) r.pass = false;
                if (seq.y[n][kk] > seq.x[n][kk] + 1e-12) r.pass = false;
                if (k > 0 && seq.x[n][kk] < seq.x[n][kk - 1] - 1e-12) r.pass = false;
                if (k > 0 && seq.y[n][kk] > seq.y[n][kk - 1] + 1e-12) r.pass = false;
            }
        }

        const double eps = opts.eps_grid.value_or(10.0 * grid.h);
        BoundCheckReport rep = coupled_linear_bound_check(x0, y0, seq, eps);
        if (!rep.clean()) r.pass = false;

        // Closed-form limit of the reduced linear system; residual-check it
        // against the full max-system first, then compare the iteration limit.
        Trajectory closed(grid, 2);
        for (int k = 0; k < grid.n_nodes(); ++k) {
            const double t = grid.t(k);
            closed.at(k, 0) = y0 + (x0 - y0) * std::exp(t);
            closed.at(k, 1) = y0 - (x0 - y0) * t * std::exp(t);
        }
        ProblemSpec spec = coupled_linear_spec(x0, y0, T);
        double resid = residual(spec, closed).sup_residual;
        if (resid > 5.0 * grid.h * grid.h) r.pass = false;

        double worst = 0.0;
        for (int k = 0; k < grid.n_nodes(); ++k) {
            const std::size_t kk = static_cast<std::size_t>(k);
            worst = std::max(worst, std::fabs(seq.x.back()[kk] - closed.at(k, 0)));
            worst = std::max(worst, std::fabs(seq.y.back()[kk] - closed.at(k, 1)));
        }
        if (worst > 1e-5) r.pass = false;
        detail << "(" << x0 << "," << y0 << "): oracle residual " << fmt(resid) << ", limit error "
               << fmt(worst) << "; ";
    }
    r.detail = detail.str();
    return r;
}

CriterionResult equal_data_guard(const VerifyOptions&) {
    CriterionResult r;
    Grid grid = Grid::over(1.0, 10);
    try {
        coupled_linear_sequence(1.0, 1.0, 3, grid);
        r.detail = "x0 = y0 was accepted";
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        r.pass = msg.find("equal initial data") != std::string::npos;
        r.detail = "rejected with: " + msg.substr(0, 60) + "...";
    }
    return r;
}

CriterionResult constant_coeff_closed_form(const VerifyOptions&) {
    CriterionResult r;
    r.pass = true;
    ConstantCoeffSystem sys{1.0, 1.0, 1.0, 3.0, 1.0, 2.0};
    Grid grid = Grid::over(0.6, 6000);  // h = 1e-4
    Trajectory closed = closed_form_constant_coeff(sys, grid);
    double resid = residual(sys.to_problem(0.6), closed).sup_residual;
    if (resid > 5.0 * grid.h * grid.h) r.pass = false;

    ZeroCrossings zc = zero_crossings(sys);
    if (!zc.t_x || !zc.t_y) {
        r.pass = false;
        r.detail = "missing crossing";
        return r;
    }
    // Bisection oracle on the analytic components, bracket [0, 5].
    auto bisect = [](const std::function<double(double)>& f) {
        double lo = 0.0, hi = 5.0;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double root_x =
        bisect([&](double t) { return sys.x0 + (sys.A() / sys.a) * (std::exp(sys.a * t) - 1.0); });
    const double root_y =
        bisect([&](double t) { return sys.y0 + (sys.B() / sys.c) * (std::exp(sys.c * t) - 1.0); });
    const double err_x = std::fabs(*zc.t_x - root_x);
    const double err_y = std::fabs(*zc.t_y - root_y);
    if (err_x > 1e-8 || err_y > 1e-8) r.pass = false;
    if (std::fabs(*zc.t_x - std::log(2.0)) > 1e-12 || std::fabs(*zc.t_y - std::log(3.0)) > 1e-12)
        r.pass = false;
    r.detail = "residual " + fmt(resid) + " (limit " + fmt(5.0 * grid.h * grid.h) +
               "); crossing errors " + fmt(err_x) + ", " + fmt(err_y);
    return r;
}

CriterionResult quadratic_feasibility(const VerifyOptions& opts) {
    CriterionResult r;
    r.pass = true;
    QuadraticFeasibility feas = quadratic_feasible(0.05, 0.05, 0.5, 0.2);
    const double expected[] = {0.12625, 0.12625, 0.03, 0.03};
    double worst_slack_err = 0.0;
    for (int i = 0; i < 4; ++i)
        worst_slack_err = std::max(worst_slack_err, std::fabs(feas.slacks[static_cast<std::size_t>(i)] - expected[i]));
    if (!feas.feasible || worst_slack_err > 1e-12) r.pass = false;

    Grid grid = Grid::over(0.5, 500);
    CoupledSequences seq = coupled_quadratic_sequence(0.05, 0.05, 0.2, 15, grid);
    const double eps = opts.eps_grid.value_or(10.0 * grid.h);
    BoundCheckReport rep = coupled_quadratic_bound_check(0.2, seq, eps);
    if (!rep.clean()) r.pass = false;
    r.detail = "slack error " + fmt(worst_slack_err) + "; " +
               std::to_string(rep.magnitude_violations + rep.difference_violations) +
               " bound violations";
    return r;
}

CriterionResult contraction_consistency(const VerifyOptions& opts) {
    CriterionResult r;
    r.pass = true;
    ProblemSpec spec = logistic_spec(0.5, 0.2);
    ContractionData data = estimate_contraction_data(spec, 2.0);
    HorizonResult horizon = existence_horizon(data);
    if (!(horizon.contraction_factor < 1.0)) {
        r.pass = false;
        r.detail = "contraction factor " + fmt(horizon.contraction_factor) + " not below 1";
        return r;
    }
    Grid grid = Grid::over(horizon.t_rec, 200);
    PicardConfig cfg{grid, 1e-12, 200};
    cfg.contraction_factor = horizon.contraction_factor;
    cfg.eps_grid = opts.eps_grid.value_or(-1.0);
    auto [traj, report] = solve_picard(spec, cfg);
    (void)traj;

    // "Eventually": every ratio in the second half of the recorded deltas
    // (above the rounding floor) obeys q + 0.05.
    const double q = horizon.contraction_factor;
    int checked = 0;
    double worst_ratio = 0.0;
    bool ok = report.converged;
    for (std::size_t n = report.deltas.size() / 2; n + 1 < report.deltas.size(); ++n) {
        if (report.deltas[n] <= 1e-13 || report.deltas[n + 1] <= 1e-13) continue;
        double ratio = report.deltas[n + 1] / report.deltas[n];
        worst_ratio = std::max(worst_ratio, ratio);
        ++checked;
        if (ratio > q + 0.05) ok = false;
    }
    if (checked == 0) ok = false;
    r.pass = ok;
    r.detail = "factor " + fmt(q) + " (branch " + horizon_branch_name(horizon.branch) +
               "), worst late ratio " + fmt(worst_ratio) + " over " + std::to_string(checked) +
               " pairs";
    return r;
}

CriterionResult max_operator_properties(const VerifyOptions& opts) {
    CriterionResult r;
    std::mt19937_64 rng(opts.seed);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = 1 + static_cast<std::size_t>(rng() % 100);
        std::vector<double> g(len), h(len), dominating(len);
        for (std::size_t i = 0; i < len; ++i) {
            g[i] = uniform(rng, -10.0, 10.0);
            h[i] = uniform(rng, -10.0, 10.0);
            dominating[i] = g[i] + std::fabs(uniform(rng, 0.0, 5.0));
        }
        auto pm_g = prefix_max(g), pm_h = prefix_max(h), pm_dom = prefix_max(dominating);

        // |max g - max h| <= max |g - h| at every prefix (slack covers the
        // one rounding in each subtraction).
        double maxdiff = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            maxdiff = std::max(maxdiff, std::fabs(g[k] - h[k]));
            if (std::fabs(pm_g[k] - pm_h[k]) > maxdiff + 1e-12) ++failures;
            if (pm_g[k] > pm_dom[k]) ++failures;           // monotonicity
        }
        if (prefix_max(pm_g) != pm_g) ++failures;          // idempotence, exact
    }
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + " failures over 1000 random pairs";
    return r;
}

CriterionResult cross_solver(const VerifyOptions&) {
    CriterionResult r;
    r.pass = true;
    std::ostringstream detail;
    for (const DemoProblem& d : demo_problems()) {
        double t_end = d.compare_horizon;
        if (d.contraction_horizon) {
            HorizonResult horizon = existence_horizon(estimate_contraction_data(d.spec, 1.0));
            t_end = std::min(horizon.t_rec, d.spec.T);
        }
        Grid grid = Grid::over(t_end, 400);
        Trajectory heun = heun_max(d.spec, grid);
        auto [picard, report] = solve_picard(d.spec, {grid, 1e-10, 400});
        double diff = sup_dist(heun, picard);
        double limit = 100.0 * grid.h * grid.h;
        bool ok = report.converged && diff <= limit;
        if (!ok) r.pass = false;
        detail << d.name << " " << fmt(diff) << "/" << fmt(limit)
               << (d.guaranteed ? "" : " [no guarantee]") << "; ";
    }
    r.detail = detail.str();
    return r;
}

Expr random_expr(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || rng() % 4 == 0) {
        switch (rng() % 5) {
            case 0: {
                // Mix of integers, dyadic rationals and irregular decimals.
                switch (rng() % 3) {
                    case 0: return Expr::constant(static_cast<double>(rng() % 100));
                    case 1: return Expr::constant(static_cast<double>(rng() % 1024) / 64.0);
                    default: return Expr::constant(uniform(rng, -50.0, 50.0));
                }
            }
            case 1: return Expr::time();
            case 2: return Expr::state(1 + static_cast<int>(rng() % 3));
            case 3: return Expr::max_value(1 + static_cast<int>(rng() % 2));
            default: return Expr::constant(0.0);
        }
    }
    if (rng() % 3 == 0) {
        static constexpr UnaryOp ops[] = {UnaryOp::Neg, UnaryOp::Exp, UnaryOp::Log, UnaryOp::Abs,
                                          UnaryOp::Sqrt, UnaryOp::Sin, UnaryOp::Cos};
        return Expr::unary(ops[rng() % 7], random_expr(rng, depth - 1));
    }
    static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                       BinaryOp::Pow};
    return Expr::binary(ops[rng() % 5], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
}

CriterionResult parser_roundtrip(const VerifyOptions& opts) {
    CriterionResult r;
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    int failures = 0;
    for (int i = 0; i < 500; ++i) {
        Expr e = random_expr(rng, 6);
        std::string printed = e.str();
        Expr reparsed = parse_expr(printed);
        if (!(reparsed == e) || reparsed.str() != printed) ++failures;
    }
    r.pass = failures == 0;
    r.detail = std::to_string(500 - failures) + "/500 expressions round-tripped";
    return r;
}

} // namespace

std::vector<CriterionResult> run_verification(const VerifyOptions& opts) {
    struct Entry {
        const char* id;
        const char* label;
        CriterionResult (*fn)(const VerifyOptions&);
    };
    static constexpr Entry criteria[] = {
        {"C01", "constant solutions of the logistic problem stay fixed", constant_solutions},
        {"C02", "logistic scheme magnitude and factorial difference bounds", logistic_bounds},
        {"C03", "logistic picard limit matches the classical closed form", logistic_reduction},
        {"C04", "coupled linear scheme monotonicity, bounds and closed-form limit", coupled_linear},
        {"C05", "coupled linear scheme rejects equal initial data", equal_data_guard},
        {"C06", "constant-coefficient closed form: residual and zero crossings",
         constant_coeff_closed_form},
        {"C07", "coupled quadratic feasibility slacks and iterate bounds", quadratic_feasibility},
        {"C08", "contraction horizon and empirical delta ratios (logistic)",
         contraction_consistency},
        {"C09", "running-max operator properties on a random corpus", max_operator_properties},
        {"C10", "cross-solver agreement on the bundled demos", cross_solver},
        {"C11", "parser round-trip on a generated corpus", parser_roundtrip},
    };
    std::vector<CriterionResult> results;
    for (const Entry& entry : criteria) {
        if (!opts.filter.empty() &&
            std::string_view(entry.id).find(opts.filter) == std::string_view::npos &&
            std::string_view(entry.label).find(opts.filter) == std::string_view::npos)
            continue;
        CriterionResult result;
        try {
            result = entry.fn(opts);
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("aborted: ") + e.what();
        }
        result.id = entry.id;
        result.label = entry.label;
        results.push_back(std::move(result));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

} // namespace maxode
