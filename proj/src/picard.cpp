#include "maxode/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "maxode/errors.hpp"
#include "maxode/horizon.hpp"

namespace maxode {

namespace {

// z^n / n!, evaluated in log space so large n cannot overflow.
double power_over_factorial(double z, int n) {
    if (n == 0) return 1.0;
    if (z <= 0.0) return 0.0;
    return std::exp(n * std::log(z) - std::lgamma(n + 1.0));
}

void check_finite(const Trajectory& traj, const std::string& what) {
    for (int k = 0; k < traj.grid().n_nodes(); ++k)
        for (int i = 0; i < traj.dim(); ++i)
            if (!std::isfinite(traj.at(k, i)))
                throw NonFiniteError(what + ": component x" + std::to_string(i + 1) +
                                         " is non-finite",
                                     k);
}

double resolve_eps(double eps_grid, const Grid& grid) {
    return eps_grid < 0.0 ? 10.0 * grid.h : eps_grid;
}

} // namespace

Trajectory picard_operator(const ProblemSpec& spec, const Trajectory& x) {
    if (x.dim() != spec.m)
        throw std::invalid_argument("trajectory dimension does not match the problem");
    const Grid& grid = x.grid();
    const int n_nodes = grid.n_nodes();

    RunningMaxTrack track = track_trajectory(spec, x);

    Trajectory out(grid, spec.m);
    std::vector<double> integrand(static_cast<std::size_t>(n_nodes));
    std::vector<double> mrow(static_cast<std::size_t>(spec.k()));
    for (int i = 0; i < spec.m; ++i) {
        for (int k = 0; k < n_nodes; ++k) {
            for (int j = 0; j < spec.k(); ++j) mrow[static_cast<std::size_t>(j)] = track.value(j, k);
            try {
                integrand[static_cast<std::size_t>(k)] = spec.f[static_cast<std::size_t>(i)].eval(grid.t(k), x.node(k), mrow);
            } catch (const EvalError& e) {
                throw EvalError("f[" + std::to_string(i) + "] at node " + std::to_string(k) + ": " +
                                e.what());
            }
        }
        std::vector<double> integral = cumint(integrand, grid.h);
        for (int k = 0; k < n_nodes; ++k) out.at(k, i) = spec.x0[static_cast<std::size_t>(i)] + integral[static_cast<std::size_t>(k)];
    }
    return out;
}

std::pair<Trajectory, PicardReport> solve_picard(const ProblemSpec& spec, const PicardConfig& cfg) {
    spec.validate();
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    Trajectory x = Trajectory::constant(cfg.grid, spec.x0);
    PicardReport report;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        Trajectory next = picard_operator(spec, x);
        check_finite(next, "picard iterate " + std::to_string(iter + 1));
        double delta = sup_dist(next, x);
        report.deltas.push_back(delta);
        x = std::move(next);
        if (delta <= cfg.tol) {
            report.converged = true;
            break;
        }
    }
    report.n_iters = static_cast<int>(report.deltas.size());

    if (cfg.contraction_factor && *cfg.contraction_factor < 1.0) {
        const double q = *cfg.contraction_factor;
        const double eps = resolve_eps(cfg.eps_grid, cfg.grid);
        double x0_scale = 0.0;
        for (double v : spec.x0) x0_scale = std::max(x0_scale, std::fabs(v));
        const double noise_floor = 1e-13 * (1.0 + x0_scale);
        for (std::size_t n = 0; n + 1 < report.deltas.size(); ++n) {
            if (report.deltas[n + 1] <= noise_floor) continue;
            if (report.deltas[n + 1] > q * report.deltas[n] * (1.0 + eps)) ++report.bound_violations;
        }
        if (!report.deltas.empty()) {
            report.bound_curve.resize(report.deltas.size());
            double envelope = report.deltas[0];
            for (std::size_t n = 0; n < report.deltas.size(); ++n) {
                report.bound_curve[n] = envelope;
                envelope *= q;
            }
        }
    }
    return {std::move(x), std::move(report)};
}

SampleSequence logistic_g_sequence(double x0, int n, const Grid& grid) {
    if (n < 0) throw std::invalid_argument("iterate count must be >= 0");
    SampleSequence seq;
    seq.grid = grid;
    const std::size_t n_nodes = static_cast<std::size_t>(grid.n_nodes());
    seq.iterates.push_back(std::vector<double>(n_nodes, 1.0));  // g_0 == 1
    std::vector<double> squares(n_nodes);
    for (int it = 0; it < n; ++it) {
        const std::vector<double>& g = seq.iterates.back();
        for (std::size_t k = 0; k < n_nodes; ++k) squares[k] = g[k] * g[k];
        std::vector<double> pm = prefix_max(squares);
        std::vector<double> int_g = cumint(g, grid.h);
        std::vector<double> int_pm = cumint(pm, grid.h);
        std::vector<double> next(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) next[k] = 1.0 + int_g[k] - x0 * int_pm[k];
        seq.iterates.push_back(std::move(next));
    }
    return seq;
}

BoundCheckReport logistic_bound_check(double x0, double alpha, const SampleSequence& g,
                                      double eps_grid) {
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    const double horizon = logistic_horizon(x0, alpha);
    if (!(g.grid.end() < horizon))
        throw std::invalid_argument("grid end " + std::to_string(g.grid.end()) +
                                    " must stay below the admissible horizon " +
                                    std::to_string(horizon));
    const double eps = resolve_eps(eps_grid, g.grid);
    const double rho = 1.0 + 2.0 * alpha * std::fabs(x0);
    const double scale = std::fabs(1.0 - x0) / rho;

    BoundCheckReport report;
    report.worst_magnitude_excess = -std::numeric_limits<double>::infinity();
    report.worst_difference_excess = -std::numeric_limits<double>::infinity();
    for (const auto& iterate : g.iterates)
        for (std::size_t k = 0; k < iterate.size(); ++k) {
            double excess = std::fabs(iterate[k]) - (alpha + eps);
            report.worst_magnitude_excess = std::max(report.worst_magnitude_excess, excess);
            if (excess > 0.0) ++report.magnitude_violations;
        }
    for (std::size_t n = 0; n + 1 < g.iterates.size(); ++n) {
        const auto& cur = g.iterates[n];
        const auto& nxt = g.iterates[n + 1];
        for (std::size_t k = 0; k < cur.size(); ++k) {
            double bound = scale * power_over_factorial(rho * g.grid.t(static_cast<int>(k)),
                                                        static_cast<int>(n) + 1) +
                           eps;
            double excess = std::fabs(nxt[k] - cur[k]) - bound;
            report.worst_difference_excess = std::max(report.worst_difference_excess, excess);
            if (excess > 0.0) ++report.difference_violations;
        }
        report.bound_curve.push_back(
            scale * power_over_factorial(rho * g.grid.end(), static_cast<int>(n) + 1) + eps);
    }
    return report;
}

CoupledSequences coupled_linear_sequence(double x0, double y0, int n, const Grid& grid) {
    if (x0 == y0)
        throw std::invalid_argument(
            "equal initial data x0 = y0: the monotone scheme's ordering argument degenerates "
            "and its convergence bounds vanish; initial data must satisfy 0 < y0 < x0");
    if (!(y0 > 0.0) || !(x0 > y0))
        throw std::invalid_argument("initial data must satisfy 0 < y0 < x0");
    if (n < 0) throw std::invalid_argument("iterate count must be >= 0");

    CoupledSequences seq;
    seq.grid = grid;
    const std::size_t n_nodes = static_cast<std::size_t>(grid.n_nodes());
    seq.x.push_back(std::vector<double>(n_nodes, x0));
    seq.y.push_back(std::vector<double>(n_nodes, y0));
    std::vector<double> integrand(n_nodes);
    for (int it = 0; it < n; ++it) {
        const auto& xc = seq.x.back();
        const auto& yc = seq.y.back();
        for (std::size_t k = 0; k < n_nodes; ++k) integrand[k] = xc[k] - y0;
        std::vector<double> int_x = cumint(integrand, grid.h);
        for (std::size_t k = 0; k < n_nodes; ++k) integrand[k] = yc[k] - xc[k];
        std::vector<double> int_y = cumint(integrand, grid.h);
        std::vector<double> xn(n_nodes), yn(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) {
            xn[k] = x0 + int_x[k];
            yn[k] = y0 + int_y[k];
        }
        seq.x.push_back(std::move(xn));
        seq.y.push_back(std::move(yn));
    }
    return seq;
}

namespace {

// Shared shape of the coupled-sequence checks: magnitude limit plus a
// per-pair difference bound evaluated at each node.
template <typename MagnitudeLimit, typename DifferenceBound>
BoundCheckReport check_sequences(const CoupledSequences& seq, MagnitudeLimit&& magnitude_limit,
                                 DifferenceBound&& difference_bound) {
    BoundCheckReport report;
    report.worst_magnitude_excess = -std::numeric_limits<double>::infinity();
    report.worst_difference_excess = -std::numeric_limits<double>::infinity();
    const double limit = magnitude_limit();
    if (std::isfinite(limit)) {
        for (const auto* series : {&seq.x, &seq.y})
            for (const auto& iterate : *series)
                for (double v : iterate) {
                    double excess = std::fabs(v) - limit;
                    report.worst_magnitude_excess = std::max(report.worst_magnitude_excess, excess);
                    if (excess > 0.0) ++report.magnitude_violations;
                }
    }
    const std::size_t pairs = seq.x.size() - 1;
    for (std::size_t n = 0; n < pairs; ++n) {
        double sup_bound = 0.0;
        for (int which = 0; which < 2; ++which) {
            const auto& cur = which == 0 ? seq.x[n] : seq.y[n];
            const auto& nxt = which == 0 ? seq.x[n + 1] : seq.y[n + 1];
            for (std::size_t k = 0; k < cur.size(); ++k) {
                double bound = difference_bound(which, static_cast<int>(n),
                                                seq.grid.t(static_cast<int>(k)));
                sup_bound = std::max(sup_bound, bound);
                double excess = std::fabs(nxt[k] - cur[k]) - bound;
                report.worst_difference_excess = std::max(report.worst_difference_excess, excess);
                if (excess > 0.0) ++report.difference_violations;
            }
        }
        report.bound_curve.push_back(sup_bound);
    }
    return report;
}

} // namespace

BoundCheckReport coupled_linear_bound_check(double x0, double y0, const CoupledSequences& seq,
                                            double eps_grid) {
    const double eps = resolve_eps(eps_grid, seq.grid);
    const double gap = std::fabs(x0 - y0);
    const double T = seq.grid.end();
    return check_sequences(
        seq, [] { return std::numeric_limits<double>::infinity(); },
        [&](int which, int n, double t) {
            if (which == 0) return gap * power_over_factorial(t, n + 1) + eps;
            // t^{n+1}/n! = (n+1) * t^{n+1}/(n+1)!
            return gap * T * (n + 1) * power_over_factorial(t, n + 1) + eps;
        });
}

CoupledSequences coupled_quadratic_sequence(double x0, double y0, double c0, int n,
                                            const Grid& grid) {
    if (!(x0 > 0.0) || !(y0 > 0.0)) throw std::invalid_argument("initial data must be positive");
    if (n < 0) throw std::invalid_argument("iterate count must be >= 0");
    QuadraticFeasibility feas = quadratic_feasible(x0, y0, grid.end(), c0);
    if (!feas.feasible) {
        std::string msg = "(T, c0) = (" + std::to_string(grid.end()) + ", " + std::to_string(c0) +
                          ") violates the uniform-bound inequalities; slacks:";
        for (double s : feas.slacks) msg += " " + std::to_string(s);
        throw std::invalid_argument(msg);
    }

    CoupledSequences seq;
    seq.grid = grid;
    const std::size_t n_nodes = static_cast<std::size_t>(grid.n_nodes());
    seq.x.push_back(std::vector<double>(n_nodes, x0));
    seq.y.push_back(std::vector<double>(n_nodes, y0));
    std::vector<double> squares(n_nodes);
    for (int it = 0; it < n; ++it) {
        const auto& xc = seq.x.back();
        const auto& yc = seq.y.back();
        for (std::size_t k = 0; k < n_nodes; ++k) squares[k] = yc[k] * yc[k];
        std::vector<double> int_max_y2 = cumint(prefix_max(squares), grid.h);
        for (std::size_t k = 0; k < n_nodes; ++k) squares[k] = xc[k] * xc[k];
        std::vector<double> int_max_x2 = cumint(prefix_max(squares), grid.h);
        std::vector<double> int_x = cumint(xc, grid.h);
        std::vector<double> int_y = cumint(yc, grid.h);
        std::vector<double> xn(n_nodes), yn(n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) {
            xn[k] = x0 + int_x[k] - int_max_y2[k];
            yn[k] = y0 + int_y[k] - int_max_x2[k];
        }
        seq.x.push_back(std::move(xn));
        seq.y.push_back(std::move(yn));
    }
    return seq;
}

BoundCheckReport coupled_quadratic_bound_check(double c0, const CoupledSequences& seq,
                                               double eps_grid) {
    if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
    const double eps = resolve_eps(eps_grid, seq.grid);
    const double T = seq.grid.end();
    return check_sequences(
        seq, [&] { return c0 + eps; },
        [&](int, int n, double t) {
            return (c0 / T) * std::pow(1.0 + 2.0 * c0, n) * power_over_factorial(t, n + 1) + eps;
        });
}

} // namespace maxode
