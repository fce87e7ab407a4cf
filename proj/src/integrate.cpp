#include "maxode/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "maxode/errors.hpp"

namespace maxode {

namespace {

void eval_rhs(const ProblemSpec& spec, double t, std::span<const double> state,
              std::span<const double> mvals, std::span<double> out, int node) {
    for (int i = 0; i < spec.m; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                spec.f[static_cast<std::size_t>(i)].eval(t, state, mvals);
        } catch (const EvalError& e) {
            throw EvalError("f[" + std::to_string(i) + "] at node " + std::to_string(node) + ": " +
                            e.what());
        }
    }
}

void require_finite(std::span<const double> state, int node, const char* method) {
    for (double v : state)
        if (!std::isfinite(v))
            throw NonFiniteError(std::string(method) + " produced a non-finite state", node);
}

} // namespace

Trajectory euler_max(const ProblemSpec& spec, const Grid& grid) {
    spec.validate();
    Trajectory traj(grid, spec.m);
    std::copy(spec.x0.begin(), spec.x0.end(), traj.node(0).begin());

    RunningMaxTrack track(spec.maxima);
    track.append(traj.node(0));

    std::vector<double> slope(static_cast<std::size_t>(spec.m));
    for (int k = 0; k < grid.n_steps; ++k) {
        eval_rhs(spec, grid.t(k), traj.node(k), track.latest(), slope, k);
        for (int i = 0; i < spec.m; ++i)
            traj.at(k + 1, i) = traj.at(k, i) + grid.h * slope[static_cast<std::size_t>(i)];
        require_finite(traj.node(k + 1), k + 1, "euler_max");
        track.append(traj.node(k + 1));
    }
    return traj;
}

Trajectory heun_max(const ProblemSpec& spec, const Grid& grid) {
    spec.validate();
    Trajectory traj(grid, spec.m);
    std::copy(spec.x0.begin(), spec.x0.end(), traj.node(0).begin());

    RunningMaxTrack track(spec.maxima);
    track.append(traj.node(0));

    const std::size_t m = static_cast<std::size_t>(spec.m);
    const std::size_t kk = static_cast<std::size_t>(spec.k());
    std::vector<double> slope1(m), slope2(m), predicted(m), stage_max(kk);
    for (int k = 0; k < grid.n_steps; ++k) {
        eval_rhs(spec, grid.t(k), traj.node(k), track.latest(), slope1, k);
        for (std::size_t i = 0; i < m; ++i) predicted[i] = traj.at(k, static_cast<int>(i)) + grid.h * slope1[i];
        require_finite(predicted, k + 1, "heun_max (predictor)");

        // Stage-consistent max input: the track so far plus the predicted state.
        std::span<const double> latest = track.latest();
        for (std::size_t j = 0; j < kk; ++j) {
            double hval = spec.maxima[j].eval(0.0, predicted, {});
            stage_max[j] = std::max(latest[j], hval);
        }
        eval_rhs(spec, grid.t(k + 1), predicted, stage_max, slope2, k + 1);

        for (std::size_t i = 0; i < m; ++i)
            traj.at(k + 1, static_cast<int>(i)) =
                traj.at(k, static_cast<int>(i)) + 0.5 * grid.h * (slope1[i] + slope2[i]);
        require_finite(traj.node(k + 1), k + 1, "heun_max");
        track.append(traj.node(k + 1));
    }
    return traj;
}

void ConstantCoeffSystem::validate() const {
    if (a < 0.0 || b < 0.0 || c < 0.0 || d < 0.0)
        throw std::invalid_argument("coefficients a, b, c, d must be nonnegative");
    if (!(x0 > 0.0) || !(y0 > 0.0))
        throw std::invalid_argument("initial data x0, y0 must be positive");
}

void ConstantCoeffSystem::validate_explicit_region() const {
    validate();
    if (!(A() < 0.0 && B() < 0.0 && a > 0.0 && c > 0.0))
        throw std::invalid_argument(
            "no explicit solution outside A = a*x0 - b*y0 < 0, B = c*y0 - d*x0 < 0, a > 0, c > 0 "
            "(got A = " + std::to_string(A()) + ", B = " + std::to_string(B()) +
            "); only the decreasing case pins the running maxima at the initial data");
}

ProblemSpec ConstantCoeffSystem::to_problem(double T) const {
    validate();
    auto coef = [](double v) { return Expr::constant(v); };
    ProblemSpec spec;
    spec.m = 2;
    spec.f = {Expr::binary(BinaryOp::Sub,
                           Expr::binary(BinaryOp::Mul, coef(a), Expr::state(1)),
                           Expr::binary(BinaryOp::Mul, coef(b), Expr::max_value(2))),
              Expr::binary(BinaryOp::Sub,
                           Expr::binary(BinaryOp::Mul, coef(c), Expr::state(2)),
                           Expr::binary(BinaryOp::Mul, coef(d), Expr::max_value(1)))};
    spec.maxima = {Expr::state(1), Expr::state(2)};
    spec.x0 = {x0, y0};
    spec.T = T;
    spec.validate();
    return spec;
}

Trajectory closed_form_constant_coeff(const ConstantCoeffSystem& sys, const Grid& grid) {
    sys.validate_explicit_region();
    Trajectory traj(grid, 2);
    const double Ax = sys.A(), By = sys.B();
    for (int k = 0; k < grid.n_nodes(); ++k) {
        const double t = grid.t(k);
        traj.at(k, 0) = sys.x0 + (Ax / sys.a) * (std::exp(sys.a * t) - 1.0);
        traj.at(k, 1) = sys.y0 + (By / sys.c) * (std::exp(sys.c * t) - 1.0);
    }
    return traj;
}

ZeroCrossings zero_crossings(const ConstantCoeffSystem& sys) {
    sys.validate_explicit_region();
    ZeroCrossings out;
    const double arg_x = sys.b * sys.y0 / std::fabs(sys.A());
    const double arg_y = sys.d * sys.x0 / std::fabs(sys.B());
    if (arg_x >= 1.0) out.t_x = std::log(arg_x) / sys.a;
    if (arg_y >= 1.0) out.t_y = std::log(arg_y) / sys.c;
    return out;
}

ResidualReport residual(const ProblemSpec& spec, const Trajectory& traj) {
    spec.validate();
    if (traj.dim() != spec.m)
        throw std::invalid_argument("trajectory dimension does not match the problem");
    if (traj.grid().end() > spec.T * (1.0 + 1e-9))
        throw std::invalid_argument("trajectory grid extends past the problem horizon");

    const Grid& grid = traj.grid();
    const int n_nodes = grid.n_nodes();
    RunningMaxTrack track = track_trajectory(spec, traj);

    ResidualReport report;
    report.per_node.assign(static_cast<std::size_t>(n_nodes), 0.0);

    std::vector<double> integrand(static_cast<std::size_t>(n_nodes));
    std::vector<double> mrow(static_cast<std::size_t>(spec.k()));
    for (int i = 0; i < spec.m; ++i) {
        for (int k = 0; k < n_nodes; ++k) {
            for (int j = 0; j < spec.k(); ++j) mrow[static_cast<std::size_t>(j)] = track.value(j, k);
            integrand[static_cast<std::size_t>(k)] =
                spec.f[static_cast<std::size_t>(i)].eval(grid.t(k), traj.node(k), mrow);
        }
        std::vector<double> integral = cumint(integrand, grid.h);
        for (int k = 0; k < n_nodes; ++k) {
            double defect = traj.at(k, i) - spec.x0[static_cast<std::size_t>(i)] -
                            integral[static_cast<std::size_t>(k)];
            report.per_node[static_cast<std::size_t>(k)] += defect * defect;
        }
    }
    for (int k = 0; k < n_nodes; ++k) {
        double norm = std::sqrt(report.per_node[static_cast<std::size_t>(k)]);
        report.per_node[static_cast<std::size_t>(k)] = norm;
        if (norm > report.sup_residual) {
            report.sup_residual = norm;
            report.argmax_node = k;
        }
    }
    return report;
}

} // namespace maxode
