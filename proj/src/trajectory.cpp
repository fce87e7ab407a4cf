#include "maxode/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace maxode {

Grid Grid::over(double t_end, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("grid needs at least one step");
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw std::invalid_argument("grid end must be positive");
    return Grid{n_steps, t_end / n_steps};
}

Trajectory::Trajectory(Grid grid, int dim)
    : grid_(grid), dim_(dim), data_(static_cast<std::size_t>(grid.n_nodes()) * dim, 0.0) {
    if (dim < 1) throw std::invalid_argument("trajectory dimension must be >= 1");
    if (grid.n_steps < 1 || !(grid.h > 0.0)) throw std::invalid_argument("invalid grid");
}

Trajectory Trajectory::constant(Grid grid, std::span<const double> value) {
    Trajectory traj(grid, static_cast<int>(value.size()));
    for (int k = 0; k < grid.n_nodes(); ++k)
        std::copy(value.begin(), value.end(), traj.node(k).begin());
    return traj;
}

std::vector<double> Trajectory::component(int i) const {
    std::vector<double> out(static_cast<std::size_t>(grid_.n_nodes()));
    for (int k = 0; k < grid_.n_nodes(); ++k) out[static_cast<std::size_t>(k)] = at(k, i);
    return out;
}

std::vector<double> prefix_max(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("prefix_max of empty array");
    std::vector<double> out(samples.size());
    double running = samples[0];
    out[0] = running;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        running = std::max(running, samples[k]);
        out[k] = running;
    }
    return out;
}

std::vector<double> cumint(std::span<const double> samples, double h) {
    if (samples.empty()) throw std::invalid_argument("cumint of empty array");
    if (!(h > 0.0)) throw std::invalid_argument("cumint step must be positive");
    std::vector<double> out(samples.size());
    out[0] = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k)
        out[k] = out[k - 1] + 0.5 * h * (samples[k - 1] + samples[k]);
    return out;
}

double sup_dist(const Trajectory& a, const Trajectory& b) {
    if (!(a.grid() == b.grid()) || a.dim() != b.dim())
        throw std::invalid_argument("sup_dist requires trajectories on the same grid and dimension");
    double best = 0.0;
    for (int k = 0; k < a.grid().n_nodes(); ++k) {
        double sum_sq = 0.0;
        for (int i = 0; i < a.dim(); ++i) {
            double d = a.at(k, i) - b.at(k, i);
            sum_sq += d * d;
        }
        best = std::max(best, std::sqrt(sum_sq));
    }
    return best;
}

std::vector<double> interpolate(const Trajectory& traj, double t) {
    const Grid& g = traj.grid();
    const double slack = 1e-12 * std::max(1.0, g.end());
    if (t < -slack || t > g.end() + slack)
        throw std::invalid_argument("interpolation time outside [0, " + std::to_string(g.end()) + "]");
    t = std::clamp(t, 0.0, g.end());
    int k = std::min(static_cast<int>(t / g.h), g.n_steps - 1);
    double w = (t - g.t(k)) / g.h;
    std::vector<double> out(static_cast<std::size_t>(traj.dim()));
    for (int i = 0; i < traj.dim(); ++i)
        out[static_cast<std::size_t>(i)] = (1.0 - w) * traj.at(k, i) + w * traj.at(k + 1, i);
    return out;
}

RunningMaxTrack::RunningMaxTrack(std::vector<Expr> functionals)
    : functionals_(std::move(functionals)) {}

void RunningMaxTrack::append(std::span<const double> state) {
    const std::size_t k = functionals_.size();
    const std::size_t row = static_cast<std::size_t>(n_appended_) * k;
    values_.resize(row + k);
    for (std::size_t j = 0; j < k; ++j) {
        double v = functionals_[j].eval(0.0, state, {});
        if (n_appended_ > 0) v = std::max(v, values_[row - k + j]);
        values_[row + j] = v;
    }
    ++n_appended_;
}

std::span<const double> RunningMaxTrack::latest() const {
    const std::size_t k = functionals_.size();
    return {values_.data() + (static_cast<std::size_t>(n_appended_) - 1) * k, k};
}

std::vector<double> RunningMaxTrack::series(int j) const {
    std::vector<double> out(static_cast<std::size_t>(n_appended_));
    for (int k = 0; k < n_appended_; ++k) out[static_cast<std::size_t>(k)] = value(j, k);
    return out;
}

RunningMaxTrack track_trajectory(const ProblemSpec& spec, const Trajectory& traj) {
    RunningMaxTrack track(spec.maxima);
    for (int k = 0; k < traj.grid().n_nodes(); ++k) track.append(traj.node(k));
    return track;
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const ProblemSpec& spec, const Trajectory& traj) {
    out << 't';
    for (int i = 1; i <= spec.m; ++i) out << ",x" << i;
    for (int j = 1; j <= spec.k(); ++j) out << ",m" << j;
    out << '\n';

    RunningMaxTrack track = track_trajectory(spec, traj);
    for (int k = 0; k < traj.grid().n_nodes(); ++k) {
        put_double(out, traj.grid().t(k));
        for (int i = 0; i < spec.m; ++i) {
            out << ',';
            put_double(out, traj.at(k, i));
        }
        for (int j = 0; j < spec.k(); ++j) {
            out << ',';
            put_double(out, track.value(j, k));
        }
        out << '\n';
    }
}

} // namespace maxode
