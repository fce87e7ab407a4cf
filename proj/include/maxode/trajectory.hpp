#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "maxode/problem.hpp"

namespace maxode {

/// Uniform grid t_k = k*h, k = 0..n_steps.
struct Grid {
    int n_steps = 0;
    double h = 0.0;

    int n_nodes() const { return n_steps + 1; }
    double t(int k) const { return h * k; }
    double end() const { return h * n_steps; }

    /// Grid covering [0, t_end] with n_steps uniform steps.
    static Grid over(double t_end, int n_steps);

    bool operator==(const Grid&) const = default;
};

/// Per-node state vectors on a uniform grid: the discrete stand-in for a
/// continuous trajectory on [0, T].
class Trajectory {
public:
    Trajectory(Grid grid, int dim);  // zero-filled
    static Trajectory constant(Grid grid, std::span<const double> value);

    const Grid& grid() const { return grid_; }
    int dim() const { return dim_; }

    std::span<double> node(int k) { return {data_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)}; }
    std::span<const double> node(int k) const { return {data_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)}; }

    double at(int k, int i) const { return data_[static_cast<std::size_t>(k) * dim_ + i]; }
    double& at(int k, int i) { return data_[static_cast<std::size_t>(k) * dim_ + i]; }

    /// Samples of one state component across all nodes.
    std::vector<double> component(int i) const;

private:
    Grid grid_;
    int dim_;
    std::vector<double> data_;
};

/// out[k] = max(samples[0..k]).
std::vector<double> prefix_max(std::span<const double> samples);

/// Cumulative trapezoidal integral: out[0] = 0, out[k] ~ integral up to t_k.
std::vector<double> cumint(std::span<const double> samples, double h);

/// Max over nodes of the Euclidean norm of the difference. Grids must match.
double sup_dist(const Trajectory& a, const Trajectory& b);

/// Piecewise-linear interpolation; exact at nodes. t must lie in [0, end].
std::vector<double> interpolate(const Trajectory& traj, double t);

/// Incremental running maxima r_j[k] = max over appended states 0..k of
/// h_j(state). Single writer; rows are nondecreasing by construction.
class RunningMaxTrack {
public:
    explicit RunningMaxTrack(std::vector<Expr> functionals);

    void append(std::span<const double> state);

    int size() const { return n_appended_; }
    int n_functionals() const { return static_cast<int>(functionals_.size()); }

    /// Current running-max vector (r_1[k], ..., r_K[k]) for the latest k.
    std::span<const double> latest() const;

    /// r_j at appended index k.
    double value(int j, int k) const { return values_[static_cast<std::size_t>(k) * functionals_.size() + j]; }

    /// Full series of r_j, j 0-based.
    std::vector<double> series(int j) const;

private:
    std::vector<Expr> functionals_;
    std::vector<double> values_;  // row per appended state
    int n_appended_ = 0;
};

/// Running-max columns m1..mk of a trajectory under the spec's functionals.
RunningMaxTrack track_trajectory(const ProblemSpec& spec, const Trajectory& traj);

/// CSV with header "t,x1,...,xm,m1,...,mk", one row per node, floats at 17
/// significant digits.
void write_trajectory_csv(std::ostream& out, const ProblemSpec& spec, const Trajectory& traj);

} // namespace maxode
