#include "maxode/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxode {

namespace {

constexpr double kGradientStepRatio = 1e-4;

void check_interval(const Interval& iv, const char* what) {
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)))
        throw std::invalid_argument(std::string(what) + ": interval endpoints must be finite");
    if (iv.lo > iv.hi)
        throw std::invalid_argument(std::string(what) + ": interval lower bound exceeds upper bound");
}

// Flattened coordinate order: t, x1..xm, m1..mk.
std::vector<Interval> flatten(const Box& box) {
    std::vector<Interval> dims;
    dims.reserve(1 + box.state.size() + box.maxima.size());
    dims.push_back(box.time);
    dims.insert(dims.end(), box.state.begin(), box.state.end());
    dims.insert(dims.end(), box.maxima.begin(), box.maxima.end());
    return dims;
}

// Per-dimension sample counts: degenerate intervals get one point, the rest
// get `requested`, uniformly reduced until the lattice fits the cap.
std::vector<int> plan_counts(const std::vector<Interval>& dims, int requested) {
    if (requested < 2)
        throw std::invalid_argument("points_per_dim must be at least 2");
    int n = requested;
    for (;;) {
        long total = 1;
        bool fits = true;
        for (const auto& d : dims) {
            long c = d.width() == 0.0 ? 1 : n;
            if (total > kMaxLatticePoints / c) {
                fits = false;
                break;
            }
            total *= c;
        }
        if (fits || n == 2) break;
        --n;
    }
    std::vector<int> counts;
    counts.reserve(dims.size());
    for (const auto& d : dims) counts.push_back(d.width() == 0.0 ? 1 : n);
    return counts;
}

double coordinate(const Interval& iv, int j, int count) {
    if (count == 1) return iv.lo;
    return iv.lo + iv.width() * (static_cast<double>(j) / (count - 1));
}

// Visit every lattice point; `visit` receives the flattened coordinates.
template <typename Visit>
void for_each_lattice_point(const std::vector<Interval>& dims, const std::vector<int>& counts,
                            Visit&& visit) {
    const std::size_t d = dims.size();
    std::vector<int> idx(d, 0);
    std::vector<double> point(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) point[i] = coordinate(dims[i], 0, counts[i]);
    for (;;) {
        visit(point);
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < counts[i]) {
                point[i] = coordinate(dims[i], idx[i], counts[i]);
                break;
            }
            idx[i] = 0;
            point[i] = coordinate(dims[i], 0, counts[i]);
        }
        if (i == d) return;
    }
}

double eval_at(const Expr& e, std::span<const double> point, std::size_t m, std::size_t k) {
    return e.eval(point[0], point.subspan(1, m), point.subspan(1 + m, k));
}

} // namespace

void Box::validate() const {
    check_interval(time, "time");
    for (const auto& iv : state) check_interval(iv, "state");
    for (const auto& iv : maxima) check_interval(iv, "maxima");
}

double estimate_bound(std::span<const Expr> exprs, const Box& box, int points_per_dim) {
    box.validate();
    if (exprs.empty()) throw std::invalid_argument("estimate_bound: no expressions");
    const auto dims = flatten(box);
    const auto counts = plan_counts(dims, points_per_dim);
    const std::size_t m = box.state.size(), k = box.maxima.size();

    double best = 0.0;
    for_each_lattice_point(dims, counts, [&](std::span<const double> point) {
        double sum_sq = 0.0;
        for (const Expr& e : exprs) {
            double v = eval_at(e, point, m, k);
            sum_sq += v * v;
        }
        best = std::max(best, std::sqrt(sum_sq));
    });
    return best;
}

double estimate_lipschitz(std::span<const Expr> exprs, const Box& box, int points_per_dim) {
    box.validate();
    if (exprs.empty()) throw std::invalid_argument("estimate_lipschitz: no expressions");
    const auto dims = flatten(box);
    const auto counts = plan_counts(dims, points_per_dim);
    const std::size_t m = box.state.size(), k = box.maxima.size();
    const std::size_t n_grad = m + k;  // differentiate x and m coordinates only

    std::vector<double> steps(n_grad, 0.0);
    for (std::size_t i = 0; i < n_grad; ++i) steps[i] = dims[1 + i].width() * kGradientStepRatio;

    double best = 0.0;
    std::vector<double> shifted;
    for_each_lattice_point(dims, counts, [&](std::span<const double> point) {
        shifted.assign(point.begin(), point.end());
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < n_grad; ++i) {
            if (steps[i] == 0.0) continue;  // frozen coordinate
            for (const Expr& e : exprs) {
                shifted[1 + i] = point[1 + i] + steps[i];
                double hi = eval_at(e, shifted, m, k);
                shifted[1 + i] = point[1 + i] - steps[i];
                double lo = eval_at(e, shifted, m, k);
                shifted[1 + i] = point[1 + i];
                double partial = (hi - lo) / (2.0 * steps[i]);
                sum_sq += partial * partial;
            }
        }
        best = std::max(best, std::sqrt(sum_sq));
    });
    return best;
}

Interval sampled_range(const Expr& expr, const Box& box, int points_per_dim) {
    box.validate();
    const auto dims = flatten(box);
    const auto counts = plan_counts(dims, points_per_dim);
    const std::size_t m = box.state.size(), k = box.maxima.size();

    Interval range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for_each_lattice_point(dims, counts, [&](std::span<const double> point) {
        double v = eval_at(expr, point, m, k);
        range.lo = std::min(range.lo, v);
        range.hi = std::max(range.hi, v);
    });
    return range;
}

} // namespace maxode
