#pragma once

#include <span>
#include <vector>

#include "maxode/expr.hpp"

namespace maxode {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Sampling domain for bound and Lipschitz estimation: a time range plus one
/// closed interval per state coordinate and per max-functional coordinate.
struct Box {
    Interval time;
    std::vector<Interval> state;
    std::vector<Interval> maxima;

    void validate() const;  // lo <= hi everywhere, finite endpoints
};

/// Hard cap on lattice size, independent of the requested resolution.
inline constexpr long kMaxLatticePoints = 1'000'000;

/// Max over a deterministic lattice of the Euclidean norm of the vector of
/// expression values. A lower estimate of the true sup — the lattice contains
/// the box corners but cannot certify interior extrema.
double estimate_bound(std::span<const Expr> exprs, const Box& box, int points_per_dim = 33);

/// Max over the lattice of the Frobenius norm of the central finite-difference
/// Jacobian with respect to the state and max coordinates (time is a
/// parameter, not differentiated). Step is 1e-4 of the interval width per
/// coordinate; stencil points may fall slightly outside the box. A sampled
/// estimate, not a certified bound.
double estimate_lipschitz(std::span<const Expr> exprs, const Box& box, int points_per_dim = 33);

/// Sampled [min, max] of a single expression over the lattice; used to build
/// the max-value coordinate ranges from the images of the max functionals.
Interval sampled_range(const Expr& expr, const Box& box, int points_per_dim = 33);

} // namespace maxode
