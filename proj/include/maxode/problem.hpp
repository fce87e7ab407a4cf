#pragma once

#include <string>
#include <vector>

#include "maxode/expr.hpp"

namespace maxode {

/// An initial value problem for a differential system whose right-hand side
/// may reference running maxima of functionals of the past trajectory:
///
///   x'(t) = f(t, x(t), m(t)),   m_j(t) = max over [0,t] of h_j(x(s)),
///   x(0)  = x0,                 t in [0, T].
///
/// f has one expression per state component (over t, x1..xm, m1..mk); each
/// max functional h_j is an expression over state variables only.
struct ProblemSpec {
    int m = 0;                   // state dimension
    std::vector<Expr> f;         // size m
    std::vector<Expr> maxima;    // size k; no t, no m-variables
    std::vector<double> x0;      // size m
    double T = 0.0;              // horizon, > 0

    int k() const { return static_cast<int>(maxima.size()); }

    /// Throws SchemaError naming the offending field when any invariant fails.
    void validate() const;

    /// Canonical one-line rendering (expressions in canonical form, floats in
    /// shortest round-trip form). Identical specs render identically.
    std::string canonical() const;

    /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
    std::string digest() const;

    std::string to_json_text() const;

    /// Parse {"m":int,"f":[str...],"maxima":[str...],"x0":[num...],"T":num}.
    /// Schema and expression errors throw SchemaError with the field path.
    static ProblemSpec from_json_text(const std::string& text);

    /// Load from a file; I/O failures throw std::ios_base::failure.
    static ProblemSpec from_file(const std::string& path);
};

} // namespace maxode
