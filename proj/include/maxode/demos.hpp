#pragma once

#include <string>
#include <vector>

#include "maxode/problem.hpp"

namespace maxode {

/// A bundled demo problem plus the interval on which cross-solver agreement
/// is checked and whether that interval carries an existence guarantee.
struct DemoProblem {
    std::string name;            // problem file stem under problems/
    ProblemSpec spec;
    double compare_horizon;      // interval [0, compare_horizon] for cross checks
    bool guaranteed;             // existence guarantee covers the interval
    bool contraction_horizon;    // true: recompute compare_horizon from the
                                 // contraction estimate (alpha = 1) at run time
    std::string note;
};

const std::vector<DemoProblem>& demo_problems();

} // namespace maxode
