#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maxode {

struct VerifyOptions {
    std::optional<double> eps_grid;    // override the default 10*h bound slack
    std::string filter;                // substring filter on criterion id/label
    std::uint64_t seed = 0x6d61786f;   // corpus seed for the randomized criteria
};

struct CriterionResult {
    std::string id;
    std::string label;
    bool pass = false;
    std::string detail;
};

/// Run the bundled verification suite (bound checks, oracle comparisons,
/// residuals). Criteria run and report in a fixed order.
std::vector<CriterionResult> run_verification(const VerifyOptions& opts = {});

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace maxode
