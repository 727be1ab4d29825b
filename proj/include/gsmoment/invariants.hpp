#pragma once

// Self-check suite behind `gsmoment verify`: a fixed list of cross-checks
// between independent computations, each reporting pass/fail with a detail
// string. Deterministic (fixed seeds).

#include <string>
#include <vector>

namespace gsm {

struct InvariantResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> invariant_names();
std::vector<InvariantResult> run_invariants();
// Runs only the named checks; ParseError for unknown names.
std::vector<InvariantResult> run_invariants(const std::vector<std::string>& names);

}  // namespace gsm
