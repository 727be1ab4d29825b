#pragma once

// Finite-horizon classification of weight sequences against the regularity
// and non-quasianalyticity conditions. Every asymptotic statistic is computed
// at the horizons P/4, P/2 and P and the verdict is read off its trend.

#include <map>
#include <string>
#include <vector>

#include "gsmoment/weight_sequence.hpp"

namespace gsm {

enum class Condition { lc, dc, mg, gamma, gamma1, gamma2, gamma_r, beta2, beta2_0, beta2_1 };
enum class Verdict { Holds, Fails, Inconclusive };

std::string_view to_string(Verdict v);

struct ConditionId {
    Condition kind = Condition::lc;
    double r = 1.0;  // only read for gamma_r

    // "lc", "gamma2", "gamma_r(1.5)", ...
    std::string name() const;
    static ConditionId parse(const std::string& name);
    // The exponent r for the gamma family (gamma and gamma1 use r = 1).
    double root() const;
};

// The conditions reported by classify(): the fixed list plus gamma_r(3).
std::vector<ConditionId> standard_conditions();

struct ClassifierOptions {
    double tol_lc = 1e-12;
    double stable_change = 0.05;   // relative change below this is "stable"
    double stable_floor = 1e-6;    // absolute floor for the relative change
    double growth_factor = 2.0;    // growth above this at both steps is "divergent"
    int beta2_n_max = 16;
    int beta2_eps_k_max = 12;      // eps grid 2^-k, k = 0..k_max
    double tail_exponent_margin = 1e-3;  // power-law tails with exponent <= 1 + margin diverge
};

struct ConditionReport {
    ConditionId condition;
    Verdict verdict = Verdict::Inconclusive;
    std::map<std::string, double> witness;
    std::vector<int> horizons;
    std::vector<double> trace;  // the statistic at each horizon
    std::string note;
};

ConditionReport check_condition(const WeightSequence& ws, const ConditionId& id, const ClassifierOptions& opt = {});

// Checks every condition in `ids` and then enforces the known implications
// (lc & gamma2 => gamma1, mg => dc, gamma1 => gamma, beta2_0 => beta2,
// beta2 => beta2_1): a consequent that came out Fails while its premise
// Holds is downgraded to Inconclusive.
std::vector<ConditionReport> classify(const WeightSequence& ws, const std::vector<ConditionId>& ids,
                                      const ClassifierOptions& opt = {});

}  // namespace gsm
