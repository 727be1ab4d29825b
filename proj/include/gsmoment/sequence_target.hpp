#pragma once

// Finite complex sequences (a_0, ..., a_P) with a declared scale h, measured in
// the norm sup_p h^p |a_p| / M_p.

#include <complex>
#include <vector>

#include "gsmoment/weight_sequence.hpp"

namespace gsm {

struct SequenceTarget {
    std::vector<std::complex<double>> entries;
    double h = 1.0;

    int order() const noexcept { return static_cast<int>(entries.size()) - 1; }
    bool is_zero() const;

    static SequenceTarget zeros(int P, double h = 1.0);
    static SequenceTarget unit(int P, int index, double h = 1.0);
};

// log sup_p h^p |a_p| / M_p; -inf for the zero sequence. IndexOutOfHorizon if
// P exceeds the horizon of ws.
double log_lambda_norm(const SequenceTarget& a, const WeightSequence& ws);
double lambda_norm(const SequenceTarget& a, const WeightSequence& ws);

// Entries a_p = M_p h^-p r_p u_p with u_p uniform on the unit circle and r_p
// uniform in [0, radius], seeded deterministically.
SequenceTarget random_ball_target(const WeightSequence& ws, int P, double h, unsigned long seed,
                                  double radius = 1.0);

}  // namespace gsm
