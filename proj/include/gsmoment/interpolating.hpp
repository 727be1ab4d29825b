#pragma once

// The 2-interpolating sequence N_{2q} = M_q, N_{2q+1} = (M_q M_{q+1})^{1/2}
// and verdict-level checks of its correspondence with M.

#include "gsmoment/conditions.hpp"
#include "gsmoment/weight_sequence.hpp"

namespace gsm {

struct InterpolatedPair {
    WeightSequence base;
    WeightSequence interpolated;  // horizon 2 * base.horizon()
};

InterpolatedPair two_interpolate(const WeightSequence& ws);

enum class Agreement { Agree, Disagree, Unknown };

std::string_view to_string(Agreement a);

struct AgreementItem {
    Agreement agreement = Agreement::Unknown;
    ConditionReport base;          // verdict on M
    ConditionReport interpolated;  // verdict on N
};

struct LemmaReport {
    AgreementItem dc;     // dc(M) vs dc(N)
    AgreementItem gamma;  // gamma2(M) vs gamma1(N)
    AgreementItem beta2;  // beta2(M) vs beta2(N)
};

LemmaReport verify_interpolation_lemma(const WeightSequence& ws, const ClassifierOptions& opt = {});

}  // namespace gsm
