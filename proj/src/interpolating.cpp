#include "gsmoment/interpolating.hpp"

namespace gsm {

InterpolatedPair two_interpolate(const WeightSequence& ws) {
    const auto L = ws.log_M_values();
    const int P = ws.horizon();
    std::vector<double> n(2 * static_cast<std::size_t>(P) + 1);
    for (int q = 0; q <= P; ++q) n[2 * q] = L[q];
    for (int q = 0; q < P; ++q) n[2 * q + 1] = 0.5 * (L[q] + L[q + 1]);
    // n_{2q+1} = n_{2q+2} = m_{q+1}^{1/2}; halving is exact.
    const auto ell = ws.log_ratios();
    std::vector<double> r(n.size(), 0.0);
    for (int q = 0; q < P; ++q) r[2 * q + 1] = r[2 * q + 2] = 0.5 * ell[q + 1];
    return {ws, WeightSequence::from_log_values(std::move(n), std::move(r), GeneratorKind::Interpolated, ws.closed_form(),
                                                "interpolate(" + ws.description() + ")")};
}

std::string_view to_string(Agreement a) {
    switch (a) {
        case Agreement::Agree: return "Agree";
        case Agreement::Disagree: return "Disagree";
        case Agreement::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

AgreementItem compare(const WeightSequence& m, ConditionId on_m, const WeightSequence& n, ConditionId on_n,
                      const ClassifierOptions& opt) {
    AgreementItem item;
    item.base = check_condition(m, on_m, opt);
    item.interpolated = check_condition(n, on_n, opt);
    if (item.base.verdict == Verdict::Inconclusive || item.interpolated.verdict == Verdict::Inconclusive) {
        item.agreement = Agreement::Unknown;
    } else {
        item.agreement = item.base.verdict == item.interpolated.verdict ? Agreement::Agree : Agreement::Disagree;
    }
    return item;
}

}  // namespace

LemmaReport verify_interpolation_lemma(const WeightSequence& ws, const ClassifierOptions& opt) {
    const InterpolatedPair pair = two_interpolate(ws);
    const WeightSequence& n = pair.interpolated;
    LemmaReport r;
    r.dc = compare(ws, {Condition::dc}, n, {Condition::dc}, opt);
    r.gamma = compare(ws, {Condition::gamma2}, n, {Condition::gamma1}, opt);
    r.beta2 = compare(ws, {Condition::beta2}, n, {Condition::beta2}, opt);
    return r;
}

}  // namespace gsm
