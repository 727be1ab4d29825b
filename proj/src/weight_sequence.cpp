#include "gsmoment/weight_sequence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gsmoment/error.hpp"
#include "gsmoment/expression.hpp"
#include "gsmoment/kernels.hpp"

namespace gsm {

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Gevrey: return "gevrey";
        case GeneratorKind::QGevrey: return "qgevrey";
        case GeneratorKind::Table: return "table";
        case GeneratorKind::Expr: return "expr";
        case GeneratorKind::Interpolated: return "interpolated";
    }
    return "unknown";
}

SequenceSpec SequenceSpec::gevrey(double alpha, int horizon) {
    SequenceSpec s;
    s.kind = GeneratorKind::Gevrey;
    s.alpha = alpha;
    s.horizon = horizon;
    return s;
}

SequenceSpec SequenceSpec::q_gevrey(double q, int horizon) {
    SequenceSpec s;
    s.kind = GeneratorKind::QGevrey;
    s.q = q;
    s.horizon = horizon;
    return s;
}

SequenceSpec SequenceSpec::table(std::vector<double> log_values) {
    SequenceSpec s;
    s.kind = GeneratorKind::Table;
    s.values = std::move(log_values);
    s.horizon = static_cast<int>(s.values.size()) - 1;
    return s;
}

SequenceSpec SequenceSpec::expr(std::string expression, int horizon) {
    SequenceSpec s;
    s.kind = GeneratorKind::Expr;
    s.expression = std::move(expression);
    s.horizon = horizon;
    return s;
}

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

WeightSequence::WeightSequence(const SequenceSpec& spec) : spec_(spec), kind_(spec.kind) {
    const int P = spec.kind == GeneratorKind::Table ? static_cast<int>(spec.values.size()) - 1 : spec.horizon;
    if (spec.kind != GeneratorKind::Table && P < kMinHorizon) {
        throw Error(ErrorCode::InvalidParameter, "horizon must be at least " + std::to_string(kMinHorizon));
    }
    switch (spec.kind) {
        case GeneratorKind::Gevrey: {
            if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
                throw Error(ErrorCode::InvalidParameter, "gevrey needs alpha > 0");
            }
            log_M_.resize(P + 1);
            log_m_.resize(P + 1);
            for (int p = 0; p <= P; ++p) {
                log_M_[p] = spec.alpha * std::lgamma(p + 1.0);
                log_m_[p] = p == 0 ? 0.0 : spec.alpha * std::log(static_cast<double>(p));
            }
            log_M_[0] = 0.0;
            description_ = "gevrey(alpha=" + format_number(spec.alpha) + ")";
            break;
        }
        case GeneratorKind::QGevrey: {
            if (!(spec.q > 1.0) || !std::isfinite(spec.q)) {
                throw Error(ErrorCode::InvalidParameter, "q_gevrey needs q > 1");
            }
            const double lq = std::log(spec.q);
            log_M_.resize(P + 1);
            log_m_.resize(P + 1);
            for (int p = 0; p <= P; ++p) {
                const double pd = p;
                log_M_[p] = pd * pd * lq;
                log_m_[p] = p == 0 ? 0.0 : (2.0 * pd - 1.0) * lq;
            }
            description_ = "qgevrey(q=" + format_number(spec.q) + ")";
            break;
        }
        case GeneratorKind::Table: {
            if (spec.values.empty() || spec.values[0] != 0.0) {
                throw Error(ErrorCode::InvalidParameter, "table must start with log M_0 = 0");
            }
            log_M_ = spec.values;
            closed_form_ = false;
            description_ = "table(" + std::to_string(spec.values.size()) + " values)";
            break;
        }
        case GeneratorKind::Expr: {
            const Expression e = Expression::parse(spec.expression);
            log_M_.resize(P + 1);
            for (int p = 0; p <= P; ++p) log_M_[p] = e(static_cast<double>(p));
            if (std::fabs(log_M_[0]) > 1e-12) {
                throw Error(ErrorCode::InvalidParameter, "expression must give log M_0 = 0");
            }
            log_M_[0] = 0.0;
            description_ = "expr(" + spec.expression + ")";
            break;
        }
        case GeneratorKind::Interpolated:
            throw Error(ErrorCode::InvalidParameter, "interpolated sequences come from two_interpolate");
    }
    finish();
    if (spec.kind == GeneratorKind::Table && horizon() < kMinHorizon) {
        throw Error(ErrorCode::InvalidParameter,
                    "table needs at least " + std::to_string(kMinHorizon + 1) + " values");
    }
}

WeightSequence WeightSequence::from_log_values(std::vector<double> log_M, std::vector<double> log_m,
                                               GeneratorKind kind, bool closed_form, std::string description) {
    WeightSequence ws;
    ws.kind_ = kind;
    ws.spec_.kind = kind;
    ws.spec_.horizon = static_cast<int>(log_M.size()) - 1;
    ws.closed_form_ = closed_form;
    ws.description_ = std::move(description);
    ws.log_M_ = std::move(log_M);
    if (!log_m.empty() && log_m.size() != ws.log_M_.size()) {
        throw Error(ErrorCode::InvalidParameter, "ratio array length differs from log M array");
    }
    ws.log_m_ = std::move(log_m);
    if (ws.log_M_.empty() || ws.log_M_[0] != 0.0) {
        throw Error(ErrorCode::InvalidParameter, "log M_0 must be 0");
    }
    ws.finish();
    if (ws.horizon() < kMinHorizon) {
        throw Error(ErrorCode::InvalidParameter, "horizon must be at least " + std::to_string(kMinHorizon));
    }
    return ws;
}

void WeightSequence::finish() {
    const int P = horizon();
    if (P < 1) throw Error(ErrorCode::NotAWeightSequence, "need at least log M_0 and log M_1");
    if (log_m_.size() != log_M_.size()) {
        log_m_.assign(P + 1, 0.0);
        for (int p = 1; p <= P; ++p) log_m_[p] = log_M_[p] - log_M_[p - 1];
    }
    for (int p = 0; p <= P; ++p) {
        if (!std::isfinite(log_M_[p]) || !std::isfinite(log_m_[p])) {
            throw Error(ErrorCode::NotAWeightSequence, "log M_" + std::to_string(p) + " is not finite");
        }
    }
    log_m_[0] = -std::numeric_limits<double>::infinity();
    if (!(log_m_[P] > log_m_[1] + std::log(10.0))) {
        throw Error(ErrorCode::NotAWeightSequence, "ratios do not diverge: log m_P <= log m_1 + ln 10");
    }
    min_second_diff_ = kernels::active().min_difference(std::span<const double>(log_m_).subspan(1));
}

double WeightSequence::log_M(int p) const {
    if (p < 0 || p > horizon()) {
        throw Error(ErrorCode::IndexOutOfHorizon, "p=" + std::to_string(p) + " outside [0," + std::to_string(horizon()) + "]");
    }
    return log_M_[p];
}

double WeightSequence::log_ratio(int p) const {
    if (p < 1 || p > horizon()) {
        throw Error(ErrorCode::IndexOutOfHorizon, "p=" + std::to_string(p) + " outside [1," + std::to_string(horizon()) + "]");
    }
    return log_m_[p];
}

double associated_function_log(const WeightSequence& ws, double log_t) {
    if (!ws.log_convex()) {
        throw Error(ErrorCode::RequiresLogConvexity, "counting formula needs (lc); " + ws.description() + " violates it");
    }
    if (std::isnan(log_t)) throw Error(ErrorCode::InvalidParameter, "t is NaN");
    if (log_t == -std::numeric_limits<double>::infinity()) return 0.0;
    const auto ratios = ws.log_ratios();
    if (log_t > ratios[ws.horizon()]) {
        throw Error(ErrorCode::HorizonExceeded, "t beyond the largest ratio m_P of " + ws.description());
    }
    return kernels::active().counting_sum(ratios.subspan(1), log_t);
}

double associated_function(const WeightSequence& ws, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidParameter, "associated function needs t >= 0");
    if (t == 0.0) return 0.0;
    return associated_function_log(ws, std::log(t));
}

}  // namespace gsm
