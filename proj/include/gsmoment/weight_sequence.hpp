#pragma once

// Weight sequences (M_p) held in natural-log scale: log M_p for p = 0..P and
// the ratios log m_p = log M_p - log M_{p-1} for p = 1..P.

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gsm {

enum class GeneratorKind { Gevrey, QGevrey, Table, Expr, Interpolated };

std::string_view to_string(GeneratorKind kind);

constexpr int kDefaultHorizon = 4096;
constexpr int kMinHorizon = 64;

struct SequenceSpec {
    GeneratorKind kind = GeneratorKind::Gevrey;
    double alpha = 1.0;            // gevrey: M_p = p!^alpha
    double q = 2.0;                // q_gevrey: M_p = q^(p^2)
    std::vector<double> values;    // table: log M_0, log M_1, ...
    std::string expression;        // expr: log M_p as a function of p
    int horizon = kDefaultHorizon; // ignored for tables (their length fixes it)

    static SequenceSpec gevrey(double alpha, int horizon = kDefaultHorizon);
    static SequenceSpec q_gevrey(double q, int horizon = kDefaultHorizon);
    static SequenceSpec table(std::vector<double> log_values);
    static SequenceSpec expr(std::string expression, int horizon = kDefaultHorizon);
};

class WeightSequence {
public:
    // make_sequence: validates parameters and the divergence witness.
    explicit WeightSequence(const SequenceSpec& spec);

    // Sequence built from explicit log values with the given provenance
    // (used for the 2-interpolating construction). `log_m` may be empty, in
    // which case the ratios are differenced from `log_M`; index 0 is ignored.
    static WeightSequence from_log_values(std::vector<double> log_M, std::vector<double> log_m,
                                          GeneratorKind kind, bool closed_form, std::string description);

    int horizon() const noexcept { return static_cast<int>(log_M_.size()) - 1; }
    GeneratorKind kind() const noexcept { return kind_; }
    const SequenceSpec& spec() const noexcept { return spec_; }
    // True when the generator is a closed-form rule valid past the horizon.
    bool closed_form() const noexcept { return closed_form_; }
    const std::string& description() const noexcept { return description_; }

    // log M_p for 0 <= p <= horizon; IndexOutOfHorizon otherwise.
    double log_M(int p) const;
    // log m_p for 1 <= p <= horizon; IndexOutOfHorizon otherwise.
    double log_ratio(int p) const;

    std::span<const double> log_M_values() const noexcept { return log_M_; }
    // Index 0 holds -inf so that log_ratios()[p] = log m_p.
    std::span<const double> log_ratios() const noexcept { return log_m_; }

    // min_p of the second differences of log M_p, taken as log m_{p+1} - log m_p.
    double min_second_difference() const noexcept { return min_second_diff_; }
    bool log_convex(double tol = 1e-12) const noexcept { return min_second_diff_ >= -tol; }

private:
    WeightSequence() = default;
    void finish();

    SequenceSpec spec_;
    GeneratorKind kind_ = GeneratorKind::Gevrey;
    bool closed_form_ = true;
    std::string description_;
    std::vector<double> log_M_;
    std::vector<double> log_m_;
    double min_second_diff_ = 0.0;
};

// Associated function M(t) = sup_p log(t^p / M_p) by the counting formula
// sum_{m_p <= t} (log t - log m_p). Requires (lc) to hold (otherwise
// RequiresLogConvexity) and t <= m_P (otherwise HorizonExceeded).
double associated_function(const WeightSequence& ws, double t);
// Same with the argument given as log t, for t beyond double range.
double associated_function_log(const WeightSequence& ws, double log_t);

}  // namespace gsm
