#pragma once

// Reduction operators on test functions, function handles and sequences.
//
// Operations that stay inside the atom family (div_x, mul_x, even/odd parts)
// return TestFunctions. Substitutions and folds leave the family and return
// FunctionHandles: immutable objects that evaluate values and the first
// kHandleMaxDerivative derivatives, and whose moments come from quadrature.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsmoment/multiprecision.hpp"
#include "gsmoment/quadrature.hpp"
#include "gsmoment/sequence_target.hpp"
#include "gsmoment/test_function.hpp"

namespace gsm {

// ---- atom-level operators -------------------------------------------------

// x^k -> x^(k-1) on flat atoms. UnsupportedAtom for gaussian atoms,
// DepthExceeded when an index would drop below -8.
TestFunction div_x(const TestFunction& f);
// x^k -> x^(k+1).
TestFunction mul_x(const TestFunction& f);
// (f + f(-.))/2 and (f - f(-.))/2; flat atoms pair with their reflections.
std::pair<TestFunction, TestFunction> even_odd_parts(const TestFunction& f);
TestFunction reflect(const TestFunction& f);

// ---- function handles -----------------------------------------------------

enum class Support { HalfLine, Line };

constexpr int kHandleMaxDerivative = 8;

class FunctionHandle {
public:
    virtual ~FunctionHandle() = default;

    virtual Support support() const = 0;
    // out[j] = f^(j)(x) for j = 0..m, m <= kHandleMaxDerivative.
    virtual void derivatives(double x, int m, std::span<std::complex<double>> out) const = 0;
    virtual mp::Complex value_mp(const mp::Float& x) const = 0;
    // u-range (x = e^u) outside which x^(p+1) |f(x)| and x^(p+1) |f(-x)| are
    // negligible at `bits` for all p in [p_min, p_max].
    virtual quadrature::ExpMapRange range(double p_min, double p_max, long bits) const = 0;
    // Precision of the underlying coefficients in bits.
    virtual long precision() const = 0;
    virtual std::string describe() const = 0;

    std::complex<double> value(double x) const;
    std::complex<double> derivative(int m, double x) const;
};

using Handle = std::shared_ptr<const FunctionHandle>;

Handle make_handle(const TestFunction& f);

// phi(sqrt x) on x > 0.
Handle sqrt_sub(const Handle& f);
Handle sqrt_sub(const TestFunction& f);
// T_e(phi)(x) = 2x phi(x^2) on x > 0.
Handle square_sub_weighted(const Handle& f);
Handle square_sub_weighted(const TestFunction& f);
// T_o(phi)(x) = 2 phi(x^2) on x > 0.
Handle square_sub_odd(const Handle& f);
Handle square_sub_odd(const TestFunction& f);
// phi(sqrt x) / (2 sqrt x) on x > 0; moments mu_p = mu_2p(phi).
Handle inverse_square_sub(const Handle& f);
// phi(x) + phi(-x) on x > 0.
Handle fold(const Handle& f);
Handle fold(const TestFunction& f);
// (f(x) + sign f(-x)) / 2 on the whole line.
Handle symmetrize(const Handle& f, int sign);
// c x^beta f(x) on x > 0; f must be supported on the half-line.
Handle power_multiply(const Handle& f, std::complex<double> c, double beta);
Handle mul_x(const Handle& f);
Handle div_x(const Handle& f);
Handle sum(std::vector<Handle> terms);

// int_{-inf}^{inf} x^p f(x) dx for p = 0..p_max, by the exp-map trapezoid in
// double precision and at `bits` (0 = working precision) respectively.
std::vector<std::complex<double>> handle_moments(const FunctionHandle& f, int p_max);
std::vector<mp::Complex> handle_moments_mp(const FunctionHandle& f, int p_max, long bits = 0);

// ---- sequence maps ----------------------------------------------------------

SequenceTarget seq_te(const SequenceTarget& a);           // a_2p
SequenceTarget seq_to(const SequenceTarget& a);           // a_2p+1
SequenceTarget seq_interleave(const SequenceTarget& a);   // a_q at 2q, 0 at odd places
SequenceTarget sign_twist(const SequenceTarget& a);       // (-i)^p a_p
SequenceTarget sign_untwist(const SequenceTarget& a);     // i^p a_p

// ---- multiplier shift -------------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

enum class BuiltinMultiplier { Exp, One };

// c_k = (1/G)^(k)(0) for k = 0..P.
std::vector<Rational> builtin_inverse_taylor(BuiltinMultiplier g, int P);
// G^(k)(0) for k = 0..P from the Taylor data of 1/G, by exponential power
// series inversion. SingularMultiplier when c_0 = 0. Missing c_k count as 0.
std::vector<Rational> invert_taylor(std::span<const Rational> c, int P);
// b_p = sum_{n<=p} C(p,n) a_n c_{p-n}.
std::vector<Rational> multiplier_shift(std::span<const Rational> a, std::span<const Rational> c);
// a_p = sum_{n<=p} C(p,n) b_n g_{p-n}, the inverse of multiplier_shift when g = invert_taylor(c).
std::vector<Rational> multiplier_unshift(std::span<const Rational> b, std::span<const Rational> g);

// Complex targets: each component is converted to an exact rational, run
// through the rational recursion and rounded back.
SequenceTarget multiplier_shift(const SequenceTarget& a, std::span<const Rational> c);
SequenceTarget multiplier_unshift(const SequenceTarget& b, std::span<const Rational> g);

// ---- operator pipelines -----------------------------------------------------

enum class OperatorTag {
    div_x,
    mul_x,
    sqrt_sub,
    square_sub,
    even_part,
    odd_part,
    fold,
    te,
    to,
    interleave_even,
    sign_twist,
};

std::string_view to_string(OperatorTag tag);
OperatorTag parse_operator_tag(const std::string& name);
std::vector<OperatorTag> parse_pipeline(const std::string& comma_list);

using PipelineValue = std::variant<TestFunction, Handle, SequenceTarget>;

struct PipelineOptions {
    int p_max = 10;  // moments taken when a sequence tag meets a function
    double h = 1.0;
};

// Moment sequence (mu_0..mu_p_max) of a function value; sequences pass through.
SequenceTarget moment_sequence(const PipelineValue& v, int p_max, double h = 1.0);

PipelineValue apply(const PipelineValue& v, OperatorTag tag, const PipelineOptions& opt = {});
PipelineValue apply_pipeline(PipelineValue v, std::span<const OperatorTag> tags, const PipelineOptions& opt = {});

}  // namespace gsm
