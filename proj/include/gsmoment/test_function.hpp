#pragma once

// Finite linear combinations of closed-form atoms:
//   flat_halfline   a_k(x) = x^k exp(-1/x - x) for x > 0, 0 for x <= 0  (k >= -8)
//   flat_reflected  a_k(-x), the mirror image supported on (-inf, 0]
//   gaussian_poly   g_k(x) = x^k exp(-x^2) on the whole line               (k >= 0)
// Coefficients are complex MPFR values; solved functions routinely carry
// coefficients near 1e26 with alternating signs, so cancellation-free
// evaluation needs more than double precision.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gsmoment/multiprecision.hpp"

namespace gsm {

enum class AtomKind { FlatHalfline, FlatReflected, GaussianPoly };

std::string_view to_string(AtomKind kind);
AtomKind parse_atom_kind(const std::string& name);

constexpr int kMinFlatIndex = -8;
constexpr int kDefaultMaxDerivative = 64;

struct Atom {
    AtomKind kind = AtomKind::FlatHalfline;
    int k = 0;
    mp::Complex coeff;
};

class TestFunction {
public:
    TestFunction() = default;

    static TestFunction single(AtomKind kind, int k, std::complex<double> coeff = 1.0);

    // Adds coeff * atom, merging with an existing atom of the same kind and k.
    // Throws DepthExceeded for flat atoms with k < -8, InvalidParameter for
    // gaussian atoms with k < 0.
    void add(AtomKind kind, int k, const mp::Complex& coeff);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    bool is_zero() const;
    bool halfline_supported() const;  // only flat_halfline atoms
    bool has_kind(AtomKind kind) const;
    // Largest coefficient precision in bits (0 for the empty function).
    long precision() const;

    TestFunction scaled(const mp::Complex& s) const;
    friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
    friend TestFunction operator-(const TestFunction& a, const TestFunction& b);

    // phi^(m)(x). DepthExceeded if m > max_order.
    std::complex<double> eval_derivative(int m, double x, int max_order = kDefaultMaxDerivative) const;

    // mu_p = int x^p phi(x) dx via the Bessel and Gamma closed forms, summed
    // at max(working precision, precision()) bits.
    mp::Complex moment_mp(int p) const;
    std::complex<double> moment(int p) const;

private:
    std::vector<Atom> atoms_;  // sorted by (kind, k)
};

// phi, phi', ..., phi^(order) as Laurent polynomials times the exponential
// factor of each atom family. Build once, evaluate at many abscissas.
class DerivativeTable {
public:
    DerivativeTable(const TestFunction& f, int order, int max_order = kDefaultMaxDerivative);

    int order() const noexcept { return order_; }

    // Double evaluation with a running rounding-error bound; falls back to
    // MPFR when the bound says the double result has lost accuracy.
    std::complex<double> value(int m, double x) const;
    // log |phi^(m)(x)|, -inf where it vanishes; safe where the value itself
    // under- or overflows.
    double log_abs(int m, double x) const;
    void log_abs_grid(int m, std::span<const double> xs, std::span<double> out) const;

    mp::Complex value_mp(int m, const mp::Float& x) const;

    long precision() const noexcept { return bits_; }

private:
    struct Laurent {
        int jmin = 0;                      // power of the first coefficient
        std::vector<mp::Complex> c;        // coefficient of x^(jmin + i)
        std::vector<double> re, im, mag;   // double copies for the fast path
        std::vector<double> rre, rim, rmag;  // the same, highest power first
    };
    struct Family {
        bool present = false;
        std::vector<Laurent> d;  // d[m] = m-th derivative numerator
    };
    // Value of one family term as mantissa * exp(log_scale).
    struct Term {
        std::complex<double> mantissa;
        double log_scale;
        bool zero;
    };

    Term family_term(int family, int m, double x) const;
    static void finalize(Laurent& l);

    int order_ = 0;
    long bits_ = mp::kDefaultBits;
    Family fam_[3];  // indexed by AtomKind
};

}  // namespace gsm
