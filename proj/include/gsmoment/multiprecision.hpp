#pragma once

// Thin RAII layer over MPFR. The working precision is thread-local and measured
// in bits; every freshly created value takes the current working precision.

#include <mpfr.h>

#include <compare>
#include <complex>
#include <string>
#include <utility>

namespace gsm::mp {

constexpr long kDefaultBits = 256;

long working_bits() noexcept;

// Sets the thread's working precision for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(long bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    long saved_;
};

class Float {
public:
    Float() { mpfr_init2(v_, working_bits()); mpfr_set_zero(v_, 1); }
    Float(double d) { mpfr_init2(v_, working_bits()); mpfr_set_d(v_, d, MPFR_RNDN); }
    Float(int i) { mpfr_init2(v_, working_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }
    Float(long i) { mpfr_init2(v_, working_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }
    explicit Float(const std::string& decimal);

    Float(const Float& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Float(Float&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Float& operator=(const Float& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Float& operator=(Float&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Float() { mpfr_clear(v_); }

    mpfr_ptr raw() noexcept { return v_; }
    mpfr_srcptr raw() const noexcept { return v_; }
    long bits() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Natural log of |x| as a double; -inf for zero. Safe far outside double range.
    double log_abs() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    // Shortest decimal string that round-trips at this value's precision.
    std::string to_string() const;

    Float& operator+=(const Float& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Float& operator-=(const Float& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Float& operator*=(const Float& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Float& operator/=(const Float& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Float operator+(Float a, const Float& b) { a += b; return a; }
    friend Float operator-(Float a, const Float& b) { a -= b; return a; }
    friend Float operator*(Float a, const Float& b) { a *= b; return a; }
    friend Float operator/(Float a, const Float& b) { a /= b; return a; }
    friend Float operator-(Float a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }

    friend bool operator==(const Float& a, const Float& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Float& a, const Float& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Float& a, const Float& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Float& a, const Float& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Float& a, const Float& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

private:
    mpfr_t v_;
};

// Copy of x rounded to the current working precision.
Float rounded(const Float& x);

Float exp(const Float& x);
Float log(const Float& x);
Float sqrt(const Float& x);
Float abs(const Float& x);
Float pow(const Float& x, long n);
Float pow(const Float& x, const Float& y);
Float gamma(const Float& x);
void sin_cos(const Float& x, Float& s, Float& c);
Float euler_gamma();
Float pi();

// Complex number over Float; std::complex<T> is unspecified for non-arithmetic T.
struct Complex {
    Float re;
    Float im;

    Complex() = default;
    Complex(Float r, Float i = Float()) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Float abs() const { return mp::sqrt(re * re + im * im); }
    double log_abs() const;

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Float& s) { re *= s; im *= s; return *this; }
    friend Complex operator+(Complex a, const Complex& b) { a += b; return a; }
    friend Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
    friend Complex operator*(Complex a, const Float& s) { a *= s; return a; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};

}  // namespace gsm::mp
