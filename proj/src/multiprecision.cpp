#include "gsmoment/multiprecision.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gsmoment/error.hpp"

namespace gsm::mp {

namespace {
thread_local long t_working_bits = kDefaultBits;
}

long working_bits() noexcept { return t_working_bits; }

PrecisionScope::PrecisionScope(long bits) : saved_(t_working_bits) {
    if (bits < MPFR_PREC_MIN || bits > 1 << 20) {
        throw Error(ErrorCode::InvalidParameter, "precision out of range: " + std::to_string(bits));
    }
    t_working_bits = bits;
}

PrecisionScope::~PrecisionScope() { t_working_bits = saved_; }

Float::Float(const std::string& decimal) {
    mpfr_init2(v_, working_bits());
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw Error(ErrorCode::ParseError, "not a decimal number: '" + decimal + "'");
    }
}

double Float::log_abs() const {
    if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
    if (!mpfr_number_p(v_)) return std::numeric_limits<double>::infinity();
    // |x| = d * 2^e with d in [0.5, 1).
    long e = 0;
    const double d = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

std::string Float::to_string() const {
    if (mpfr_zero_p(v_)) return "0";
    // Enough decimal digits to round-trip the binary precision.
    const auto digits = static_cast<size_t>(std::ceil(static_cast<double>(bits()) * 0.30102999566398120)) + 1;
    std::vector<char> buf(digits + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", static_cast<int>(digits), v_);
    return std::string(buf.data());
}

Float rounded(const Float& x) {
    Float r;
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Float exp(const Float& x) { Float r = x; mpfr_exp(r.raw(), x.raw(), MPFR_RNDN); return r; }
Float log(const Float& x) { Float r = x; mpfr_log(r.raw(), x.raw(), MPFR_RNDN); return r; }
Float sqrt(const Float& x) { Float r = x; mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN); return r; }
Float abs(const Float& x) { Float r = x; mpfr_abs(r.raw(), x.raw(), MPFR_RNDN); return r; }

Float pow(const Float& x, long n) {
    Float r = x;
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}

Float pow(const Float& x, const Float& y) {
    Float r = x;
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Float gamma(const Float& x) { Float r = x; mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN); return r; }

void sin_cos(const Float& x, Float& s, Float& c) {
    s = x;
    c = x;
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
}

Float euler_gamma() { Float r; mpfr_const_euler(r.raw(), MPFR_RNDN); return r; }
Float pi() { Float r; mpfr_const_pi(r.raw(), MPFR_RNDN); return r; }

double Complex::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return abs().log_abs();
}

}  // namespace gsm::mp
