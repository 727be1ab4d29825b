#pragma once

// Reference computations used only by the tests. None of these touch the
// library's own Bessel, quadrature or transform code.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

// sup_p (p log t - log M_p) by scanning every index.
inline double brute_associated(std::span<const double> log_M, double log_t) {
    long double best = 0.0L;
    for (std::size_t p = 0; p < log_M.size(); ++p) {
        const long double v = static_cast<long double>(p) * log_t - log_M[p];
        if (v > best) best = v;
    }
    return static_cast<double>(best);
}

inline double bessel_k(double nu, double x) { return boost::math::cyl_bessel_k(nu, x); }

// int_0^inf x^(nu-1) exp(-x - 1/x) dx
inline double flat_moment(int nu) { return 2.0 * bessel_k(nu, 2.0); }

// The integrands here all decay at least like exp(-x) and exp(-1/x); far out
// in either tail x^p * 0 can come back as NaN and is taken as 0.
inline double halfline(const std::function<double(double)>& f, double tol = 1e-13) {
    static thread_local boost::math::quadrature::exp_sinh<double> engine;
    auto g = [&](double x) {
        const double v = f(x);
        return std::isnan(v) && (x < 1e-6 || x > 1e6) ? 0.0 : v;
    };
    return engine.integrate(g, tol);
}

inline std::complex<double> halfline_complex(const std::function<std::complex<double>(double)>& f, double tol = 1e-13) {
    const double re = halfline([&](double x) { return f(x).real(); }, tol);
    const double im = halfline([&](double x) { return f(x).imag(); }, tol);
    return {re, im};
}

// int_{-inf}^{inf} x^p f(x) dx as the sum of the two half-lines.
inline std::complex<double> line_moment(const std::function<std::complex<double>(double)>& f, int p) {
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    return halfline_complex([&](double x) { return std::pow(x, p) * (f(x) + sign * f(-x)); });
}

// Flat-atom combination sum_k c_k x^k exp(-1/x - x) in 50-digit arithmetic,
// with coefficients handed over as decimal strings.
struct BigFlat {
    std::vector<Big> re, im;  // index k
    explicit BigFlat(const std::vector<std::pair<std::string, std::string>>& coeffs) {
        for (const auto& [r, i] : coeffs) {
            re.emplace_back(r);
            im.emplace_back(i);
        }
    }
    // Moments int_0^inf x^p phi(x) dx, p = 0..p_max, by 50-digit exp-sinh quadrature.
    std::vector<std::complex<double>> moments(int p_max) const {
        static thread_local boost::math::quadrature::exp_sinh<Big> engine;
        std::vector<std::complex<double>> out;
        const Big tol("1e-40");
        for (int p = 0; p <= p_max; ++p) {
            auto part = [&](const std::vector<Big>& c) {
                auto g = [&](Big x) -> Big {
                    if (x < Big("1e-3") || x > Big("1e4")) return Big(0);  // below e^-1000
                    Big poly = 0;
                    for (std::size_t k = c.size(); k-- > 0;) poly = poly * x + c[k];
                    return pow(x, p) * poly * exp(-1 / x - x);
                };
                return static_cast<double>(engine.integrate(g, tol));
            };
            out.emplace_back(part(re), part(im));
        }
        return out;
    }
};

// b_p = sum_n C(p,n) a_n c_(p-n), written out directly.
inline std::vector<Rational> binomial_transform(const std::vector<Rational>& a, const std::vector<Rational>& c) {
    std::vector<Rational> b(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        Rational binom = 1;
        for (std::size_t n = 0; n <= p; ++n) {
            b[p] += binom * a[n] * c[p - n];
            binom = binom * Rational(static_cast<long>(p - n)) / Rational(static_cast<long>(n + 1));
        }
    }
    return b;
}

// Solves the lower-triangular system b = binomial_transform(a, c) for a by
// forward substitution; c_0 must be nonzero.
inline std::vector<Rational> binomial_solve(const std::vector<Rational>& b, const std::vector<Rational>& c) {
    std::vector<Rational> a(b.size());
    for (std::size_t p = 0; p < b.size(); ++p) {
        Rational acc = b[p];
        Rational binom = 1;
        for (std::size_t n = 0; n < p; ++n) {
            acc -= binom * a[n] * c[p - n];
            binom = binom * Rational(static_cast<long>(p - n)) / Rational(static_cast<long>(n + 1));
        }
        a[p] = acc / c[0];
    }
    return a;
}

inline double rel(std::complex<double> got, std::complex<double> want) {
    const double d = std::abs(got - want);
    const double s = std::abs(want);
    return s > 0 ? d / s : d;
}

inline double scaled(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace oracle
