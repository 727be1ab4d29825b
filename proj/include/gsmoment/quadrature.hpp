#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "gsmoment/multiprecision.hpp"

namespace gsm::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    double l1 = 0.0;     // integral of |f|
};

struct ComplexResult {
    std::complex<double> value;
    double error = 0.0;
    double l1 = 0.0;
};

struct Tolerance {
    double absolute = 1e-12;
    double relative = 1e-10;
};

// Adaptive double-exponential quadrature over (0, inf).
Result halfline(const std::function<double(double)>& f, Tolerance tol = {});
ComplexResult halfline(const std::function<std::complex<double>(double)>& f, Tolerance tol = {});

// Trapezoid rule on the exponential map x = e^u:
//   int_0^inf g(x) dx = int_R g(e^u) e^u du.
// For integrands analytic in a strip around the real u-axis this converges
// geometrically in the step size. The callback receives x and returns the
// values x * g_i(x) for every requested integrand i at once.
struct ExpMapRange {
    double u_lo = -6.0;
    double u_hi = 6.0;
};

// u-range outside which x^nu e^{-x-1/x}, for every nu in [nu_min, nu_max],
// is below 2^-bits relative to its peak.
ExpMapRange flat_atom_range(double nu_min, double nu_max, long bits);
// Same for x^nu e^{-x^2}; nu_min must be positive.
ExpMapRange gaussian_atom_range(double nu_min, double nu_max, long bits);

struct TrapezoidOptions {
    ExpMapRange range;
    double initial_step = 0.25;
    int max_halvings = 18;
    double relative_tolerance = 1e-13;
};

std::vector<std::complex<double>> exp_map_trapezoid(
    std::size_t count,
    const std::function<void(double x, std::span<std::complex<double>> out)>& x_times_integrand,
    const TrapezoidOptions& options);

// MPFR variant at the current working precision; relative_tolerance is
// replaced by 2^(16 - working_bits) when left at its default.
std::vector<mp::Complex> exp_map_trapezoid_mp(
    std::size_t count,
    const std::function<void(const mp::Float& x, std::span<mp::Complex> out)>& x_times_integrand,
    const TrapezoidOptions& options);

}  // namespace gsm::quadrature
