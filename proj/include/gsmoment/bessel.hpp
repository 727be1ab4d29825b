#pragma once

// Modified Bessel functions of the second kind K_n(x) for integer order and
// real x > 0, in double and in MPFR precision.
//
// K_0 and K_1 come from the ascending series together with the Wronskian
// I_0 K_1 + I_1 K_0 = 1/x; higher orders use the forward recurrence
// K_{n+1} = K_{n-1} + (2n/x) K_n, which is stable for K.

#include <vector>

#include "gsmoment/multiprecision.hpp"

namespace gsm::bessel {

// K_0(x), ..., K_{n_max}(x) at the current working precision (plus guard bits
// for the series cancellation, which grows like 3x/ln 2 bits).
std::vector<mp::Float> k_sequence(const mp::Float& x, int n_max);

mp::Float k(int n, const mp::Float& x);

// Cached double values of K_n(2) for |n| <= 170; K_{-n} = K_n.
double k_at_two(int n);

// Moment of the flat atom x^k exp(-1/x - x): int_0^inf x^(nu-1) e^{-x-1/x} dx = 2 K_nu(2).
double flat_moment(int nu);
mp::Float flat_moment_mp(int nu);

}  // namespace gsm::bessel
