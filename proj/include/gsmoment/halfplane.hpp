#pragma once

// Fourier-Laplace transforms of half-line test functions,
//   f(z) = int_0^inf phi(t) e^{itz} dt,   Im z > 0,
// with derivatives taken under the integral sign.

#include <complex>
#include <memory>
#include <vector>

#include "gsmoment/moment_solver.hpp"
#include "gsmoment/multiprecision.hpp"
#include "gsmoment/sequence_target.hpp"
#include "gsmoment/test_function.hpp"
#include "gsmoment/weight_sequence.hpp"

namespace gsm {

class HalfPlaneFunction {
public:
    const TestFunction& source() const noexcept { return source_; }

    // f^(p)(z) = int_0^inf (it)^p phi(t) e^{itz} dt for p = 0..p_max.
    std::vector<std::complex<double>> derivatives(std::complex<double> z, int p_max) const;
    std::complex<double> derivative(int p, std::complex<double> z) const;
    std::complex<double> value(std::complex<double> z) const { return derivative(0, z); }
    // MPFR evaluation at `bits` (0: max of working and coefficient precision).
    std::vector<mp::Complex> derivatives_mp(std::complex<double> z, int p_max, long bits = 0) const;

    // int_0^inf |phi|, an upper bound for |f| on the closed half-plane.
    double mass_bound() const;

private:
    friend HalfPlaneFunction laplace(const TestFunction& phi);
    explicit HalfPlaneFunction(TestFunction phi);

    TestFunction source_;
    std::shared_ptr<const DerivativeTable> table_;
};

// UnsupportedSupport when phi has mass on x < 0.
HalfPlaneFunction laplace(const TestFunction& phi);

struct BoundaryCheck {
    std::vector<double> ys;                        // sample heights y_j, decreasing
    std::vector<std::complex<double>> extrapolated;  // Neville limit y -> 0 of f^(p)(iy)
    double max_discrepancy = 0.0;                  // max_p |limit - i^p mu_p| / max(1, |i^p mu_p|)
};

// (f^(p)(0))_{p <= P} = (i^p mu_p(phi)), cross-checked against the y -> 0
// extrapolation of f^(p)(iy). ExtrapolationDivergence above `tolerance`.
SequenceTarget boundary_borel(const HalfPlaneFunction& f, int P, BoundaryCheck* check = nullptr,
                              double tolerance = 1e-5);

struct UhfNormQuery {
    double h = 1.0;
    int p_cap = 8;
    std::vector<std::complex<double>> grid;  // empty: uhf_grid(25, 32)
};

// Radii log-spaced in [1e-3, 1e3] times angles pi (j + 1/2) / n_angles.
std::vector<std::complex<double>> uhf_grid(int n_radii = 25, int n_angles = 32);

struct UhfNormResult {
    double log_value = 0.0;  // -inf for f = 0
    int argmax_p = 0;
    std::complex<double> argmax_z;

    double value() const;
};

// sup_{p <= p_cap} sup_{z in grid} h^p |f^(p)(z)| / M_p.
UhfNormResult uhf_norm_detail(const HalfPlaneFunction& f, const UhfNormQuery& q, const WeightSequence& ws);
double uhf_norm(const HalfPlaneFunction& f, const UhfNormQuery& q, const WeightSequence& ws);

// |d_x f + i d_y f| / |f'(z)| with fourth-order central differences.
double cauchy_riemann_residual(const HalfPlaneFunction& f, std::complex<double> z);

struct BorelRittSolution {
    SequenceTarget target;
    SequenceTarget twisted;  // (-i)^p a_p, the moment target
    MomentSolution moments;
    HalfPlaneFunction f;
    SequenceTarget boundary;  // f^(p)(0)
    BoundaryCheck check;
    double max_scaled_error = 0.0;  // max_p |f^(p)(0) - a_p| / max(1, |a_p|)
};

BorelRittSolution borel_ritt_solve(const SequenceTarget& target, const WeightSequence& ws,
                                   const SolverOptions& opt = {});

}  // namespace gsm
