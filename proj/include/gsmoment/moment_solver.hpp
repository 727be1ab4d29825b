#pragma once

// Finite-order Stieltjes moment problem on the flat basis a_0..a_P:
// find c with sum_k c_k mu_p(a_k) = a_p for p <= P. The Gram matrix
// G_pk = 2 K_{p+k+1}(2) is badly conditioned, so the system is solved in MPFR
// with a precision-doubling loop and checked against quadrature moments.

#include <complex>
#include <vector>

#include "gsmoment/conditions.hpp"
#include "gsmoment/multiprecision.hpp"
#include "gsmoment/seminorm.hpp"
#include "gsmoment/sequence_target.hpp"
#include "gsmoment/test_function.hpp"
#include "gsmoment/transforms.hpp"
#include "gsmoment/weight_sequence.hpp"

namespace gsm {

constexpr int kMaxTargetOrder = 32;

struct SolverOptions {
    long initial_bits = 200;
    long max_bits = 2000;
    double tolerance = 1e-6;  // on |mu_p - a_p| / max(1, |a_p|)
    bool override_gamma2 = false;
    bool compute_profile = true;
    std::vector<int> profile_n = {0, 1, 2};
    std::vector<double> profile_h = {0.25, 0.5, 1.0, 2.0};
    ClassifierOptions classifier;
};

enum class CellStatus { Finite, Overflow };

std::string_view to_string(CellStatus s);

struct ProfileCell {
    int n = 0;
    double h = 1.0;
    double log_value = 0.0;  // log of the seminorm, -inf for the zero function
    double argmax_x = 0.0;
    CellStatus status = CellStatus::Finite;

    double value() const;
};

struct MomentSolution {
    SequenceTarget target;
    TestFunction phi;
    std::vector<mp::Complex> coefficients;     // c_0..c_P
    std::vector<std::complex<double>> achieved;  // mu_p(phi) by quadrature
    std::vector<double> residuals;             // |mu_p(phi) - a_p|
    double max_scaled_residual = 0.0;          // max_p residual_p / max(1, |a_p|)
    double condition_estimate = 1.0;           // ||G||_inf ||G^-1||_inf
    long precision_bits = 0;
    Verdict gamma2 = Verdict::Inconclusive;
    bool override_used = false;  // solved although (gamma2) did not hold
    std::vector<ProfileCell> seminorm_profile;
};

// Errors: TargetTooLarge (P > 32), ConditionRefused ((gamma2) does not hold
// and no override), IllConditioned (tolerance not met at max_bits).
MomentSolution solve_moments(const SequenceTarget& target, const WeightSequence& ws, const SolverOptions& opt = {});

// seminorm(phi, n, h, ws) over the grid of n and h; a cell overflows when the
// value is not finite or the sup sits on the outermost grid point.
std::vector<ProfileCell> membership_report(const TestFunction& phi, const WeightSequence& ws,
                                           const std::vector<int>& ns = {0, 1, 2},
                                           const std::vector<double>& hs = {0.25, 0.5, 1.0, 2.0});
std::vector<ProfileCell> membership_report(const MomentSolution& sol, const WeightSequence& ws);

// int_0^inf x^p phi(x) dx for p = 0..p_max by MPFR exp-map quadrature at
// `bits`, independent of the closed-form Bessel moments.
std::vector<mp::Complex> quadrature_moments(const TestFunction& phi, int p_max, long bits);

// Gram matrix condition number ||G||_inf ||G^-1||_inf for orders 0..P.
double gram_condition(int P, long bits = 256);

struct RoundtripRecord {
    SequenceTarget target;
    SequenceTarget even_target;  // a_2p
    SequenceTarget odd_target;   // a_2p+1
    MomentSolution even;         // solves mu_p = a_2p
    MomentSolution odd;          // solves mu_p = a_2p+1
    Handle recombined;           // S_e T_e phi_e + S_o T_o phi_o
    std::vector<std::complex<double>> even_branch;  // moments of S_e T_e phi_e
    std::vector<std::complex<double>> odd_branch;   // moments of S_o T_o phi_o
    std::vector<std::complex<double>> achieved;     // moments of the recombination
    double max_scaled_error = 0.0;
    double max_cross_moment = 0.0;  // odd moments of the even branch, even moments of the odd branch
    bool matches = false;
};

RoundtripRecord reduction_roundtrip(const SequenceTarget& target, const WeightSequence& ws,
                                    const SolverOptions& opt = {});

}  // namespace gsm
