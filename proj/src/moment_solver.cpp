#include "gsmoment/moment_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/bessel.hpp"
#include "gsmoment/error.hpp"

namespace gsm {

namespace {

using Matrix = std::vector<std::vector<mp::Float>>;

Matrix gram(int P) {
    const int n = P + 1;
    std::vector<mp::Float> k = bessel::k_sequence(mp::Float(2), 2 * P + 1);
    Matrix g(n, std::vector<mp::Float>(n));
    for (int p = 0; p < n; ++p) {
        for (int c = 0; c < n; ++c) g[p][c] = mp::Float(2) * k[p + c + 1];
    }
    return g;
}

// Doolittle LU with partial pivoting, in place.
struct Lu {
    Matrix a;
    std::vector<int> perm;

    explicit Lu(Matrix m) : a(std::move(m)), perm(a.size()) {
        const int n = static_cast<int>(a.size());
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            mp::Float best = mp::abs(a[col][col]);
            for (int r = col + 1; r < n; ++r) {
                mp::Float v = mp::abs(a[r][col]);
                if (v > best) best = std::move(v), piv = r;
            }
            if (best.is_zero()) throw Error(ErrorCode::IllConditioned, "singular Gram matrix");
            std::swap(a[col], a[piv]);
            std::swap(perm[col], perm[piv]);
            for (int r = col + 1; r < n; ++r) {
                a[r][col] /= a[col][col];
                const mp::Float& f = a[r][col];
                for (int c = col + 1; c < n; ++c) a[r][c] -= f * a[col][c];
            }
        }
    }

    std::vector<mp::Float> solve(const std::vector<mp::Float>& b) const {
        const int n = static_cast<int>(a.size());
        std::vector<mp::Float> x(n);
        for (int i = 0; i < n; ++i) {
            mp::Float s = b[perm[i]];
            for (int j = 0; j < i; ++j) s -= a[i][j] * x[j];
            x[i] = std::move(s);
        }
        for (int i = n - 1; i >= 0; --i) {
            mp::Float s = x[i];
            for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
            x[i] = s / a[i][i];
        }
        return x;
    }
};

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (const auto& row : m) {
        mp::Float s(0);
        for (const auto& v : row) s += mp::abs(v);
        best = std::max(best, s.to_double());
    }
    return best;
}

double condition_of(const Matrix& g, const Lu& lu) {
    const int n = static_cast<int>(g.size());
    std::vector<mp::Float> row_sums(n, mp::Float(0));
    for (int c = 0; c < n; ++c) {
        std::vector<mp::Float> e(n, mp::Float(0));
        e[c] = mp::Float(1);
        const auto col = lu.solve(e);
        for (int r = 0; r < n; ++r) row_sums[r] += mp::abs(col[r]);
    }
    double inv = 0.0;
    for (const auto& s : row_sums) inv = std::max(inv, s.to_double());
    return inf_norm(g) * inv;
}

double scaled(double residual, std::complex<double> a) { return residual / std::max(1.0, std::abs(a)); }

}  // namespace

std::string_view to_string(CellStatus s) { return s == CellStatus::Finite ? "Finite" : "Overflow"; }

double ProfileCell::value() const { return std::exp(log_value); }

std::vector<mp::Complex> quadrature_moments(const TestFunction& phi, int p_max, long bits) {
    return handle_moments_mp(*make_handle(phi), p_max, bits);
}

double gram_condition(int P, long bits) {
    mp::PrecisionScope scope(bits);
    const Matrix g = gram(P);
    return condition_of(g, Lu(g));
}

MomentSolution solve_moments(const SequenceTarget& target, const WeightSequence& ws, const SolverOptions& opt) {
    const int P = target.order();
    if (P < 0) throw Error(ErrorCode::InvalidParameter, "empty target");
    if (P > kMaxTargetOrder) {
        throw Error(ErrorCode::TargetTooLarge, "target order " + std::to_string(P) + " exceeds " +
                                                   std::to_string(kMaxTargetOrder));
    }
    if (opt.initial_bits < 64 || opt.max_bits < opt.initial_bits) {
        throw Error(ErrorCode::InvalidParameter, "solver precision range is empty");
    }
    for (const auto& z : target.entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::InvalidParameter, "target entries must be finite");
        }
    }
    MomentSolution sol;
    sol.target = target;
    sol.gamma2 = check_condition(ws, ConditionId{Condition::gamma2, 2.0}, opt.classifier).verdict;
    if (sol.gamma2 != Verdict::Holds) {
        if (!opt.override_gamma2) {
            throw Error(ErrorCode::ConditionRefused, "(gamma2) is " + std::string(to_string(sol.gamma2)) + " for " +
                                                         ws.description() + "; pass the override to solve anyway");
        }
        sol.override_used = true;
    }

    const std::size_t n = static_cast<std::size_t>(P) + 1;
    for (long bits = opt.initial_bits;; bits *= 2) {
        bits = std::min(bits, opt.max_bits);
        mp::PrecisionScope scope(bits);
        const Matrix g = gram(P);
        const Lu lu(g);
        sol.condition_estimate = condition_of(g, lu);
        sol.precision_bits = bits;
        sol.coefficients.assign(n, mp::Complex{mp::Float(0), mp::Float(0)});
        sol.phi = TestFunction();
        if (target.is_zero()) {
            sol.achieved.assign(n, 0.0);
            sol.residuals.assign(n, 0.0);
            sol.max_scaled_residual = 0.0;
            break;
        }
        std::vector<mp::Float> re(n), im(n);
        for (std::size_t p = 0; p < n; ++p) {
            re[p] = mp::Float(target.entries[p].real());
            im[p] = mp::Float(target.entries[p].imag());
        }
        const auto cr = lu.solve(re), ci = lu.solve(im);
        for (std::size_t k = 0; k < n; ++k) {
            sol.coefficients[k] = mp::Complex(cr[k], ci[k]);
            sol.phi.add(AtomKind::FlatHalfline, static_cast<int>(k), sol.coefficients[k]);
        }
        const auto mu = quadrature_moments(sol.phi, P, bits);
        sol.achieved.resize(n);
        sol.residuals.resize(n);
        sol.max_scaled_residual = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const mp::Complex diff = mu[p] - mp::Complex(target.entries[p]);
            sol.achieved[p] = mu[p].to_complex();
            sol.residuals[p] = diff.abs().to_double();
            sol.max_scaled_residual = std::max(sol.max_scaled_residual, scaled(sol.residuals[p], target.entries[p]));
        }
        if (sol.max_scaled_residual <= opt.tolerance) break;
        if (bits >= opt.max_bits) {
            throw Error(ErrorCode::IllConditioned, "residual " + std::to_string(sol.max_scaled_residual) +
                                                       " above tolerance at the precision cap");
        }
    }
    if (opt.compute_profile) sol.seminorm_profile = membership_report(sol.phi, ws, opt.profile_n, opt.profile_h);
    return sol;
}

std::vector<ProfileCell> membership_report(const TestFunction& phi, const WeightSequence& ws,
                                           const std::vector<int>& ns, const std::vector<double>& hs) {
    std::vector<ProfileCell> cells;
    for (int nn : ns) {
        for (double h : hs) {
            ProfileCell cell;
            cell.n = nn;
            cell.h = h;
            const SeminormResult r = seminorm_detail(phi, SeminormQuery{nn, h, {}}, ws);
            cell.log_value = r.log_value;
            cell.argmax_x = r.argmax_x;
            const bool zero = r.log_value == -std::numeric_limits<double>::infinity();
            const bool finite = zero || (std::isfinite(r.log_value) && r.log_value < std::log(1.0e300));
            cell.status = finite && !(r.at_grid_edge && !zero) ? CellStatus::Finite : CellStatus::Overflow;
            cells.push_back(cell);
        }
    }
    return cells;
}

std::vector<ProfileCell> membership_report(const MomentSolution& sol, const WeightSequence& ws) {
    return membership_report(sol.phi, ws);
}

RoundtripRecord reduction_roundtrip(const SequenceTarget& target, const WeightSequence& ws, const SolverOptions& opt) {
    const int P = target.order();
    if (P < 0) throw Error(ErrorCode::InvalidParameter, "empty target");
    RoundtripRecord rec;
    rec.target = target;
    rec.even_target = seq_te(target);
    rec.odd_target = seq_to(target);
    SolverOptions half = opt;
    half.compute_profile = false;
    rec.even = solve_moments(rec.even_target, ws, half);
    std::vector<Handle> parts;
    parts.push_back(symmetrize(square_sub_weighted(rec.even.phi), 1));
    if (!rec.odd_target.entries.empty()) {
        rec.odd = solve_moments(rec.odd_target, ws, half);
        parts.push_back(symmetrize(square_sub_odd(rec.odd.phi), -1));
    }
    const long bits = std::max({mp::working_bits(), rec.even.precision_bits, rec.odd.precision_bits});
    auto moments = [&](const Handle& h) {
        std::vector<std::complex<double>> out;
        for (const auto& m : handle_moments_mp(*h, P, bits)) out.push_back(m.to_complex());
        return out;
    };
    const std::size_t n = static_cast<std::size_t>(P) + 1;
    rec.even_branch = moments(parts[0]);
    rec.odd_branch = parts.size() > 1 ? moments(parts[1]) : std::vector<std::complex<double>>(n, 0.0);
    rec.recombined = sum(parts);
    rec.achieved = moments(rec.recombined);
    for (std::size_t p = 0; p < n; ++p) {
        rec.max_scaled_error = std::max(rec.max_scaled_error,
                                        scaled(std::abs(rec.achieved[p] - target.entries[p]), target.entries[p]));
        const double cross = p % 2 == 0 ? std::abs(rec.odd_branch[p]) : std::abs(rec.even_branch[p]);
        rec.max_cross_moment = std::max(rec.max_cross_moment, cross);
    }
    rec.matches = rec.max_scaled_error <= opt.tolerance;
    return rec;
}

}  // namespace gsm
