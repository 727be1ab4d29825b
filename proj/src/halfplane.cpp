#include "gsmoment/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gsmoment/error.hpp"
#include "gsmoment/quadrature.hpp"
#include "gsmoment/transforms.hpp"

namespace gsm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::complex<double> i_pow(int p) {
    switch (p % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

quadrature::ExpMapRange source_range(const TestFunction& phi, int p_max, long bits) {
    int kmin = 0, kmax = 0;
    bool any = false;
    for (const auto& a : phi.atoms()) {
        if (a.coeff.is_zero()) continue;
        kmin = any ? std::min(kmin, a.k) : a.k;
        kmax = any ? std::max(kmax, a.k) : a.k;
        any = true;
    }
    return quadrature::flat_atom_range(kmin + 1, kmax + p_max + 1, bits);
}

void check_z(std::complex<double> z) {
    if (!(z.imag() >= 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidParameter, "evaluation point must lie in the closed upper half-plane");
    }
}

}  // namespace

HalfPlaneFunction::HalfPlaneFunction(TestFunction phi)
    : source_(std::move(phi)), table_(std::make_shared<DerivativeTable>(source_, 0)) {}

HalfPlaneFunction laplace(const TestFunction& phi) {
    if (!phi.halfline_supported()) {
        throw Error(ErrorCode::UnsupportedSupport, "the Laplace bridge needs a function supported in [0, inf)");
    }
    return HalfPlaneFunction(phi);
}

std::vector<std::complex<double>> HalfPlaneFunction::derivatives(std::complex<double> z, int p_max) const {
    check_z(z);
    if (p_max < 0) throw Error(ErrorCode::InvalidParameter, "negative derivative order");
    const std::size_t n = static_cast<std::size_t>(p_max) + 1;
    if (source_.is_zero()) return std::vector<std::complex<double>>(n, 0.0);
    quadrature::TrapezoidOptions opt;
    opt.range = source_range(source_, p_max, 60);
    opt.max_halvings = 22;
    return quadrature::exp_map_trapezoid(
        n,
        [&](double t, std::span<std::complex<double>> out) {
            const double decay = std::exp(-t * z.imag());
            std::complex<double> w = t * table_->value(0, t) * std::polar(decay, t * z.real());
            const std::complex<double> it(0.0, t);
            for (std::size_t p = 0; p < n; ++p) {
                out[p] = w;
                w *= it;
            }
        },
        opt);
}

std::complex<double> HalfPlaneFunction::derivative(int p, std::complex<double> z) const {
    return derivatives(z, p)[static_cast<std::size_t>(p)];
}

std::vector<mp::Complex> HalfPlaneFunction::derivatives_mp(std::complex<double> z, int p_max, long bits) const {
    check_z(z);
    if (p_max < 0) throw Error(ErrorCode::InvalidParameter, "negative derivative order");
    if (bits <= 0) bits = std::max(mp::working_bits(), source_.precision());
    mp::PrecisionScope scope(bits);
    const std::size_t n = static_cast<std::size_t>(p_max) + 1;
    if (source_.is_zero()) return std::vector<mp::Complex>(n, mp::Complex{mp::Float(0), mp::Float(0)});
    quadrature::TrapezoidOptions opt;
    opt.range = source_range(source_, p_max, bits);
    const mp::Float zr(z.real()), zi(z.imag());
    return quadrature::exp_map_trapezoid_mp(
        n,
        [&](const mp::Float& t, std::span<mp::Complex> out) {
            mp::Float s, c;
            mp::sin_cos(t * zr, s, c);
            const mp::Float decay = mp::exp(-(t * zi)) * t;
            mp::Complex w = table_->value_mp(0, t) * mp::Complex(c * decay, s * decay);
            for (std::size_t p = 0; p < n; ++p) {
                out[p] = w;
                // w *= i t
                w = mp::Complex(-(w.im * t), w.re * t);
            }
        },
        opt);
}

double HalfPlaneFunction::mass_bound() const {
    if (source_.is_zero()) return 0.0;
    quadrature::TrapezoidOptions opt;
    opt.range = source_range(source_, 0, 60);
    const auto r = quadrature::exp_map_trapezoid(
        1, [&](double t, std::span<std::complex<double>> out) { out[0] = t * std::abs(table_->value(0, t)); }, opt);
    return r[0].real();
}

SequenceTarget boundary_borel(const HalfPlaneFunction& f, int P, BoundaryCheck* check, double tolerance) {
    if (P < 0) throw Error(ErrorCode::InvalidParameter, "negative boundary order");
    if (P > kMaxTargetOrder) {
        throw Error(ErrorCode::TargetTooLarge, "boundary order above " + std::to_string(kMaxTargetOrder));
    }
    SequenceTarget out = SequenceTarget::zeros(P);
    const TestFunction& phi = f.source();
    const long bits = std::max(mp::working_bits(), phi.precision());
    mp::PrecisionScope scope(bits);
    std::vector<mp::Complex> exact;
    for (int p = 0; p <= P; ++p) {
        exact.push_back(phi.moment_mp(p));
        out.entries[p] = i_pow(p) * exact.back().to_complex();
    }
    BoundaryCheck local;
    BoundaryCheck& ck = check ? *check : local;
    ck = BoundaryCheck{};
    if (phi.is_zero()) {
        ck.extrapolated.assign(out.entries.begin(), out.entries.end());
        return out;
    }
    // Neville extrapolation to y = 0 of f^(p)(iy) sampled at y_j = 0.05 / 2^j.
    constexpr int kSamples = 10;
    std::vector<std::vector<mp::Complex>> samples;
    for (int j = 0; j < kSamples; ++j) {
        ck.ys.push_back(0.05 / std::ldexp(1.0, j));
        samples.push_back(f.derivatives_mp({0.0, ck.ys.back()}, P, bits));
    }
    for (int p = 0; p <= P; ++p) {
        std::vector<mp::Complex> t;
        for (int j = 0; j < kSamples; ++j) t.push_back(samples[j][p]);
        for (int m = 1; m < kSamples; ++m) {
            for (int i = 0; i + m < kSamples; ++i) {
                const mp::Float yi(ck.ys[i]), yim(ck.ys[i + m]);
                const mp::Float inv = mp::Float(1) / (yi - yim);
                t[i] = (t[i] * (-yim) + t[i + 1] * yi) * inv;
            }
        }
        const std::complex<double> limit = t[0].to_complex();
        ck.extrapolated.push_back(limit);
        // i^p mu_p in MPFR before comparing
        mp::Complex ref = exact[p];
        for (int q = 0; q < p % 4; ++q) ref = mp::Complex(-ref.im, ref.re);
        const double diff = (t[0] - ref).abs().to_double();
        ck.max_discrepancy = std::max(ck.max_discrepancy, diff / std::max(1.0, ref.abs().to_double()));
    }
    if (ck.max_discrepancy > tolerance) {
        throw Error(ErrorCode::ExtrapolationDivergence,
                    "y -> 0 extrapolation differs from i^p mu_p by " + std::to_string(ck.max_discrepancy));
    }
    return out;
}

std::vector<std::complex<double>> uhf_grid(int n_radii, int n_angles) {
    if (n_radii < 2 || n_angles < 1) throw Error(ErrorCode::InvalidParameter, "uhf grid needs >= 2 radii, >= 1 angle");
    std::vector<std::complex<double>> g;
    const double lo = std::log(1e-3), hi = std::log(1e3);
    for (int i = 0; i < n_radii; ++i) {
        const double r = std::exp(lo + (hi - lo) * i / (n_radii - 1));
        for (int j = 0; j < n_angles; ++j) g.push_back(std::polar(r, std::numbers::pi * (j + 0.5) / n_angles));
    }
    return g;
}

double UhfNormResult::value() const { return std::exp(log_value); }

UhfNormResult uhf_norm_detail(const HalfPlaneFunction& f, const UhfNormQuery& q, const WeightSequence& ws) {
    if (!(q.h > 0.0)) throw Error(ErrorCode::InvalidParameter, "uhf norm needs h > 0");
    if (q.p_cap < 0 || q.p_cap > kMaxTargetOrder) {
        throw Error(ErrorCode::InvalidParameter, "p_cap must lie in 0..32");
    }
    const auto grid = q.grid.empty() ? uhf_grid() : q.grid;
    UhfNormResult best;
    best.log_value = kNegInf;
    if (f.source().is_zero()) return best;
    const double lh = std::log(q.h);
    for (const auto& z : grid) {
        if (!(z.imag() > 0.0)) throw Error(ErrorCode::InvalidParameter, "uhf grid points need Im z > 0");
        const auto d = f.derivatives(z, q.p_cap);
        for (int p = 0; p <= q.p_cap; ++p) {
            const double a = std::abs(d[p]);
            if (a == 0.0) continue;
            const double v = p * lh + std::log(a) - ws.log_M(p);
            if (v > best.log_value) best = {v, p, z};
        }
    }
    return best;
}

double uhf_norm(const HalfPlaneFunction& f, const UhfNormQuery& q, const WeightSequence& ws) {
    return uhf_norm_detail(f, q, ws).value();
}

double cauchy_riemann_residual(const HalfPlaneFunction& f, std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw Error(ErrorCode::InvalidParameter, "stencil point needs Im z > 0");
    if (f.source().is_zero()) return 0.0;
    const double d = 0.01 * std::min(1.0, z.imag());
    auto stencil = [&](std::complex<double> dir) {
        const std::complex<double> s = dir * d;
        return (-f.value(z + 2.0 * s) + 8.0 * f.value(z + s) - 8.0 * f.value(z - s) + f.value(z - 2.0 * s)) /
               (12.0 * d);
    };
    const std::complex<double> dx = stencil({1.0, 0.0}), dy = stencil({0.0, 1.0});
    const double scale = std::abs(f.derivative(1, z));
    return std::abs(dx + std::complex<double>(0.0, 1.0) * dy) / std::max(scale, std::numeric_limits<double>::min());
}

BorelRittSolution borel_ritt_solve(const SequenceTarget& target, const WeightSequence& ws, const SolverOptions& opt) {
    const SequenceTarget twisted = sign_twist(target);
    MomentSolution sol = solve_moments(twisted, ws, opt);
    HalfPlaneFunction f = laplace(sol.phi);
    BoundaryCheck check;
    SequenceTarget boundary = boundary_borel(f, target.order(), &check);
    boundary.h = target.h;
    double worst = 0.0;
    for (std::size_t p = 0; p < target.entries.size(); ++p) {
        const double err = std::abs(boundary.entries[p] - target.entries[p]);
        worst = std::max(worst, err / std::max(1.0, std::abs(target.entries[p])));
    }
    return BorelRittSolution{target, twisted, std::move(sol), std::move(f), std::move(boundary), std::move(check), worst};
}

}  // namespace gsm
