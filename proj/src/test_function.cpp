#include "gsmoment/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/bessel.hpp"
#include "gsmoment/error.hpp"
#include "gsmoment/kernels.hpp"

namespace gsm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

mp::Complex at_precision(const mp::Complex& z, long bits) {
    mp::PrecisionScope scope(bits);
    return {mp::rounded(z.re), mp::rounded(z.im)};
}

}  // namespace

std::string_view to_string(AtomKind kind) {
    switch (kind) {
        case AtomKind::FlatHalfline: return "flat_halfline";
        case AtomKind::FlatReflected: return "flat_reflected";
        case AtomKind::GaussianPoly: return "gaussian_poly";
    }
    return "unknown";
}

AtomKind parse_atom_kind(const std::string& name) {
    if (name == "flat_halfline") return AtomKind::FlatHalfline;
    if (name == "flat_reflected") return AtomKind::FlatReflected;
    if (name == "gaussian_poly") return AtomKind::GaussianPoly;
    throw Error(ErrorCode::ParseError, "unknown atom kind '" + name + "'");
}

TestFunction TestFunction::single(AtomKind kind, int k, std::complex<double> coeff) {
    TestFunction f;
    f.add(kind, k, mp::Complex(coeff));
    return f;
}

void TestFunction::add(AtomKind kind, int k, const mp::Complex& coeff) {
    if (kind == AtomKind::GaussianPoly && k < 0) {
        throw Error(ErrorCode::InvalidParameter, "gaussian_poly atoms need k >= 0");
    }
    if (kind != AtomKind::GaussianPoly && k < kMinFlatIndex) {
        throw Error(ErrorCode::DepthExceeded, "flat atoms need k >= " + std::to_string(kMinFlatIndex));
    }
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), std::make_pair(kind, k),
                               [](const Atom& a, const std::pair<AtomKind, int>& key) {
                                   return std::make_pair(a.kind, a.k) < key;
                               });
    if (it != atoms_.end() && it->kind == kind && it->k == k) {
        const long bits = std::max(it->coeff.re.bits(), coeff.re.bits());
        mp::PrecisionScope scope(bits);
        it->coeff = at_precision(it->coeff, bits) + at_precision(coeff, bits);
        return;
    }
    atoms_.insert(it, Atom{kind, k, coeff});
}

bool TestFunction::is_zero() const {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.coeff.is_zero(); });
}

bool TestFunction::halfline_supported() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom& a) { return a.kind == AtomKind::FlatHalfline || a.coeff.is_zero(); });
}

bool TestFunction::has_kind(AtomKind kind) const {
    return std::any_of(atoms_.begin(), atoms_.end(),
                       [&](const Atom& a) { return a.kind == kind && !a.coeff.is_zero(); });
}

long TestFunction::precision() const {
    long bits = 0;
    for (const auto& a : atoms_) bits = std::max({bits, a.coeff.re.bits(), a.coeff.im.bits()});
    return bits;
}

TestFunction TestFunction::scaled(const mp::Complex& s) const {
    TestFunction out;
    const long bits = std::max(precision(), s.re.bits());
    mp::PrecisionScope scope(bits);
    const mp::Complex ss = at_precision(s, bits);
    for (const auto& a : atoms_) out.atoms_.push_back(Atom{a.kind, a.k, at_precision(a.coeff, bits) * ss});
    return out;
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
    TestFunction out = a;
    for (const auto& atom : b.atoms_) out.add(atom.kind, atom.k, atom.coeff);
    return out;
}

TestFunction operator-(const TestFunction& a, const TestFunction& b) {
    mp::PrecisionScope scope(std::max(b.precision(), 64L));
    return a + b.scaled(mp::Complex(mp::Float(-1)));
}

std::complex<double> TestFunction::eval_derivative(int m, double x, int max_order) const {
    if (m < 0) throw Error(ErrorCode::InvalidParameter, "negative derivative order");
    if (m > max_order) {
        throw Error(ErrorCode::DepthExceeded, "derivative order " + std::to_string(m) + " above cap " +
                                                  std::to_string(max_order));
    }
    if (atoms_.empty()) return 0.0;
    return DerivativeTable(*this, m, max_order).value(m, x);
}

mp::Complex TestFunction::moment_mp(int p) const {
    if (p < 0) throw Error(ErrorCode::InvalidParameter, "negative moment index");
    const long bits = std::max(mp::working_bits(), precision());
    mp::PrecisionScope scope(bits);
    mp::Complex sum{mp::Float(0), mp::Float(0)};
    int nu_max = 0;
    for (const auto& a : atoms_) {
        if (a.kind != AtomKind::GaussianPoly) nu_max = std::max(nu_max, std::abs(p + a.k + 1));
    }
    std::vector<mp::Float> k2;
    if (has_kind(AtomKind::FlatHalfline) || has_kind(AtomKind::FlatReflected)) {
        k2 = bessel::k_sequence(mp::Float(2), nu_max);
    }
    for (const auto& a : atoms_) {
        const mp::Complex c = at_precision(a.coeff, bits);
        switch (a.kind) {
            case AtomKind::FlatHalfline:
            case AtomKind::FlatReflected: {
                // int_0^inf x^(nu-1) e^{-x-1/x} dx = 2 K_nu(2); the mirror picks up (-1)^p.
                mp::Float mu = mp::Float(2) * k2[std::abs(p + a.k + 1)];
                if (a.kind == AtomKind::FlatReflected && (p % 2) != 0) mu = -mu;
                sum += c * mu;
                break;
            }
            case AtomKind::GaussianPoly: {
                const int n = p + a.k;
                if (n % 2 == 0) sum += c * mp::gamma(mp::Float(n + 1) / mp::Float(2));
                break;
            }
        }
    }
    return sum;
}

std::complex<double> TestFunction::moment(int p) const { return moment_mp(p).to_complex(); }

DerivativeTable::DerivativeTable(const TestFunction& f, int order, int max_order) : order_(order) {
    if (order < 0) throw Error(ErrorCode::InvalidParameter, "negative derivative order");
    if (order > max_order) {
        throw Error(ErrorCode::DepthExceeded, "derivative order " + std::to_string(order) + " above cap " +
                                                  std::to_string(max_order));
    }
    bits_ = std::max(f.precision(), mp::kDefaultBits);
    mp::PrecisionScope scope(bits_);
    for (int fi = 0; fi < 3; ++fi) {
        const auto kind = static_cast<AtomKind>(fi);
        int kmin = std::numeric_limits<int>::max(), kmax = std::numeric_limits<int>::min();
        for (const auto& a : f.atoms()) {
            if (a.kind == kind) kmin = std::min(kmin, a.k), kmax = std::max(kmax, a.k);
        }
        Family& fam = fam_[fi];
        if (kmin > kmax) continue;
        fam.present = true;
        Laurent base;
        base.jmin = kind == AtomKind::GaussianPoly ? 0 : kmin;
        base.c.assign(static_cast<std::size_t>(kmax - base.jmin + 1), mp::Complex{mp::Float(0), mp::Float(0)});
        for (const auto& a : f.atoms()) {
            if (a.kind == kind) base.c[a.k - base.jmin] += at_precision(a.coeff, bits_);
        }
        fam.d.push_back(std::move(base));
        for (int m = 0; m < order; ++m) {
            const Laurent& cur = fam.d.back();
            Laurent next;
            const int n = static_cast<int>(cur.c.size());
            if (kind == AtomKind::GaussianPoly) {
                // d/dx x^j e^{-x^2} = (j x^{j-1} - 2 x^{j+1}) e^{-x^2}
                next.jmin = 0;
                next.c.assign(n + 1, mp::Complex{mp::Float(0), mp::Float(0)});
                for (int i = 0; i < n; ++i) {
                    const int j = cur.jmin + i;
                    if (j > 0) next.c[j - 1] += cur.c[i] * mp::Float(j);
                    next.c[j + 1] -= cur.c[i] * mp::Float(2);
                }
            } else {
                // d/dx x^j e^{-1/x-x} = (j x^{j-1} + x^{j-2} - x^j) e^{-1/x-x}
                next.jmin = cur.jmin - 2;
                next.c.assign(n + 2, mp::Complex{mp::Float(0), mp::Float(0)});
                for (int i = 0; i < n; ++i) {
                    const int j = cur.jmin + i;
                    next.c[j - 1 - next.jmin] += cur.c[i] * mp::Float(j);
                    next.c[j - 2 - next.jmin] += cur.c[i];
                    next.c[j - next.jmin] -= cur.c[i];
                }
            }
            fam.d.push_back(std::move(next));
        }
        for (auto& l : fam.d) finalize(l);
    }
}

void DerivativeTable::finalize(Laurent& l) {
    const std::size_t n = l.c.size();
    l.re.resize(n);
    l.im.resize(n);
    l.mag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        l.re[i] = l.c[i].re.to_double();
        l.im[i] = l.c[i].im.to_double();
        l.mag[i] = std::hypot(l.re[i], l.im[i]);
    }
    l.rre.assign(l.re.rbegin(), l.re.rend());
    l.rim.assign(l.im.rbegin(), l.im.rend());
    l.rmag.assign(l.mag.rbegin(), l.mag.rend());
}

DerivativeTable::Term DerivativeTable::family_term(int family, int m, double x) const {
    const Family& fam = fam_[family];
    if (!fam.present) return {0.0, 0.0, true};
    if (m < 0 || m > order_) throw Error(ErrorCode::DepthExceeded, "derivative order outside the table");
    const auto kind = static_cast<AtomKind>(family);
    double t = x;
    double sign = 1.0;
    if (kind == AtomKind::FlatHalfline) {
        if (!(x > 0.0)) return {0.0, 0.0, true};
    } else if (kind == AtomKind::FlatReflected) {
        if (!(x < 0.0)) return {0.0, 0.0, true};
        t = -x;
        if (m % 2 != 0) sign = -1.0;  // d/dx f(-x) = -f'(-x)
    }
    const Laurent& l = fam.d[m];
    const int n = static_cast<int>(l.c.size());
    const int deg = n - 1;
    const double at = std::fabs(t);
    double log_scale = kind == AtomKind::GaussianPoly ? -t * t : -1.0 / t - t;
    if (l.jmin != 0) log_scale += l.jmin * std::log(t);  // t > 0 for the flat families
    // For |t| > 1 evaluate the reversed polynomial in 1/t to avoid overflow.
    const bool reversed = at > 1.0 && deg > 0;
    const double s = reversed ? 1.0 / t : t;
    const auto& k = kernels::active();
    double y_re = 0, y_im = 0, bound = 0;
    const double s_abs = std::fabs(s);
    const std::span<const double> sv(&s, 1), av(&s_abs, 1);
    if (reversed) {
        k.horner(l.rre, sv, std::span<double>(&y_re, 1));
        k.horner(l.rim, sv, std::span<double>(&y_im, 1));
        k.horner(l.rmag, av, std::span<double>(&bound, 1));
    } else {
        k.horner(l.re, sv, std::span<double>(&y_re, 1));
        k.horner(l.im, sv, std::span<double>(&y_im, 1));
        k.horner(l.mag, av, std::span<double>(&bound, 1));
    }
    std::complex<double> y(y_re, y_im);
    double extra_log = reversed ? deg * std::log(at) : 0.0;
    double extra_sign = (reversed && t < 0.0 && (deg % 2 != 0)) ? -1.0 : 1.0;
    const double err = 2.0 * (n + 1) * kEps * bound;
    if (err > 1e-13 * std::abs(y) || !std::isfinite(bound)) {
        // Cancellation: redo the polynomial in MPFR at the coefficient precision.
        mp::PrecisionScope scope(bits_);
        const mp::Float tm(t);
        mp::Complex acc{mp::Float(0), mp::Float(0)};
        for (int i = deg; i >= 0; --i) acc = acc * tm + l.c[i];
        if (acc.is_zero()) return {0.0, 0.0, true};
        const mp::Float mag = acc.abs();
        const double lm = mag.log_abs();
        y = {(acc.re / mag).to_double(), (acc.im / mag).to_double()};
        extra_log = lm;
        extra_sign = 1.0;
    } else if (y == 0.0) {
        return {0.0, 0.0, true};
    }
    return {y * (sign * extra_sign), log_scale + extra_log, false};
}

std::complex<double> DerivativeTable::value(int m, double x) const {
    Term terms[3];
    double top = kNegInf;
    for (int f = 0; f < 3; ++f) {
        terms[f] = family_term(f, m, x);
        if (!terms[f].zero) top = std::max(top, terms[f].log_scale);
    }
    if (top == kNegInf) return 0.0;
    std::complex<double> sum = 0.0;
    for (const auto& t : terms) {
        if (!t.zero) sum += t.mantissa * std::exp(t.log_scale - top);
    }
    return sum * std::exp(top);
}

double DerivativeTable::log_abs(int m, double x) const {
    Term terms[3];
    double top = kNegInf;
    for (int f = 0; f < 3; ++f) {
        terms[f] = family_term(f, m, x);
        if (!terms[f].zero) top = std::max(top, terms[f].log_scale);
    }
    if (top == kNegInf) return kNegInf;
    std::complex<double> sum = 0.0;
    for (const auto& t : terms) {
        if (!t.zero) sum += t.mantissa * std::exp(t.log_scale - top);
    }
    const double a = std::abs(sum);
    return a == 0.0 ? kNegInf : std::log(a) + top;
}

void DerivativeTable::log_abs_grid(int m, std::span<const double> xs, std::span<double> out) const {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = log_abs(m, xs[i]);
}

mp::Complex DerivativeTable::value_mp(int m, const mp::Float& x) const {
    if (m < 0 || m > order_) throw Error(ErrorCode::DepthExceeded, "derivative order outside the table");
    mp::PrecisionScope scope(std::max(bits_, x.bits()));
    const mp::Float xx = mp::rounded(x);
    mp::Complex total{mp::Float(0), mp::Float(0)};
    for (int f = 0; f < 3; ++f) {
        const Family& fam = fam_[f];
        if (!fam.present) continue;
        const auto kind = static_cast<AtomKind>(f);
        mp::Float t = xx;
        bool negate = false;
        if (kind == AtomKind::FlatHalfline) {
            if (xx.sign() <= 0) continue;
        } else if (kind == AtomKind::FlatReflected) {
            if (xx.sign() >= 0) continue;
            t = -xx;
            negate = (m % 2) != 0;
        }
        const Laurent& l = fam.d[m];
        mp::Complex acc{mp::Float(0), mp::Float(0)};
        for (std::size_t i = l.c.size(); i-- > 0;) acc = acc * t + l.c[i];
        mp::Float scale = kind == AtomKind::GaussianPoly ? mp::exp(-(t * t))
                                                         : mp::exp(-(mp::Float(1) / t) - t);
        if (l.jmin != 0) scale *= mp::pow(t, static_cast<long>(l.jmin));
        if (negate) scale = -scale;
        total += acc * scale;
    }
    return total;
}

}  // namespace gsm
