#include "gsmoment/transforms.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gsmoment/error.hpp"

namespace gsm {

namespace {

mp::Complex negated(const mp::Complex& c) { return {-c.re, -c.im}; }

mp::Complex halved(const mp::Complex& c) {
    mp::PrecisionScope scope(std::max(c.re.bits(), c.im.bits()));
    return c * mp::Float(0.5);
}

void check_order(int m) {
    if (m < 0 || m > kHandleMaxDerivative) {
        throw Error(ErrorCode::DepthExceeded,
                    "handle derivatives are available up to order " + std::to_string(kHandleMaxDerivative));
    }
}

quadrature::ExpMapRange unite(const quadrature::ExpMapRange& a, const quadrature::ExpMapRange& b) {
    return {std::min(a.u_lo, b.u_lo), std::max(a.u_hi, b.u_hi)};
}

// ---- handle implementations ----

class AtomHandle final : public FunctionHandle {
public:
    explicit AtomHandle(TestFunction f) : f_(std::move(f)), table_(f_, kHandleMaxDerivative) {}

    Support support() const override { return f_.halfline_supported() ? Support::HalfLine : Support::Line; }

    void derivatives(double x, int m, std::span<std::complex<double>> out) const override {
        check_order(m);
        for (int j = 0; j <= m; ++j) out[j] = table_.value(j, x);
    }

    mp::Complex value_mp(const mp::Float& x) const override { return table_.value_mp(0, x); }

    quadrature::ExpMapRange range(double p_min, double p_max, long bits) const override {
        bool any = false;
        quadrature::ExpMapRange r{0.0, 0.0};
        for (const auto& a : f_.atoms()) {
            if (a.coeff.is_zero()) continue;
            quadrature::ExpMapRange ar;
            if (a.kind == AtomKind::GaussianPoly) {
                ar = quadrature::gaussian_atom_range(std::max(0.25, p_min + a.k + 1), std::max(0.25, p_max + a.k + 1),
                                                     bits);
            } else {
                ar = quadrature::flat_atom_range(p_min + a.k + 1, p_max + a.k + 1, bits);
            }
            r = any ? unite(r, ar) : ar;
            any = true;
        }
        return any ? r : quadrature::ExpMapRange{-1.0, 1.0};
    }

    long precision() const override { return f_.precision(); }

    std::string describe() const override {
        std::ostringstream os;
        os << "atoms[";
        bool first = true;
        for (const auto& a : f_.atoms()) {
            os << (first ? "" : " ") << to_string(a.kind) << "(" << a.k << ")";
            first = false;
        }
        os << "]";
        return os.str();
    }

private:
    TestFunction f_;
    DerivativeTable table_;
};

// g^(n) for g = f o s from fd[k] = f^(k)(s(x)) and sd[j] = s^(j)(x), by the
// partial Bell polynomial recursion B_{n,k} = sum_i C(n-1,i-1) s_i B_{n-i,k-1}.
void faa_di_bruno(std::span<const std::complex<double>> fd, std::span<const double> sd, int m,
                  std::span<std::complex<double>> out) {
    double bell[kHandleMaxDerivative + 1][kHandleMaxDerivative + 1] = {};
    double binom[kHandleMaxDerivative + 1][kHandleMaxDerivative + 1] = {};
    for (int n = 0; n <= m; ++n) {
        binom[n][0] = 1.0;
        for (int i = 1; i <= n; ++i) binom[n][i] = binom[n - 1][i - 1] + (i <= n - 1 ? binom[n - 1][i] : 0.0);
    }
    bell[0][0] = 1.0;
    for (int n = 1; n <= m; ++n) {
        for (int k = 1; k <= n; ++k) {
            double acc = 0.0;
            for (int i = 1; i <= n - k + 1; ++i) acc += binom[n - 1][i - 1] * sd[i] * bell[n - i][k - 1];
            bell[n][k] = acc;
        }
    }
    out[0] = fd[0];
    for (int n = 1; n <= m; ++n) {
        std::complex<double> acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += fd[k] * bell[n][k];
        out[n] = acc;
    }
}

class SubstitutionHandle final : public FunctionHandle {
public:
    enum class Kind { Square, Sqrt };

    SubstitutionHandle(Handle inner, Kind kind) : inner_(std::move(inner)), kind_(kind) {}

    Support support() const override { return Support::HalfLine; }

    void derivatives(double x, int m, std::span<std::complex<double>> out) const override {
        check_order(m);
        if (!(x > 0.0)) {
            std::fill(out.begin(), out.begin() + m + 1, std::complex<double>(0.0));
            return;
        }
        std::array<double, kHandleMaxDerivative + 1> sd{};
        double s;
        if (kind_ == Kind::Square) {
            s = x * x;
            sd[1] = 2.0 * x;
            if (m >= 2) sd[2] = 2.0;
        } else {
            s = std::sqrt(x);
            double fall = 1.0;
            for (int j = 1; j <= m; ++j) {
                fall *= 0.5 - (j - 1);
                sd[j] = fall * std::pow(x, 0.5 - j);
            }
        }
        std::array<std::complex<double>, kHandleMaxDerivative + 1> fd{};
        inner_->derivatives(s, m, fd);
        faa_di_bruno(fd, sd, m, out);
    }

    mp::Complex value_mp(const mp::Float& x) const override {
        if (x.sign() <= 0) return {mp::Float(0), mp::Float(0)};
        return inner_->value_mp(kind_ == Kind::Square ? x * x : mp::sqrt(x));
    }

    // x^(p+1) f(x^2) at x = e^u is y^((p+1)/2) f(y) at y = e^(2u); the sqrt case
    // is the reverse.
    quadrature::ExpMapRange range(double p_min, double p_max, long bits) const override {
        if (kind_ == Kind::Square) {
            const auto r = inner_->range((p_min - 1.0) / 2.0, (p_max - 1.0) / 2.0, bits);
            return {r.u_lo / 2.0, r.u_hi / 2.0};
        }
        const auto r = inner_->range(2.0 * p_min + 1.0, 2.0 * p_max + 1.0, bits);
        return {2.0 * r.u_lo, 2.0 * r.u_hi};
    }

    long precision() const override { return inner_->precision(); }

    std::string describe() const override {
        return std::string(kind_ == Kind::Square ? "square_sub(" : "sqrt_sub(") + inner_->describe() + ")";
    }

private:
    Handle inner_;
    Kind kind_;
};

class PowerHandle final : public FunctionHandle {
public:
    PowerHandle(Handle inner, std::complex<double> c, double beta) : inner_(std::move(inner)), c_(c), beta_(beta) {
        if (inner_->support() != Support::HalfLine) {
            throw Error(ErrorCode::UnsupportedSupport, "power multiplication needs a half-line function");
        }
    }

    Support support() const override { return Support::HalfLine; }

    void derivatives(double x, int m, std::span<std::complex<double>> out) const override {
        check_order(m);
        if (!(x > 0.0)) {
            std::fill(out.begin(), out.begin() + m + 1, std::complex<double>(0.0));
            return;
        }
        std::array<std::complex<double>, kHandleMaxDerivative + 1> fd{};
        inner_->derivatives(x, m, fd);
        // (x^beta)^(j) = beta (beta-1) ... (beta-j+1) x^(beta-j)
        std::array<double, kHandleMaxDerivative + 1> pw{};
        double fall = 1.0;
        for (int j = 0; j <= m; ++j) {
            pw[j] = fall * std::pow(x, beta_ - j);
            fall *= beta_ - j;
        }
        for (int n = 0; n <= m; ++n) {
            std::complex<double> acc = 0.0;
            double binom = 1.0;
            for (int j = 0; j <= n; ++j) {
                acc += binom * pw[j] * fd[n - j];
                binom = binom * (n - j) / (j + 1);
            }
            out[n] = c_ * acc;
        }
    }

    mp::Complex value_mp(const mp::Float& x) const override {
        if (x.sign() <= 0) return {mp::Float(0), mp::Float(0)};
        const mp::Complex f = inner_->value_mp(x);
        mp::PrecisionScope scope(std::max(x.bits(), f.re.bits()));
        const mp::Float xb = beta_ == std::round(beta_) ? mp::pow(x, static_cast<long>(beta_))
                                                        : mp::pow(x, mp::Float(beta_));
        return (f * mp::Complex(c_)) * xb;
    }

    quadrature::ExpMapRange range(double p_min, double p_max, long bits) const override {
        return inner_->range(p_min + beta_, p_max + beta_, bits);
    }

    long precision() const override { return inner_->precision(); }

    std::string describe() const override {
        std::ostringstream os;
        os << "power(" << c_.real();
        if (c_.imag() != 0.0) os << (c_.imag() > 0 ? "+" : "") << c_.imag() << "i";
        os << ", " << beta_ << ", " << inner_->describe() << ")";
        return os.str();
    }

private:
    Handle inner_;
    std::complex<double> c_;
    double beta_;
};

// f(x) + sign f(-x), scaled by `scale`; restricted to x > 0 when `halfline`.
class ReflectionHandle final : public FunctionHandle {
public:
    ReflectionHandle(Handle inner, int sign, double scale, bool halfline)
        : inner_(std::move(inner)), sign_(sign), scale_(scale), halfline_(halfline) {}

    Support support() const override { return halfline_ ? Support::HalfLine : Support::Line; }

    void derivatives(double x, int m, std::span<std::complex<double>> out) const override {
        check_order(m);
        if (halfline_ && !(x > 0.0)) {
            std::fill(out.begin(), out.begin() + m + 1, std::complex<double>(0.0));
            return;
        }
        std::array<std::complex<double>, kHandleMaxDerivative + 1> a{}, b{};
        inner_->derivatives(x, m, a);
        inner_->derivatives(-x, m, b);
        for (int n = 0; n <= m; ++n) {
            const double s = (n % 2 == 0 ? 1.0 : -1.0) * sign_;
            out[n] = scale_ * (a[n] + s * b[n]);
        }
    }

    mp::Complex value_mp(const mp::Float& x) const override {
        if (halfline_ && x.sign() <= 0) return {mp::Float(0), mp::Float(0)};
        const mp::Complex a = inner_->value_mp(x);
        const mp::Complex b = inner_->value_mp(-x);
        mp::PrecisionScope scope(std::max(a.re.bits(), x.bits()));
        mp::Complex s = sign_ > 0 ? a + b : a - b;
        return s * mp::Float(scale_);
    }

    quadrature::ExpMapRange range(double p_min, double p_max, long bits) const override {
        return inner_->range(p_min, p_max, bits);
    }

    long precision() const override { return inner_->precision(); }

    std::string describe() const override {
        if (halfline_) return "fold(" + inner_->describe() + ")";
        return std::string(sign_ > 0 ? "even_part(" : "odd_part(") + inner_->describe() + ")";
    }

private:
    Handle inner_;
    int sign_;
    double scale_;
    bool halfline_;
};

class SumHandle final : public FunctionHandle {
public:
    explicit SumHandle(std::vector<Handle> terms) : terms_(std::move(terms)) {}

    Support support() const override {
        for (const auto& t : terms_) {
            if (t->support() == Support::Line) return Support::Line;
        }
        return Support::HalfLine;
    }

    void derivatives(double x, int m, std::span<std::complex<double>> out) const override {
        check_order(m);
        std::fill(out.begin(), out.begin() + m + 1, std::complex<double>(0.0));
        std::array<std::complex<double>, kHandleMaxDerivative + 1> buf{};
        for (const auto& t : terms_) {
            t->derivatives(x, m, buf);
            for (int n = 0; n <= m; ++n) out[n] += buf[n];
        }
    }

    mp::Complex value_mp(const mp::Float& x) const override {
        mp::PrecisionScope scope(std::max(precision(), x.bits()));
        mp::Complex acc{mp::Float(0), mp::Float(0)};
        for (const auto& t : terms_) acc += t->value_mp(x);
        return acc;
    }

    quadrature::ExpMapRange range(double p_min, double p_max, long bits) const override {
        if (terms_.empty()) return {-1.0, 1.0};
        auto r = terms_.front()->range(p_min, p_max, bits);
        for (const auto& t : terms_) r = unite(r, t->range(p_min, p_max, bits));
        return r;
    }

    long precision() const override {
        long bits = 0;
        for (const auto& t : terms_) bits = std::max(bits, t->precision());
        return bits;
    }

    std::string describe() const override {
        std::string s = "sum(";
        for (std::size_t i = 0; i < terms_.size(); ++i) s += (i ? ", " : "") + terms_[i]->describe();
        return s + ")";
    }

private:
    std::vector<Handle> terms_;
};

// ---- rational helpers ----

using boost::multiprecision::cpp_int;

Rational exact_rational(double d) {
    if (!std::isfinite(d)) throw Error(ErrorCode::InvalidParameter, "non-finite sequence entry");
    if (d == 0.0) return Rational(0);
    int e = 0;
    const double mant = std::frexp(d, &e);
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    e -= 53;
    Rational r{cpp_int(scaled)};
    if (e > 0) r *= Rational(cpp_int(1) << e);
    if (e < 0) r /= Rational(cpp_int(1) << -e);
    return r;
}

double rational_to_double(const Rational& r) {
    using boost::multiprecision::cpp_bin_float_100;
    const cpp_bin_float_100 num(boost::multiprecision::numerator(r));
    const cpp_bin_float_100 den(boost::multiprecision::denominator(r));
    return static_cast<double>(num / den);
}

std::vector<std::vector<cpp_int>> pascal(std::size_t n) {
    std::vector<std::vector<cpp_int>> c(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        c[p].assign(p + 1, cpp_int(1));
        for (std::size_t k = 1; k < p; ++k) c[p][k] = c[p - 1][k - 1] + c[p - 1][k];
    }
    return c;
}

std::vector<Rational> binomial_convolve(std::span<const Rational> a, std::span<const Rational> w) {
    const std::size_t n = a.size();
    if (n == 0) return {};
    const auto c = pascal(n - 1);
    std::vector<Rational> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        Rational acc(0);
        for (std::size_t k = 0; k <= p; ++k) {
            if (p - k >= w.size() || a[k] == 0 || w[p - k] == 0) continue;
            acc += Rational(c[p][k]) * a[k] * w[p - k];
        }
        out[p] = acc;
    }
    return out;
}

template <class Op>
SequenceTarget componentwise(const SequenceTarget& a, Op&& op) {
    std::vector<Rational> re, im;
    for (const auto& z : a.entries) {
        re.push_back(exact_rational(z.real()));
        im.push_back(exact_rational(z.imag()));
    }
    const auto r2 = op(re), i2 = op(im);
    SequenceTarget out{{}, a.h};
    for (std::size_t p = 0; p < r2.size(); ++p) out.entries.emplace_back(rational_to_double(r2[p]), rational_to_double(i2[p]));
    return out;
}

bool has_function(const PipelineValue& v) { return !std::holds_alternative<SequenceTarget>(v); }

Handle as_handle(const PipelineValue& v) {
    if (const auto* f = std::get_if<TestFunction>(&v)) return make_handle(*f);
    return std::get<Handle>(v);
}

}  // namespace

// ---- atom-level operators ----

TestFunction div_x(const TestFunction& f) {
    TestFunction out;
    for (const auto& a : f.atoms()) {
        if (a.coeff.is_zero()) continue;
        if (a.kind == AtomKind::GaussianPoly) {
            throw Error(ErrorCode::UnsupportedAtom, "div_x is only defined for flat atoms");
        }
        if (a.k - 1 < kMinFlatIndex) {
            throw Error(ErrorCode::DepthExceeded, "div_x would create a flat atom below k = -8");
        }
        // (-x)^k / x = -(-x)^(k-1) for the reflected family.
        out.add(a.kind, a.k - 1, a.kind == AtomKind::FlatReflected ? negated(a.coeff) : a.coeff);
    }
    return out;
}

TestFunction mul_x(const TestFunction& f) {
    TestFunction out;
    for (const auto& a : f.atoms()) {
        if (a.coeff.is_zero()) continue;
        out.add(a.kind, a.k + 1, a.kind == AtomKind::FlatReflected ? negated(a.coeff) : a.coeff);
    }
    return out;
}

TestFunction reflect(const TestFunction& f) {
    TestFunction out;
    for (const auto& a : f.atoms()) {
        switch (a.kind) {
        case AtomKind::FlatHalfline: out.add(AtomKind::FlatReflected, a.k, a.coeff); break;
        case AtomKind::FlatReflected: out.add(AtomKind::FlatHalfline, a.k, a.coeff); break;
        case AtomKind::GaussianPoly: out.add(a.kind, a.k, a.k % 2 == 0 ? a.coeff : negated(a.coeff)); break;
        }
    }
    return out;
}

std::pair<TestFunction, TestFunction> even_odd_parts(const TestFunction& f) {
    TestFunction even, odd;
    for (const auto& a : f.atoms()) {
        if (a.coeff.is_zero()) continue;
        if (a.kind == AtomKind::GaussianPoly) {
            (a.k % 2 == 0 ? even : odd).add(a.kind, a.k, a.coeff);
            continue;
        }
        const AtomKind mirror = a.kind == AtomKind::FlatHalfline ? AtomKind::FlatReflected : AtomKind::FlatHalfline;
        const mp::Complex half = halved(a.coeff);
        even.add(a.kind, a.k, half);
        even.add(mirror, a.k, half);
        odd.add(a.kind, a.k, half);
        odd.add(mirror, a.k, negated(half));
    }
    return {even, odd};
}

// ---- handles ----

std::complex<double> FunctionHandle::value(double x) const {
    std::complex<double> v[1];
    derivatives(x, 0, v);
    return v[0];
}

std::complex<double> FunctionHandle::derivative(int m, double x) const {
    check_order(m);
    std::array<std::complex<double>, kHandleMaxDerivative + 1> out{};
    derivatives(x, m, out);
    return out[m];
}

Handle make_handle(const TestFunction& f) { return std::make_shared<AtomHandle>(f); }

Handle sqrt_sub(const Handle& f) {
    return std::make_shared<SubstitutionHandle>(f, SubstitutionHandle::Kind::Sqrt);
}
Handle sqrt_sub(const TestFunction& f) { return sqrt_sub(make_handle(f)); }

Handle square_sub_weighted(const Handle& f) {
    return power_multiply(std::make_shared<SubstitutionHandle>(f, SubstitutionHandle::Kind::Square), 2.0, 1.0);
}
Handle square_sub_weighted(const TestFunction& f) { return square_sub_weighted(make_handle(f)); }

Handle square_sub_odd(const Handle& f) {
    return power_multiply(std::make_shared<SubstitutionHandle>(f, SubstitutionHandle::Kind::Square), 2.0, 0.0);
}
Handle square_sub_odd(const TestFunction& f) { return square_sub_odd(make_handle(f)); }

Handle inverse_square_sub(const Handle& f) { return power_multiply(sqrt_sub(f), 0.5, -0.5); }

Handle fold(const Handle& f) { return std::make_shared<ReflectionHandle>(f, 1, 1.0, true); }
Handle fold(const TestFunction& f) { return fold(make_handle(f)); }

Handle symmetrize(const Handle& f, int sign) {
    if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidParameter, "symmetrize sign must be +1 or -1");
    return std::make_shared<ReflectionHandle>(f, sign, 0.5, false);
}

Handle power_multiply(const Handle& f, std::complex<double> c, double beta) {
    return std::make_shared<PowerHandle>(f, c, beta);
}
Handle mul_x(const Handle& f) { return power_multiply(f, 1.0, 1.0); }
Handle div_x(const Handle& f) { return power_multiply(f, 1.0, -1.0); }

Handle sum(std::vector<Handle> terms) { return std::make_shared<SumHandle>(std::move(terms)); }

// On the line the two half-lines are integrated as separate slots and combined
// afterwards, so that moments which cancel to zero still see the size of the
// halves in the convergence test.
std::vector<std::complex<double>> handle_moments(const FunctionHandle& f, int p_max) {
    if (p_max < 0) throw Error(ErrorCode::InvalidParameter, "negative moment index");
    const bool line = f.support() == Support::Line;
    const std::size_t n = static_cast<std::size_t>(p_max) + 1;
    quadrature::TrapezoidOptions opt;
    opt.range = f.range(0.0, p_max, 60);
    const auto raw = quadrature::exp_map_trapezoid(
        line ? 2 * n : n,
        [&](double x, std::span<std::complex<double>> out) {
            const std::complex<double> fp = f.value(x);
            const std::complex<double> fm = line ? f.value(-x) : 0.0;
            double xp = x;
            for (std::size_t p = 0; p < n; ++p) {
                out[p] = xp * fp;
                if (line) out[n + p] = xp * fm;
                xp *= x;
            }
        },
        opt);
    std::vector<std::complex<double>> mu(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(n));
    if (line) {
        for (std::size_t p = 0; p < n; ++p) mu[p] += (p % 2 == 0 ? 1.0 : -1.0) * raw[n + p];
    }
    return mu;
}

std::vector<mp::Complex> handle_moments_mp(const FunctionHandle& f, int p_max, long bits) {
    if (p_max < 0) throw Error(ErrorCode::InvalidParameter, "negative moment index");
    if (bits <= 0) bits = std::max(mp::working_bits(), f.precision());
    mp::PrecisionScope scope(bits);
    const bool line = f.support() == Support::Line;
    const std::size_t n = static_cast<std::size_t>(p_max) + 1;
    quadrature::TrapezoidOptions opt;
    opt.range = f.range(0.0, p_max, bits);
    auto raw = quadrature::exp_map_trapezoid_mp(
        line ? 2 * n : n,
        [&](const mp::Float& x, std::span<mp::Complex> out) {
            const mp::Complex fp = f.value_mp(x);
            const mp::Complex fm = line ? f.value_mp(-x) : mp::Complex{};
            mp::Float xp = x;
            for (std::size_t p = 0; p < n; ++p) {
                out[p] = fp * xp;
                if (line) out[n + p] = fm * xp;
                xp *= x;
            }
        },
        opt);
    raw.resize(line ? 2 * n : n);
    std::vector<mp::Complex> mu(std::make_move_iterator(raw.begin()),
                                std::make_move_iterator(raw.begin() + static_cast<std::ptrdiff_t>(n)));
    if (line) {
        for (std::size_t p = 0; p < n; ++p) {
            if (p % 2 == 0) {
                mu[p] += raw[n + p];
            } else {
                mu[p] -= raw[n + p];
            }
        }
    }
    return mu;
}

// ---- sequence maps ----

SequenceTarget seq_te(const SequenceTarget& a) {
    SequenceTarget out{{}, a.h};
    for (std::size_t p = 0; p < a.entries.size(); p += 2) out.entries.push_back(a.entries[p]);
    return out;
}

SequenceTarget seq_to(const SequenceTarget& a) {
    SequenceTarget out{{}, a.h};
    for (std::size_t p = 1; p < a.entries.size(); p += 2) out.entries.push_back(a.entries[p]);
    return out;
}

SequenceTarget seq_interleave(const SequenceTarget& a) {
    SequenceTarget out{{}, a.h};
    for (const auto& z : a.entries) {
        out.entries.push_back(z);
        out.entries.push_back(0.0);
    }
    return out;
}

namespace {

// Multiplies entry p by i^(quarter * p) with exact component swaps.
SequenceTarget rotate(const SequenceTarget& a, int quarter) {
    SequenceTarget out{a.entries, a.h};
    for (std::size_t p = 0; p < out.entries.size(); ++p) {
        const double re = a.entries[p].real(), im = a.entries[p].imag();
        switch ((quarter * static_cast<int>(p % 4) + 4) % 4) {
        case 0: out.entries[p] = {re, im}; break;
        case 1: out.entries[p] = {-im, re}; break;
        case 2: out.entries[p] = {-re, -im}; break;
        case 3: out.entries[p] = {im, -re}; break;
        }
    }
    return out;
}

}  // namespace

SequenceTarget sign_twist(const SequenceTarget& a) { return rotate(a, -1); }
SequenceTarget sign_untwist(const SequenceTarget& a) { return rotate(a, 1); }

// ---- multiplier shift ----

std::vector<Rational> builtin_inverse_taylor(BuiltinMultiplier g, int P) {
    if (P < 0) throw Error(ErrorCode::InvalidParameter, "negative multiplier order");
    std::vector<Rational> c(static_cast<std::size_t>(P) + 1, Rational(0));
    for (int k = 0; k <= P; ++k) {
        if (g == BuiltinMultiplier::Exp) c[k] = Rational(k % 2 == 0 ? 1 : -1);
    }
    if (g == BuiltinMultiplier::One) c[0] = Rational(1);
    return c;
}

std::vector<Rational> invert_taylor(std::span<const Rational> c, int P) {
    if (c.empty() || c[0] == 0) throw Error(ErrorCode::SingularMultiplier, "1/G must not vanish at 0 (c_0 = 0)");
    const auto binom = pascal(static_cast<std::size_t>(P));
    std::vector<Rational> g(static_cast<std::size_t>(P) + 1);
    g[0] = Rational(1) / c[0];
    for (int p = 1; p <= P; ++p) {
        Rational acc(0);
        for (int n = 0; n < p; ++n) {
            const auto j = static_cast<std::size_t>(p - n);
            if (j < c.size() && c[j] != 0) acc += Rational(binom[p][n]) * g[n] * c[j];
        }
        g[p] = -acc / c[0];
    }
    return g;
}

std::vector<Rational> multiplier_shift(std::span<const Rational> a, std::span<const Rational> c) {
    if (c.empty() || c[0] == 0) throw Error(ErrorCode::SingularMultiplier, "1/G must not vanish at 0 (c_0 = 0)");
    return binomial_convolve(a, c);
}

std::vector<Rational> multiplier_unshift(std::span<const Rational> b, std::span<const Rational> g) {
    return binomial_convolve(b, g);
}

SequenceTarget multiplier_shift(const SequenceTarget& a, std::span<const Rational> c) {
    return componentwise(a, [&](const std::vector<Rational>& v) { return multiplier_shift(v, c); });
}

SequenceTarget multiplier_unshift(const SequenceTarget& b, std::span<const Rational> g) {
    return componentwise(b, [&](const std::vector<Rational>& v) { return multiplier_unshift(v, g); });
}

// ---- pipelines ----

std::string_view to_string(OperatorTag tag) {
    switch (tag) {
    case OperatorTag::div_x: return "div_x";
    case OperatorTag::mul_x: return "mul_x";
    case OperatorTag::sqrt_sub: return "sqrt_sub";
    case OperatorTag::square_sub: return "square_sub";
    case OperatorTag::even_part: return "even_part";
    case OperatorTag::odd_part: return "odd_part";
    case OperatorTag::fold: return "fold";
    case OperatorTag::te: return "te";
    case OperatorTag::to: return "to";
    case OperatorTag::interleave_even: return "interleave_even";
    case OperatorTag::sign_twist: return "sign_twist";
    }
    return "?";
}

OperatorTag parse_operator_tag(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(OperatorTag::sign_twist); ++i) {
        const auto tag = static_cast<OperatorTag>(i);
        if (to_string(tag) == name) return tag;
    }
    throw Error(ErrorCode::ParseError, "unknown operator '" + name + "'");
}

std::vector<OperatorTag> parse_pipeline(const std::string& comma_list) {
    std::vector<OperatorTag> tags;
    std::stringstream ss(comma_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        tags.push_back(parse_operator_tag(item.substr(b, e - b + 1)));
    }
    return tags;
}

SequenceTarget moment_sequence(const PipelineValue& v, int p_max, double h) {
    if (const auto* s = std::get_if<SequenceTarget>(&v)) return *s;
    SequenceTarget out = SequenceTarget::zeros(p_max, h);
    if (const auto* f = std::get_if<TestFunction>(&v)) {
        for (int p = 0; p <= p_max; ++p) out.entries[p] = f->moment(p);
        return out;
    }
    const auto mu = handle_moments_mp(*std::get<Handle>(v), p_max);
    for (int p = 0; p <= p_max; ++p) out.entries[p] = mu[p].to_complex();
    return out;
}

PipelineValue apply(const PipelineValue& v, OperatorTag tag, const PipelineOptions& opt) {
    auto need_function = [&] {
        if (!has_function(v)) {
            throw Error(ErrorCode::InvalidParameter, std::string(to_string(tag)) + " needs a function, got a sequence");
        }
    };
    const auto* tf = std::get_if<TestFunction>(&v);
    switch (tag) {
    case OperatorTag::div_x:
        need_function();
        if (tf) return div_x(*tf);
        return div_x(as_handle(v));
    case OperatorTag::mul_x:
        need_function();
        if (tf) return mul_x(*tf);
        return mul_x(as_handle(v));
    case OperatorTag::sqrt_sub: need_function(); return sqrt_sub(as_handle(v));
    case OperatorTag::square_sub: need_function(); return square_sub_weighted(as_handle(v));
    case OperatorTag::even_part:
    case OperatorTag::odd_part: {
        need_function();
        const bool even = tag == OperatorTag::even_part;
        if (tf) {
            auto parts = even_odd_parts(*tf);
            return even ? parts.first : parts.second;
        }
        return symmetrize(as_handle(v), even ? 1 : -1);
    }
    case OperatorTag::fold: need_function(); return fold(as_handle(v));
    case OperatorTag::te: return seq_te(moment_sequence(v, opt.p_max, opt.h));
    case OperatorTag::to: return seq_to(moment_sequence(v, opt.p_max, opt.h));
    case OperatorTag::interleave_even: return seq_interleave(moment_sequence(v, opt.p_max, opt.h));
    case OperatorTag::sign_twist: return sign_twist(moment_sequence(v, opt.p_max, opt.h));
    }
    throw Error(ErrorCode::InvalidParameter, "unhandled operator");
}

PipelineValue apply_pipeline(PipelineValue v, std::span<const OperatorTag> tags, const PipelineOptions& opt) {
    for (const auto tag : tags) v = apply(v, tag, opt);
    return v;
}

}  // namespace gsm
