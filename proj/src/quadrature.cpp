#include "gsmoment/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/error.hpp"

namespace gsm::quadrature {

namespace {

// integrate() is not const in this Boost version, so keep one engine per thread.
boost::math::quadrature::exp_sinh<double>& exp_sinh_engine() {
    thread_local boost::math::quadrature::exp_sinh<double> engine(12);
    return engine;
}

}  // namespace

Result halfline(const std::function<double(double)>& f, Tolerance tol) {
    Result out;
    // exp_sinh measures its termination criterion relative to the L1 norm.
    const double goal = std::max(tol.relative, 1e-15);
    out.value = exp_sinh_engine().integrate(f, goal, &out.error, &out.l1);
    return out;
}

ComplexResult halfline(const std::function<std::complex<double>(double)>& f, Tolerance tol) {
    using Real = std::function<double(double)>;
    const Result re = halfline(Real([&](double x) { return f(x).real(); }), tol);
    const Result im = halfline(Real([&](double x) { return f(x).imag(); }), tol);
    return {{re.value, im.value}, std::hypot(re.error, im.error), re.l1 + im.l1};
}

ExpMapRange flat_atom_range(double nu_min, double nu_max, long bits) {
    // At x = e^u the integrand is exp(nu u - e^u - e^{-u}), peaked where
    // e^u = (nu + sqrt(nu^2 + 4)) / 2. Walk out until it has dropped bits*ln2.
    const double drop = static_cast<double>(bits) * std::log(2.0) + 40.0;
    auto one = [&](double nu) {
        auto exponent = [&](double u) { return nu * u - std::exp(u) - std::exp(-u); };
        const double u_peak = std::log(0.5 * (nu + std::sqrt(nu * nu + 4.0)));
        const double peak = exponent(u_peak);
        double hi = u_peak + 0.25, lo = u_peak - 0.25;
        while (peak - exponent(hi) < drop) hi += 0.25;
        while (peak - exponent(lo) < drop) lo -= 0.25;
        return ExpMapRange{lo, hi};
    };
    const ExpMapRange a = one(nu_min), b = one(nu_max);
    return {std::min(a.u_lo, b.u_lo), std::max(a.u_hi, b.u_hi)};
}

ExpMapRange gaussian_atom_range(double nu_min, double nu_max, long bits) {
    if (!(nu_min > 0.0)) throw Error(ErrorCode::InvalidParameter, "gaussian range needs nu > 0");
    const double drop = static_cast<double>(bits) * std::log(2.0) + 40.0;
    auto one = [&](double nu) {
        auto exponent = [&](double u) { return nu * u - std::exp(2.0 * u); };
        const double u_peak = 0.5 * std::log(0.5 * nu);
        const double peak = exponent(u_peak);
        double hi = u_peak + 0.25;
        while (peak - exponent(hi) < drop) hi += 0.25;
        // The left tail is a pure exponential in u.
        const double lo = u_peak - std::ceil(4.0 * (drop + nu) / nu) * 0.25;
        return ExpMapRange{lo, hi};
    };
    const ExpMapRange a = one(nu_min), b = one(nu_max);
    return {std::min(a.u_lo, b.u_lo), std::max(a.u_hi, b.u_hi)};
}

std::vector<std::complex<double>> exp_map_trapezoid(
    std::size_t count,
    const std::function<void(double x, std::span<std::complex<double>> out)>& x_times_integrand,
    const TrapezoidOptions& options) {
    const double lo = options.range.u_lo;
    const double hi = options.range.u_hi;
    if (!(hi > lo)) throw Error(ErrorCode::InvalidParameter, "empty trapezoid range");
    std::vector<std::complex<double>> sum(count), buf(count);
    std::vector<double> l1(count, 0.0);
    auto accumulate = [&](double u) {
        x_times_integrand(std::exp(u), buf);
        for (std::size_t i = 0; i < count; ++i) {
            sum[i] += buf[i];
            l1[i] += std::abs(buf[i]);
        }
    };
    double h = options.initial_step;
    const auto n0 = static_cast<long>(std::ceil((hi - lo) / h));
    h = (hi - lo) / static_cast<double>(n0);
    for (long k = 0; k <= n0; ++k) accumulate(lo + static_cast<double>(k) * h);
    std::vector<std::complex<double>> prev(count);
    for (std::size_t i = 0; i < count; ++i) prev[i] = sum[i] * h;
    long n = n0;
    int converged_passes = 0;
    for (int level = 1; level <= options.max_halvings; ++level) {
        for (long k = 0; k < n; ++k) accumulate(lo + (static_cast<double>(k) + 0.5) * h);
        h *= 0.5;
        n *= 2;
        bool ok = true;
        for (std::size_t i = 0; i < count; ++i) {
            const std::complex<double> cur = sum[i] * h;
            const double floor = 1e-15 * l1[i] * h;
            if (std::abs(cur - prev[i]) > options.relative_tolerance * std::abs(cur) + floor) ok = false;
            prev[i] = cur;
        }
        converged_passes = ok ? converged_passes + 1 : 0;
        if (converged_passes >= 2) break;
    }
    return prev;
}

std::vector<mp::Complex> exp_map_trapezoid_mp(
    std::size_t count,
    const std::function<void(const mp::Float& x, std::span<mp::Complex> out)>& x_times_integrand,
    const TrapezoidOptions& options) {
    const double lo = options.range.u_lo;
    const double hi = options.range.u_hi;
    if (!(hi > lo)) throw Error(ErrorCode::InvalidParameter, "empty trapezoid range");
    const long bits = mp::working_bits();
    const double rel_tol = options.relative_tolerance == TrapezoidOptions{}.relative_tolerance
                               ? std::ldexp(1.0, static_cast<int>(16 - bits))
                               : options.relative_tolerance;
    const mp::Float noise = mp::pow(mp::Float(2), 16 - bits);
    std::vector<mp::Complex> sum(count), buf(count);
    std::vector<mp::Float> l1(count, mp::Float(0));
    const mp::Float lo_mp(lo);
    auto accumulate = [&](const mp::Float& u) {
        x_times_integrand(mp::exp(u), buf);
        for (std::size_t i = 0; i < count; ++i) {
            sum[i] += buf[i];
            l1[i] += mp::abs(buf[i].re) + mp::abs(buf[i].im);
        }
    };
    const auto n0 = static_cast<long>(std::ceil((hi - lo) / options.initial_step));
    mp::Float h = mp::Float(hi - lo) / mp::Float(n0);
    for (long k = 0; k <= n0; ++k) accumulate(lo_mp + mp::Float(k) * h);
    std::vector<mp::Complex> prev(count);
    for (std::size_t i = 0; i < count; ++i) prev[i] = sum[i] * h;
    long n = n0;
    int converged_passes = 0;
    const mp::Float half(0.5);
    const mp::Float tol(rel_tol);
    for (int level = 1; level <= options.max_halvings; ++level) {
        for (long k = 0; k < n; ++k) accumulate(lo_mp + (mp::Float(k) + half) * h);
        h *= half;
        n *= 2;
        bool ok = true;
        for (std::size_t i = 0; i < count; ++i) {
            mp::Complex cur = sum[i] * h;
            const mp::Float diff = (cur - prev[i]).abs();
            if (diff > tol * cur.abs() + noise * l1[i] * h) ok = false;
            prev[i] = std::move(cur);
        }
        converged_passes = ok ? converged_passes + 1 : 0;
        if (converged_passes >= 2) break;
    }
    return prev;
}

}  // namespace gsm::quadrature
