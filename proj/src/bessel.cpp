#include "gsmoment/bessel.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

#include "gsmoment/error.hpp"

namespace gsm::bessel {

namespace {

constexpr int kMaxCachedOrder = 170;

struct K01 {
    mp::Float k0;
    mp::Float k1;
};

K01 k01(const mp::Float& x) {
    const double xd = x.to_double();
    if (!(xd > 0.0)) throw Error(ErrorCode::InvalidParameter, "Bessel K needs x > 0");
    const long guard = 32 + static_cast<long>(std::ceil(3.0 * xd / std::log(2.0)));
    const long bits = mp::working_bits();
    mp::Float k0_wide, k1_wide;
    {
        mp::PrecisionScope scope(bits + guard);
        const mp::Float xx = mp::rounded(x);
        const mp::Float y = xx * xx / mp::Float(4);
        mp::Float term(1);      // y^k / (k!)^2
        mp::Float i0(1);
        mp::Float i1(1);        // I_1 * 2/x = sum y^k / (k!(k+1)!)
        mp::Float i1_term(1);
        mp::Float harmonic(0);
        mp::Float h_sum(0);     // sum H_k y^k / (k!)^2
        const mp::Float eps = mp::pow(mp::Float(2), -(bits + guard));
        for (long k = 1;; ++k) {
            term *= y;
            term /= mp::Float(k * k);
            harmonic += mp::Float(1) / mp::Float(k);
            i0 += term;
            h_sum += harmonic * term;
            i1_term *= y;
            i1_term /= mp::Float(k * (k + 1));
            i1 += i1_term;
            if (term < eps * i0 && k > 4) break;
        }
        i1 *= xx / mp::Float(2);
        const mp::Float k0 = -(mp::log(xx / mp::Float(2)) + mp::euler_gamma()) * i0 + h_sum;
        const mp::Float k1 = (mp::Float(1) / xx - i1 * k0) / i0;
        k0_wide = k0;
        k1_wide = k1;
    }
    return {mp::rounded(k0_wide), mp::rounded(k1_wide)};
}

}  // namespace

std::vector<mp::Float> k_sequence(const mp::Float& x, int n_max) {
    if (n_max < 0) throw Error(ErrorCode::InvalidParameter, "negative Bessel order");
    auto [k0, k1] = k01(x);
    std::vector<mp::Float> out;
    out.reserve(static_cast<size_t>(n_max) + 1);
    out.push_back(k0);
    if (n_max >= 1) out.push_back(k1);
    const mp::Float two_over_x = mp::Float(2) / x;
    for (int n = 1; n < n_max; ++n) {
        out.push_back(out[n - 1] + mp::Float(n) * two_over_x * out[n]);
    }
    return out;
}

mp::Float k(int n, const mp::Float& x) {
    n = std::abs(n);
    return k_sequence(x, n).back();
}

double k_at_two(int n) {
    static const std::array<double, kMaxCachedOrder + 1> table = [] {
        std::array<double, kMaxCachedOrder + 1> t{};
        mp::PrecisionScope scope(192);
        const auto seq = k_sequence(mp::Float(2), kMaxCachedOrder);
        for (int i = 0; i <= kMaxCachedOrder; ++i) t[i] = seq[i].to_double();
        return t;
    }();
    n = std::abs(n);
    if (n > kMaxCachedOrder) return HUGE_VAL;
    return table[n];
}

double flat_moment(int nu) { return 2.0 * k_at_two(nu); }

mp::Float flat_moment_mp(int nu) { return mp::Float(2) * k(nu, mp::Float(2)); }

}  // namespace gsm::bessel
