#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gsmoment/kernels.hpp"

using namespace gsm;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double close(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
    const auto& k = kernels::scalar_table();
    const std::vector<double> logM{0.0, 0.0, std::log(2.0), std::log(6.0), std::log(24.0)};
    // max_p (p log 3 - log p!) is attained at p = 2 and p = 3: log(9/2)
    CHECK(k.affine_max(logM, std::log(3.0)) == doctest::Approx(std::log(4.5)));
    const std::vector<double> ratios{0.0, std::log(2.0), std::log(3.0)};
    CHECK(k.counting_sum(ratios, std::log(3.0)) == doctest::Approx(std::log(3.0) + std::log(1.5)));
    CHECK(k.min_difference(std::vector<double>{1.0, 3.0, 4.0, 7.0}) == 1.0);
    CHECK(std::isinf(k.min_difference(std::vector<double>{1.0})));
    CHECK(k.min_pair_sum(std::vector<double>{0.0, -1.0, 5.0}, 2) == doctest::Approx(-2.0));

    std::vector<double> out(2);
    k.horner(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{0.0, 2.0}, out);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 17.0);
}

TEST_CASE("vector kernels match the scalar reference") {
    const auto* fast = kernels::avx2_table();
    if (!fast) {
        MESSAGE("vector variant unavailable; only the scalar path is exercised");
        return;
    }
    const auto& ref = kernels::scalar_table();
    std::mt19937_64 rng(2024);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 64u, 65u, 1000u, 4097u}) {
        CAPTURE(n);
        auto v = random_vector(rng, n, -100.0, 100.0);
        std::sort(v.begin(), v.end());
        for (double t : {-3.0, 0.0, 1.5, 40.0}) {
            CHECK(close(fast->affine_max(v, t), ref.affine_max(v, t)) <= 1e-13);
            CHECK(close(fast->counting_sum(v, t), ref.counting_sum(v, t)) <= 1e-13);
        }
        if (n > 1) CHECK(fast->min_difference(v) == ref.min_difference(v));
        for (std::size_t m : {std::size_t{0}, n / 2, n - 1}) CHECK(fast->min_pair_sum(v, m) == ref.min_pair_sum(v, m));

        const auto coeff = random_vector(rng, 1 + n % 13, -1.0, 1.0);
        const auto xs = random_vector(rng, n, -2.0, 2.0);
        std::vector<double> a(n), b(n);
        fast->horner(coeff, xs, a);
        ref.horner(coeff, xs, b);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(a[i], b[i]) <= 1e-13);
    }
}

TEST_CASE("active table is one of the two variants") {
    const auto& a = kernels::active();
    const bool known = &a == &kernels::scalar_table() || &a == kernels::avx2_table();
    CHECK(known);
}
