#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gsmoment/error.hpp"
#include "gsmoment/transforms.hpp"
#include "oracles.hpp"

using namespace gsm;

namespace {

TestFunction atom(int k) { return TestFunction::single(AtomKind::FlatHalfline, k); }
TestFunction gauss(int k) { return TestFunction::single(AtomKind::GaussianPoly, k); }

// Moment of a handle by test-side quadrature of its pointwise values.
std::complex<double> quad_moment(const Handle& h, int p) {
    if (h->support() == Support::HalfLine) {
        return oracle::halfline_complex([&](double x) { return std::pow(x, p) * h->value(x); });
    }
    return oracle::line_moment([&](double x) { return h->value(x); }, p);
}

std::complex<double> quad_moment(const TestFunction& f, int p) {
    return oracle::line_moment([&](double x) { return f.eval_derivative(0, x); }, p);
}

SequenceTarget seq(std::initializer_list<double> v) {
    SequenceTarget t;
    for (double x : v) t.entries.emplace_back(x);
    return t;
}

SequenceTarget random_seq(int P, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    SequenceTarget t;
    for (int p = 0; p <= P; ++p) t.entries.emplace_back(n(rng), n(rng));
    return t;
}

}  // namespace

TEST_CASE("div_x and mul_x") {
    const TestFunction d = div_x(atom(1));
    REQUIRE(d.atoms().size() == 1);
    CHECK(d.atoms()[0].k == 0);
    CHECK(d.moment(2).real() == doctest::Approx(oracle::flat_moment(3)));
    CHECK(atom(1).moment(1).real() == doctest::Approx(oracle::flat_moment(3)));
    CHECK(div_x(TestFunction{}).is_zero());

    const TestFunction m1 = div_x(atom(0));
    CHECK(m1.atoms()[0].k == -1);
    CHECK(oracle::rel(quad_moment(m1, 1), atom(0).moment(0)) <= 1e-10);

    CHECK(mul_x(atom(0)).atoms()[0].k == 1);
    CHECK(mul_x(atom(0)).moment(0).real() == doctest::Approx(oracle::flat_moment(2)));
    CHECK(mul_x(div_x(atom(1))).atoms()[0].k == 1);

    CHECK_THROWS_AS((void)div_x(gauss(1)), Error);
    CHECK_THROWS_AS((void)div_x(atom(-8)), Error);
}

TEST_CASE("substitutions") {
    const Handle s = sqrt_sub(atom(0));
    CHECK(oracle::rel(quad_moment(s, 0), 2.0 * atom(0).moment(1)) <= 1e-10);
    CHECK(oracle::rel(quad_moment(s, 3), 2.0 * atom(0).moment(7)) <= 1e-10);
    CHECK(std::abs(sqrt_sub(TestFunction{})->value(1.3)) == 0.0);

    const Handle te = square_sub_weighted(atom(0));
    CHECK(oracle::rel(quad_moment(te, 0), atom(0).moment(0)) <= 1e-10);
    const Handle to = square_sub_odd(atom(0));
    CHECK(oracle::rel(quad_moment(to, 5), atom(0).moment(2)) <= 1e-10);
    MESSAGE("odd moment of T_e a_0 (no identity): " << quad_moment(te, 1).real());

    const Handle inv = inverse_square_sub(make_handle(atom(1)));
    for (int p = 0; p <= 4; ++p) CHECK(oracle::rel(quad_moment(inv, p), atom(1).moment(2 * p)) <= 1e-10);
}

TEST_CASE("handle derivatives against finite differences") {
    const Handle te = square_sub_weighted(atom(1));
    const double x = 0.9, h = 1e-4;
    std::vector<std::complex<double>> d(3);
    te->derivatives(x, 2, d);
    const auto fd1 = (te->value(x + h) - te->value(x - h)) / (2 * h);
    const auto fd2 = (te->value(x + h) - 2.0 * te->value(x) + te->value(x - h)) / (h * h);
    CHECK(oracle::rel(d[1], fd1) <= 1e-6);
    CHECK(oracle::rel(d[2], fd2) <= 1e-5);
}

TEST_CASE("even and odd parts") {
    {
        const auto [e, o] = even_odd_parts(gauss(0));
        CHECK(e.atoms().size() == 1);
        CHECK(o.is_zero());
    }
    {
        const auto [e, o] = even_odd_parts(gauss(1));
        CHECK(e.is_zero());
        CHECK(o.atoms().size() == 1);
    }
    const auto [e, o] = even_odd_parts(atom(0));
    CHECK(std::abs(quad_moment(e, 3)) <= 1e-10);
    CHECK(std::abs(quad_moment(o, 2)) <= 1e-10);
    for (double x : {-1.5, 0.3, 2.0}) {
        CHECK(std::abs(e.eval_derivative(0, x) + o.eval_derivative(0, x) - atom(0).eval_derivative(0, x)) <= 1e-17);
    }
}

TEST_CASE("fold") {
    CHECK(oracle::rel(quad_moment(fold(gauss(0)), 0), std::sqrt(M_PI)) <= 1e-12);
    for (int p = 0; p <= 3; ++p) CHECK(std::abs(handle_moments(*fold(gauss(1)), 2 * p + 1)[2 * p]) <= 1e-12);
    const Handle f = fold(atom(0));
    for (double x : {0.2, 1.0, 4.0}) CHECK(std::abs(f->value(x) - atom(0).eval_derivative(0, x)) <= 1e-17);
}

TEST_CASE("library moments of handles match the closed forms") {
    const auto te = handle_moments(*square_sub_weighted(atom(2)), 20);
    for (int p = 0; p <= 10; ++p) CHECK(oracle::rel(te[2 * p], atom(2).moment(p)) <= 1e-10);
    const auto mp = handle_moments_mp(*square_sub_odd(atom(2)), 21, 200);
    for (int p = 0; p <= 10; ++p) CHECK(oracle::rel(mp[2 * p + 1].to_complex(), atom(2).moment(p)) <= 1e-14);
}

TEST_CASE("sequence maps") {
    const auto a = seq({0, 1, 2, 3, 4, 5});
    CHECK(seq_te(a).entries == seq({0, 2, 4}).entries);
    CHECK(seq_to(a).entries == seq({1, 3, 5}).entries);
    CHECK(seq_interleave(seq({7, 9})).entries == seq({7, 0, 9, 0}).entries);
    const auto r = random_seq(32, 9);
    CHECK(seq_te(seq_interleave(r)).entries == r.entries);

    const auto tw = sign_twist(seq({1, 1, 1, 1})).entries;
    using C = std::complex<double>;
    CHECK(tw == std::vector<C>{C(1, 0), C(0, -1), C(-1, 0), C(0, 1)});
    CHECK(sign_twist(sign_twist(sign_twist(sign_twist(r)))).entries == r.entries);
    CHECK(sign_untwist(sign_twist(r)).entries == r.entries);
    CHECK(sign_twist(SequenceTarget::zeros(5)).is_zero());
}

TEST_CASE("multiplier shift") {
    const int P = 32;
    std::vector<Rational> a(P + 1);
    for (int p = 0; p <= P; ++p) a[p] = p + 1;

    const auto one = builtin_inverse_taylor(BuiltinMultiplier::One, P);
    CHECK(multiplier_shift(a, one) == a);

    const auto c = builtin_inverse_taylor(BuiltinMultiplier::Exp, P);
    for (int k = 0; k <= P; ++k) CHECK(c[k] == Rational(k % 2 ? -1 : 1));
    const auto b = multiplier_shift(a, c);
    CHECK(b == oracle::binomial_transform(a, c));
    CHECK(multiplier_unshift(b, invert_taylor(c, P)) == a);
    CHECK(oracle::binomial_solve(b, c) == a);

    const std::vector<Rational> zero(P + 1);
    CHECK(multiplier_shift(zero, c) == zero);
    const std::vector<Rational> singular{0, 1, 2};
    CHECK_THROWS_AS((void)invert_taylor(singular, 2), Error);
}

TEST_CASE("multiplier shift on complex targets") {
    const auto r = random_seq(12, 4);
    const auto c = builtin_inverse_taylor(BuiltinMultiplier::Exp, 12);
    const auto back = multiplier_unshift(multiplier_shift(r, c), invert_taylor(c, 12));
    // b is rounded to double before the inverse step; the binomial sums amplify that by up to 2^P
    for (int p = 0; p <= 12; ++p) CHECK(oracle::rel(back.entries[p], r.entries[p]) <= 1e-9);
}

TEST_CASE("operator pipelines") {
    const auto tags = parse_pipeline("mul_x,square_sub,te");
    REQUIRE(tags.size() == 3);
    const PipelineValue v = apply_pipeline(atom(0), tags, {8, 1.0});
    const auto& s = std::get<SequenceTarget>(v);
    // te(moments of T_e a_1) = moments of a_1
    for (int p = 0; p <= 4; ++p) CHECK(oracle::rel(s.entries[p], atom(1).moment(p)) <= 1e-10);
    CHECK_THROWS_AS((void)parse_pipeline("mul_x,nope"), Error);
    for (auto t : parse_pipeline("div_x,mul_x,sqrt_sub,square_sub,even_part,odd_part,fold,te,to,interleave_even,"
                                 "sign_twist")) {
        CHECK(parse_operator_tag(std::string(to_string(t))) == t);
    }
}
