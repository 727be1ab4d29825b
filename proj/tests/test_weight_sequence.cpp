#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gsmoment/conditions.hpp"
#include "gsmoment/error.hpp"
#include "gsmoment/weight_sequence.hpp"
#include "oracles.hpp"

using namespace gsm;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidParameter;
}

Verdict verdict(const WeightSequence& ws, const std::string& name) {
    return check_condition(ws, ConditionId::parse(name)).verdict;
}

}  // namespace

TEST_CASE("closed-form generators") {
    const WeightSequence g1(SequenceSpec::gevrey(1.0));
    CHECK(g1.log_M(3) == doctest::Approx(std::log(6.0)));
    const WeightSequence q2(SequenceSpec::q_gevrey(2.0));
    CHECK(q2.log_M(3) == doctest::Approx(9.0 * std::log(2.0)));
    CHECK(q2.log_ratio(4) == doctest::Approx(7.0 * std::log(2.0)));
    const WeightSequence g2(SequenceSpec::gevrey(2.0));
    CHECK(g2.log_ratio(3) == doctest::Approx(2.0 * std::log(3.0)));
    CHECK(g2.log_M(0) == 0.0);
    CHECK(g2.horizon() == kDefaultHorizon);
}

TEST_CASE("expression generator agrees with gevrey") {
    const WeightSequence e(SequenceSpec::expr("2*lgamma(p+1)", 256));
    const WeightSequence g(SequenceSpec::gevrey(2.0, 256));
    for (int p : {1, 10, 100, 256}) CHECK(e.log_M(p) == doctest::Approx(g.log_M(p)).epsilon(1e-12));
}

TEST_CASE("invalid sequences are rejected") {
    CHECK(code_of([] { WeightSequence(SequenceSpec::table({0.0, 0.0, -1.0})); }) == ErrorCode::NotAWeightSequence);
    CHECK(code_of([] { WeightSequence(SequenceSpec::gevrey(0.0)); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { WeightSequence(SequenceSpec::q_gevrey(1.0)); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { WeightSequence(SequenceSpec::gevrey(1.0, 32)); }) == ErrorCode::InvalidParameter);
    std::vector<double> shifted(100);
    for (int p = 0; p < 100; ++p) shifted[p] = 1.0 + std::lgamma(p + 1.0);
    CHECK(code_of([&] { WeightSequence(SequenceSpec::table(shifted)); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([] { WeightSequence(SequenceSpec::expr("p*(", 128)); }) == ErrorCode::ParseError);
}

TEST_CASE("index range") {
    const WeightSequence ws(SequenceSpec::gevrey(1.0, 128));
    CHECK(code_of([&] { (void)ws.log_ratio(0); }) == ErrorCode::IndexOutOfHorizon);
    CHECK(code_of([&] { (void)ws.log_M(129); }) == ErrorCode::IndexOutOfHorizon);
    CHECK(code_of([&] { (void)ws.log_M(-1); }) == ErrorCode::IndexOutOfHorizon);
}

TEST_CASE("associated function") {
    const WeightSequence g1(SequenceSpec::gevrey(1.0));
    CHECK(associated_function(g1, 1.0) == 0.0);
    CHECK(associated_function(g1, 0.0) == 0.0);
    CHECK(associated_function(g1, 10.0) ==
          doctest::Approx(oracle::brute_associated(g1.log_M_values(), std::log(10.0))).epsilon(1e-13));
    CHECK(code_of([&] { (void)associated_function(g1, 1e6); }) == ErrorCode::HorizonExceeded);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const WeightSequence ws(SequenceSpec::q_gevrey(1.2 + u(rng), 512));
        const double log_t = u(rng) * ws.log_ratio(ws.horizon());
        const double want = oracle::brute_associated(ws.log_M_values(), log_t);
        CHECK(std::fabs(associated_function_log(ws, log_t) - want) <= 1e-12 * std::max(1.0, want));
    }
}

TEST_CASE("associated function needs log-convexity") {
    std::vector<double> v(100);
    for (int p = 0; p < 100; ++p) v[p] = std::lgamma(p + 1.0) + ((p % 2) ? 0.3 : 0.0);
    const WeightSequence ws(SequenceSpec::table(v));
    CHECK_FALSE(ws.log_convex());
    CHECK(code_of([&] { (void)associated_function(ws, 3.0); }) == ErrorCode::RequiresLogConvexity);
    CHECK(verdict(ws, "lc") == Verdict::Fails);
}

TEST_CASE("classifier on the gevrey family") {
    for (double a : {1.0, 2.0, 3.0}) {
        CAPTURE(a);
        const WeightSequence ws(SequenceSpec::gevrey(a));
        CHECK(verdict(ws, "beta2_1") == Verdict::Fails);
        CHECK(verdict(ws, "lc") == Verdict::Holds);
        CHECK(verdict(ws, "mg") == Verdict::Holds);
    }
    CHECK(verdict(WeightSequence(SequenceSpec::gevrey(3.0)), "gamma2") == Verdict::Holds);
    CHECK(verdict(WeightSequence(SequenceSpec::gevrey(2.0)), "gamma2") == Verdict::Fails);
    const WeightSequence g25(SequenceSpec::gevrey(2.5));
    CHECK(verdict(g25, "gamma_r(2.4)") == Verdict::Holds);
    CHECK(verdict(g25, "gamma_r(2.6)") == Verdict::Fails);
}

TEST_CASE("classifier on the q-gevrey family") {
    const WeightSequence ws(SequenceSpec::q_gevrey(2.0));
    CHECK(verdict(ws, "beta2_0") == Verdict::Holds);
    CHECK(verdict(ws, "beta2") == Verdict::Holds);
    CHECK(verdict(ws, "mg") == Verdict::Fails);
    CHECK(verdict(ws, "dc") == Verdict::Holds);
    CHECK(verdict(ws, "gamma_r(3)") == Verdict::Holds);
}

TEST_CASE("short tables cannot be decided on tail conditions") {
    std::vector<double> v(80);
    for (int p = 0; p < 80; ++p) v[p] = 2.0 * std::lgamma(p + 1.0);
    const WeightSequence ws(SequenceSpec::table(v));
    CHECK(verdict(ws, "gamma1") == Verdict::Inconclusive);
    CHECK(verdict(ws, "lc") == Verdict::Holds);
}

TEST_CASE("reports carry three horizons") {
    const WeightSequence ws(SequenceSpec::gevrey(3.0));
    const auto r = check_condition(ws, ConditionId::parse("gamma2"));
    REQUIRE(r.horizons.size() == 3);
    CHECK(r.horizons[2] == ws.horizon());
    CHECK(r.horizons[0] == ws.horizon() / 4);
    CHECK(r.trace.size() == 3);
}

TEST_CASE("condition names round-trip") {
    for (const auto& id : standard_conditions()) CHECK(ConditionId::parse(id.name()).name() == id.name());
    CHECK(ConditionId::parse("gamma_r(1.5)").root() == 1.5);
    CHECK(code_of([] { (void)ConditionId::parse("gamma7"); }) == ErrorCode::ParseError);
}

TEST_CASE("classification is deterministic") {
    const WeightSequence ws(SequenceSpec::q_gevrey(1.5));
    const auto a = classify(ws, standard_conditions());
    const auto b = classify(ws, standard_conditions());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].verdict == b[i].verdict);
        CHECK(a[i].trace == b[i].trace);
    }
}
