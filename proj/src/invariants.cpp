#include "gsmoment/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "gsmoment/conditions.hpp"
#include "gsmoment/error.hpp"
#include "gsmoment/halfplane.hpp"
#include "gsmoment/interpolating.hpp"
#include "gsmoment/kernels.hpp"
#include "gsmoment/moment_solver.hpp"
#include "gsmoment/seminorm.hpp"
#include "gsmoment/transforms.hpp"

namespace gsm {

namespace {

struct Check {
    const char* name;
    std::function<InvariantResult()> run;
};

InvariantResult result(const char* name, bool ok, double measured, double bound) {
    std::ostringstream os;
    os << "measured " << measured << ", bound " << bound;
    return {name, ok, os.str()};
}

double rel(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

InvariantResult associated_function_counting() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> alpha(0.5, 4.0), frac(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const WeightSequence ws(SequenceSpec::gevrey(alpha(rng), 256));
        const double log_t = frac(rng) * ws.log_ratio(ws.horizon());
        double brute = 0.0;
        for (int p = 0; p <= ws.horizon(); ++p) brute = std::max(brute, p * log_t - ws.log_M(p));
        const double m = associated_function_log(ws, log_t);
        worst = std::max(worst, std::fabs(m - brute) / std::max(1.0, brute));
    }
    return result("associated_function_counting", worst <= 1e-12, worst, 1e-12);
}

InvariantResult kernel_equivalence() {
    const auto* fast = kernels::avx2_table();
    if (!fast) return {"kernel_equivalence", true, "no vector variant on this machine"};
    const auto& ref = kernels::scalar_table();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    double worst = 0.0;
    for (int n : {1, 3, 7, 64, 1001}) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        std::sort(v.begin(), v.end());
        auto diff = [&](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
        worst = std::max(worst, diff(fast->affine_max(v, 1.7), ref.affine_max(v, 1.7)));
        worst = std::max(worst, diff(fast->counting_sum(v, 3.0), ref.counting_sum(v, 3.0)));
        if (n > 1) worst = std::max(worst, diff(fast->min_difference(v), ref.min_difference(v)));
        worst = std::max(worst, diff(fast->min_pair_sum(v, n - 1), ref.min_pair_sum(v, n - 1)));
    }
    return result("kernel_equivalence", worst <= 1e-12, worst, 1e-12);
}

InvariantResult classifier_gevrey() {
    const WeightSequence ws(SequenceSpec::gevrey(3.0));
    const auto reps = classify(ws, standard_conditions());
    auto verdict = [&](const std::string& n) {
        for (const auto& r : reps) {
            if (r.condition.name() == n) return r.verdict;
        }
        return Verdict::Inconclusive;
    };
    const bool ok = verdict("lc") == Verdict::Holds && verdict("mg") == Verdict::Holds &&
                    verdict("gamma2") == Verdict::Holds && verdict("gamma_r(3)") == Verdict::Fails &&
                    verdict("beta2_1") == Verdict::Fails;
    return {"classifier_gevrey3", ok, ok ? "lc, mg, gamma2 hold; gamma_r(3), beta2_1 fail" : "verdict mismatch"};
}

InvariantResult classifier_qgevrey() {
    const WeightSequence ws(SequenceSpec::q_gevrey(2.0));
    const auto mg = check_condition(ws, {Condition::mg, 1.0});
    const auto g2 = check_condition(ws, {Condition::gamma2, 2.0});
    const auto b0 = check_condition(ws, {Condition::beta2_0, 1.0});
    const bool ok = mg.verdict == Verdict::Fails && g2.verdict == Verdict::Holds && b0.verdict == Verdict::Holds;
    return {"classifier_qgevrey2", ok, ok ? "mg fails; gamma2, beta2_0 hold" : "verdict mismatch"};
}

InvariantResult interpolation_lemma() {
    bool ok = true;
    std::string detail;
    for (double a : {1.5, 2.5, 3.0}) {
        const auto rep = verify_interpolation_lemma(WeightSequence(SequenceSpec::gevrey(a)));
        for (const auto* it : {&rep.dc, &rep.gamma, &rep.beta2}) {
            if (it->agreement == Agreement::Disagree) {
                ok = false;
                detail += "disagreement at alpha " + std::to_string(a) + "; ";
            }
        }
    }
    return {"interpolation_lemma", ok, ok ? "no decisive disagreement" : detail};
}

InvariantResult moment_closed_form() {
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const auto f = TestFunction::single(AtomKind::FlatHalfline, k);
        const auto q = handle_moments(*make_handle(f), 10);
        for (int p = 0; p <= 10; ++p) worst = std::max(worst, rel(q[p], f.moment(p)));
        const auto g = TestFunction::single(AtomKind::GaussianPoly, k);
        const auto qg = handle_moments(*make_handle(g), 10);
        for (int p = 0; p <= 10; ++p) {
            const auto exact = g.moment(p);
            worst = std::max(worst, exact == 0.0 ? std::abs(qg[p]) : rel(qg[p], exact));
        }
    }
    return result("moment_closed_form", worst <= 1e-10, worst, 1e-10);
}

InvariantResult transform_identities() {
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const auto f = TestFunction::single(AtomKind::FlatHalfline, k);
        const auto te = handle_moments(*square_sub_weighted(f), 21);
        const auto to = handle_moments(*square_sub_odd(f), 21);
        for (int p = 0; p <= 10; ++p) {
            const auto mu = f.moment(p);
            worst = std::max({worst, rel(te[2 * p], mu), rel(to[2 * p + 1], mu)});
            worst = std::max(worst, rel(mul_x(f).moment(p), f.moment(p + 1)));
            if (p >= 1) worst = std::max(worst, rel(div_x(f).moment(p), f.moment(p - 1)));
        }
    }
    return result("transform_identities", worst <= 1e-8, worst, 1e-8);
}

InvariantResult even_odd_reconstruction() {
    TestFunction f;
    f.add(AtomKind::FlatHalfline, 1, mp::Complex(std::complex<double>(1.0, -0.5)));
    f.add(AtomKind::GaussianPoly, 3, mp::Complex(std::complex<double>(0.25, 0.0)));
    f.add(AtomKind::GaussianPoly, 2, mp::Complex(std::complex<double>(-2.0, 1.0)));
    const auto [e, o] = even_odd_parts(f);
    const DerivativeTable tf(f, 0), te(e, 0), to(o, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -6.0 + 12.0 * (i + 0.5) / 1000.0;
        const auto v = tf.value(0, x);
        worst = std::max(worst, std::abs(te.value(0, x) + to.value(0, x) - v) / std::max(1.0, std::abs(v)));
    }
    return result("even_odd_reconstruction", worst <= 1e-14, worst, 1e-14);
}

InvariantResult multiplier_roundtrip() {
    std::vector<Rational> a;
    for (int p = 0; p <= 32; ++p) a.emplace_back(p + 1);
    bool ok = true;
    for (auto g : {BuiltinMultiplier::Exp, BuiltinMultiplier::One}) {
        const auto c = builtin_inverse_taylor(g, 32);
        const auto b = multiplier_shift(a, c);
        ok = ok && multiplier_unshift(b, invert_taylor(c, 32)) == a;
    }
    return {"multiplier_roundtrip", ok, ok ? "exact for G = exp and G = 1 at P = 32" : "rational mismatch"};
}

InvariantResult sequence_maps() {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    SequenceTarget a = SequenceTarget::zeros(32);
    for (auto& z : a.entries) z = {n(rng), n(rng)};
    const bool inter = seq_te(seq_interleave(a)).entries == a.entries;
    const bool twist = sign_twist(sign_twist(sign_twist(sign_twist(a)))).entries == a.entries;
    const bool ok = inter && twist;
    return {"sequence_maps", ok, ok ? "te o interleave = id, twist^4 = id" : "roundtrip mismatch"};
}

InvariantResult solver_residual() {
    const WeightSequence ws(SequenceSpec::gevrey(3.0));
    SolverOptions opt;
    opt.compute_profile = false;
    const auto sol = solve_moments(SequenceTarget::unit(8, 0), ws, opt);
    return result("solver_residual", sol.max_scaled_residual <= 1e-6, sol.max_scaled_residual, 1e-6);
}

InvariantResult solver_linearity() {
    const WeightSequence ws(SequenceSpec::gevrey(3.0));
    SolverOptions opt;
    opt.compute_profile = false;
    opt.initial_bits = opt.max_bits = 256;
    const auto a = random_ball_target(ws, 6, 1.0, 1), b = random_ball_target(ws, 6, 1.0, 2);
    SequenceTarget c = a;
    for (std::size_t p = 0; p < c.entries.size(); ++p) c.entries[p] = 2.0 * a.entries[p] - 3.0 * b.entries[p];
    const auto sa = solve_moments(a, ws, opt), sb = solve_moments(b, ws, opt), sc = solve_moments(c, ws, opt);
    double worst = 0.0;
    for (std::size_t k = 0; k < sc.coefficients.size(); ++k) {
        const auto lin = 2.0 * sa.coefficients[k].to_complex() - 3.0 * sb.coefficients[k].to_complex();
        const auto got = sc.coefficients[k].to_complex();
        worst = std::max(worst, std::abs(got - lin) / std::max(1.0, std::abs(got)));
    }
    return result("solver_linearity", worst <= 1e-12, worst, 1e-12);
}

InvariantResult boundary_identity() {
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const auto f = laplace(TestFunction::single(AtomKind::FlatHalfline, k));
        BoundaryCheck ck;
        boundary_borel(f, 8, &ck);
        worst = std::max(worst, ck.max_discrepancy);
    }
    return result("boundary_identity", worst <= 1e-6, worst, 1e-6);
}

InvariantResult holomorphy() {
    const auto f = laplace(TestFunction::single(AtomKind::FlatHalfline, 1));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lr(std::log(0.1), std::log(10.0)), th(0.05, 3.09);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, cauchy_riemann_residual(f, std::polar(std::exp(lr(rng)), th(rng))));
    return result("holomorphy_stencil", worst <= 1e-8, worst, 1e-8);
}

InvariantResult seminorm_monotone() {
    const WeightSequence ws(SequenceSpec::gevrey(3.0));
    const auto f = TestFunction::single(AtomKind::FlatHalfline, 0);
    double prev = 0.0;
    bool ok = true;
    for (int n = 0; n <= 2; ++n) {
        for (double h : {0.25, 0.5, 1.0, 2.0}) {
            const double v = seminorm(f, {n, h, {}}, ws);
            ok = ok && v >= seminorm(f, {n, h / 2.0, {}}, ws) && (n == 0 || v >= seminorm(f, {n - 1, h, {}}, ws));
            prev = v;
        }
    }
    return {"seminorm_monotone", ok, "largest value " + std::to_string(prev)};
}

InvariantResult refusal() {
    const WeightSequence ws(SequenceSpec::gevrey(1.5));
    SolverOptions opt;
    opt.compute_profile = false;
    bool refused = false;
    try {
        solve_moments(SequenceTarget::unit(4, 0), ws, opt);
    } catch (const Error& e) {
        refused = e.code() == ErrorCode::ConditionRefused;
    }
    opt.override_gamma2 = true;
    const auto sol = solve_moments(SequenceTarget::unit(4, 0), ws, opt);
    const bool ok = refused && sol.override_used && sol.max_scaled_residual <= 1e-6;
    return {"refusal_semantics", ok, ok ? "refused without override, flagged with it" : "unexpected solver behaviour"};
}

const std::vector<Check>& checks() {
    static const std::vector<Check> all = {
        {"associated_function_counting", associated_function_counting},
        {"kernel_equivalence", kernel_equivalence},
        {"classifier_gevrey3", classifier_gevrey},
        {"classifier_qgevrey2", classifier_qgevrey},
        {"interpolation_lemma", interpolation_lemma},
        {"moment_closed_form", moment_closed_form},
        {"transform_identities", transform_identities},
        {"even_odd_reconstruction", even_odd_reconstruction},
        {"multiplier_roundtrip", multiplier_roundtrip},
        {"sequence_maps", sequence_maps},
        {"solver_residual", solver_residual},
        {"solver_linearity", solver_linearity},
        {"boundary_identity", boundary_identity},
        {"holomorphy_stencil", holomorphy},
        {"seminorm_monotone", seminorm_monotone},
        {"refusal_semantics", refusal},
    };
    return all;
}

InvariantResult guarded(const Check& c) {
    try {
        InvariantResult r = c.run();
        r.name = c.name;
        return r;
    } catch (const std::exception& e) {
        return {c.name, false, std::string("threw: ") + e.what()};
    }
}

}  // namespace

std::vector<std::string> invariant_names() {
    std::vector<std::string> out;
    for (const auto& c : checks()) out.emplace_back(c.name);
    return out;
}

std::vector<InvariantResult> run_invariants() {
    std::vector<InvariantResult> out;
    for (const auto& c : checks()) out.push_back(guarded(c));
    return out;
}

std::vector<InvariantResult> run_invariants(const std::vector<std::string>& names) {
    std::vector<InvariantResult> out;
    for (const auto& n : names) {
        const auto it = std::find_if(checks().begin(), checks().end(), [&](const Check& c) { return n == c.name; });
        if (it == checks().end()) throw Error(ErrorCode::ParseError, "unknown invariant '" + n + "'");
        out.push_back(guarded(*it));
    }
    return out;
}

}  // namespace gsm
