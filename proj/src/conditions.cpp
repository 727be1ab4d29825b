#include "gsmoment/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "gsmoment/error.hpp"
#include "gsmoment/kernels.hpp"

namespace gsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Named {
    Condition kind;
    std::string_view name;
};

constexpr std::array<Named, 10> kNames{{
    {Condition::lc, "lc"},
    {Condition::dc, "dc"},
    {Condition::mg, "mg"},
    {Condition::gamma, "gamma"},
    {Condition::gamma1, "gamma1"},
    {Condition::gamma2, "gamma2"},
    {Condition::gamma_r, "gamma_r"},
    {Condition::beta2, "beta2"},
    {Condition::beta2_0, "beta2_0"},
    {Condition::beta2_1, "beta2_1"},
}};

std::array<int, 3> horizons_of(const WeightSequence& ws) {
    const int P = ws.horizon();
    return {P / 4, P / 2, P};
}

double relative_change(double from, double to, double floor) {
    return std::fabs(to - from) / std::max(std::fabs(from), floor);
}

bool stable(double a, double b, const ClassifierOptions& opt) {
    return std::isfinite(a) && std::isfinite(b) && relative_change(a, b, opt.stable_floor) < opt.stable_change;
}

// Shared rule: stable across both steps -> Holds; growth by more than the
// growth factor at both steps -> Fails; anything else is Inconclusive.
Verdict trend_verdict(const std::vector<double>& s, const ClassifierOptions& opt) {
    if (stable(s[0], s[1], opt) && stable(s[1], s[2], opt)) return Verdict::Holds;
    const double g = opt.growth_factor;
    if (s[1] > g * std::max(s[0], opt.stable_floor) && s[2] > g * s[1]) return Verdict::Fails;
    return Verdict::Inconclusive;
}

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};

template <class X>
LineFit least_squares(int lo, int hi, X&& x_of, const std::vector<double>& y) {
    const double n = hi - lo + 1;
    double sx = 0, sy = 0;
    for (int p = lo; p <= hi; ++p) {
        sx += x_of(p);
        sy += y[p];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int p = lo; p <= hi; ++p) {
        const double dx = x_of(p) - mx;
        sxx += dx * dx;
        sxy += dx * (y[p] - my);
    }
    LineFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (int p = lo; p <= hi; ++p) {
        const double r = y[p] - f.intercept - f.slope * x_of(p);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

ConditionReport check_lc(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto ell = ws.log_ratios();
    const auto hs = horizons_of(ws);
    double running = kInf;
    std::size_t next = 0;
    // log M_{p+1} - 2 log M_p + log M_{p-1} = log m_{p+1} - log m_p.
    for (int p = 1; p < ws.horizon(); ++p) {
        const double d = ell[p + 1] - ell[p];
        if (d < -opt.tol_lc) {
            r.verdict = Verdict::Fails;
            r.witness["index"] = p;
            r.witness["second_difference"] = d;
            r.horizons = {ws.horizon()};
            r.trace = {d};
            return r;
        }
        running = std::min(running, d);
        while (next < hs.size() && p + 1 == hs[next]) r.trace.push_back(running), ++next;
    }
    while (r.trace.size() < hs.size()) r.trace.push_back(running);
    r.verdict = Verdict::Holds;
    r.witness["min_second_difference"] = running;
    r.horizons.assign(hs.begin(), hs.end());
    return r;
}

ConditionReport check_dc(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    const std::vector<double> ell(ws.log_ratios().begin(), ws.log_ratios().end());
    const LineFit fit = least_squares(1, hs[0], [](int p) { return static_cast<double>(p); }, ell);
    double sup = -kInf;
    std::size_t next = 0;
    for (int p = 1; p <= ws.horizon(); ++p) {
        sup = std::max(sup, ell[p] - fit.intercept - fit.slope * p);
        if (next < hs.size() && p == hs[next]) r.trace.push_back(sup), ++next;
    }
    r.horizons.assign(hs.begin(), hs.end());
    r.verdict = trend_verdict(r.trace, opt);
    r.witness["fit_intercept"] = fit.intercept;
    r.witness["fit_slope"] = fit.slope;
    r.witness["residual_sup"] = r.trace.back();
    if (r.verdict == Verdict::Holds) {
        r.witness["C0"] = std::exp(std::max(0.0, fit.intercept + r.trace.back()));
        r.witness["H"] = std::exp(std::max(0.0, fit.slope));
    }
    return r;
}

ConditionReport check_mg(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    const auto L = ws.log_M_values();
    const auto& k = kernels::active();
    const int P = ws.horizon();
    // excess[n] = max over p + q = n of log M_n - log M_p - log M_q (>= 0).
    std::vector<double> excess(P + 1);
    for (int n = 0; n <= P; ++n) excess[n] = L[n] - k.min_pair_sum(L, static_cast<std::size_t>(n));
    double log_h = 0.0;
    for (int n = 1; n <= hs[0]; ++n) log_h = std::max(log_h, excess[n] / n);
    log_h += std::log(2.0);
    double sup = 0.0;  // n = 0 contributes 0
    std::size_t next = 0;
    for (int n = 1; n <= P; ++n) {
        sup = std::max(sup, excess[n] - n * log_h);
        if (next < hs.size() && n == hs[next]) r.trace.push_back(sup), ++next;
    }
    r.horizons.assign(hs.begin(), hs.end());
    r.verdict = trend_verdict(r.trace, opt);
    r.witness["H_trial"] = std::exp(log_h);
    r.witness["log_excess_sup"] = r.trace.back();
    if (r.verdict == Verdict::Holds) {
        r.witness["C0"] = std::exp(r.trace.back());
        r.witness["H"] = std::exp(log_h);
    }
    return r;
}

struct GammaStat {
    double value = kInf;  // sup_p (m_p^{1/r} / p) * tail sum, or the full sum
    double log_tail = kInf;
    int argmax = 0;
    bool tail_finite = false;
    bool power_law = true;
    double tail_rate = 0.0;
};

GammaStat gamma_statistic(const std::vector<double>& ell, int horizon, double r, bool sum_only,
                          bool extrapolate, const ClassifierOptions& opt) {
    GammaStat g;
    std::vector<double> y(horizon + 1);
    for (int q = 1; q <= horizon; ++q) y[q] = -ell[q] / r;
    double log_tail = -kInf;
    if (extrapolate) {
        const int lo = std::max(1, horizon / 10);
        const LineFit pw = least_squares(lo, horizon, [](int q) { return std::log(static_cast<double>(q)); }, y);
        const LineFit ex = least_squares(lo, horizon, [](int q) { return static_cast<double>(q); }, y);
        if (pw.rms <= ex.rms) {
            const double sigma = -pw.slope;
            g.power_law = true;
            g.tail_rate = sigma;
            if (sigma <= 1.0 + opt.tail_exponent_margin) {
                log_tail = kInf;
            } else {
                log_tail = pw.intercept + (1.0 - sigma) * std::log(horizon + 0.5) - std::log(sigma - 1.0);
            }
        } else {
            const double lambda = -ex.slope;
            g.power_law = false;
            g.tail_rate = lambda;
            if (lambda <= 0.0) {
                log_tail = kInf;
            } else {
                log_tail = ex.intercept - lambda * (horizon + 1.0) - std::log(-std::expm1(-lambda));
            }
        }
    }
    g.log_tail = log_tail;
    g.tail_finite = log_tail < kInf;
    if (!g.tail_finite) return g;
    double log_s = log_tail;
    double best = -kInf;
    for (int p = horizon; p >= 1; --p) {
        log_s = log_add(y[p], log_s);
        if (!sum_only) {
            const double v = ell[p] / r - std::log(static_cast<double>(p)) + log_s;
            if (v >= best) best = v, g.argmax = p;
        }
    }
    g.value = std::exp(sum_only ? log_s : best);
    if (sum_only) g.argmax = 1;
    return g;
}

ConditionReport check_gamma(const WeightSequence& ws, const ConditionId& id, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    r.horizons.assign(hs.begin(), hs.end());
    const std::vector<double> ell(ws.log_ratios().begin(), ws.log_ratios().end());
    const double root = id.root();
    const bool sum_only = id.kind == Condition::gamma;
    if (!ws.closed_form()) {
        // Report the untailed partial statistic; its limit needs data we do not have.
        for (int h : hs) r.trace.push_back(gamma_statistic(ell, h, root, sum_only, false, opt).value);
        r.verdict = Verdict::Inconclusive;
        r.note = "tabulated data: the tail of the sum cannot be extrapolated";
        return r;
    }
    int infinite = 0;
    GammaStat top;
    for (int h : hs) {
        top = gamma_statistic(ell, h, root, sum_only, true, opt);
        r.trace.push_back(top.value);
        if (!top.tail_finite) ++infinite;
    }
    r.witness["tail_rate"] = top.tail_rate;
    r.witness["tail_power_law"] = top.power_law ? 1.0 : 0.0;
    if (infinite == 3) {
        r.verdict = Verdict::Fails;
        r.note = "fitted tail of the sum diverges at every horizon";
        return r;
    }
    if (infinite > 0) {
        r.verdict = Verdict::Inconclusive;
        r.note = "fitted tail diverges at some horizons only";
        return r;
    }
    r.verdict = trend_verdict(r.trace, opt);
    r.witness["statistic"] = top.value;
    r.witness["argmax_p"] = top.argmax;
    return r;
}

// L_n(P') = max over p in [P'/(2n), P'/n] of (log M_{np} - log M_p)/(p(n-1)) - log m_{np}.
double beta2_window_sup(const WeightSequence& ws, int n, int horizon) {
    const auto L = ws.log_M_values();
    const auto ell = ws.log_ratios();
    const int lo = std::max(1, (horizon + 2 * n - 1) / (2 * n));
    const int hi = horizon / n;
    double sup = -kInf;
    for (int p = lo; p <= hi; ++p) {
        const double v = (L[n * p] - L[p]) / (static_cast<double>(p) * (n - 1)) - ell[n * p];
        sup = std::max(sup, v);
    }
    return sup;
}

ConditionReport check_beta2(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    r.horizons.assign(hs.begin(), hs.end());
    const int n_max = opt.beta2_n_max;
    // stat[n][j]: L_n at horizon j.
    std::vector<std::array<double, 3>> stat(n_max + 1);
    for (int n = 2; n <= n_max; ++n) {
        for (int j = 0; j < 3; ++j) stat[n][j] = beta2_window_sup(ws, n, hs[j]);
    }
    for (int j = 0; j < 3; ++j) {
        double m = kInf;
        for (int n = 2; n <= n_max; ++n) m = std::min(m, stat[n][j]);
        r.trace.push_back(m);
    }
    bool all_good = true;
    int chosen_n = 0;
    for (int k = 0; k <= opt.beta2_eps_k_max; ++k) {
        const double log_eps = -k * std::log(2.0);
        int good_n = 0;
        bool every_n_bad = true;
        for (int n = 2; n <= n_max; ++n) {
            const auto& s = stat[n];
            if (s[0] <= log_eps && s[1] <= log_eps && s[2] <= log_eps) {
                if (good_n == 0) good_n = n;
            }
            const bool above = s[0] > log_eps && s[1] > log_eps && s[2] > log_eps;
            const bool not_falling = s[2] >= s[1] - opt.stable_change * std::max(std::fabs(s[1]), opt.stable_floor);
            if (!(above && not_falling)) every_n_bad = false;
        }
        if (every_n_bad) {
            r.verdict = Verdict::Fails;
            r.witness["epsilon"] = std::exp(log_eps);
            r.witness["min_limsup_log"] = r.trace.back();
            return r;
        }
        if (good_n == 0) all_good = false;
        else chosen_n = good_n;
    }
    if (all_good) {
        r.verdict = Verdict::Holds;
        r.witness["n"] = chosen_n;
        r.witness["epsilon"] = std::ldexp(1.0, -opt.beta2_eps_k_max);
        r.witness["limsup_log"] = stat[chosen_n][2];
        return r;
    }
    r.verdict = Verdict::Inconclusive;
    return r;
}

ConditionReport check_beta2_0(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    r.horizons.assign(hs.begin(), hs.end());
    const auto ell = ws.log_ratios();
    bool all_stable = true;
    int rising_n = 0;
    double best_top = -kInf;
    std::array<double, 3> best_trace{};
    for (int n = 2; n <= opt.beta2_n_max; ++n) {
        std::array<double, 3> t{};
        for (int j = 0; j < 3; ++j) {
            const int lo = std::max(1, (hs[j] + 2 * n - 1) / (2 * n));
            const int hi = hs[j] / n;
            double m = kInf;
            for (int p = lo; p <= hi; ++p) m = std::min(m, ell[n * p] - ell[p]);
            t[j] = m;
        }
        const auto rises = [&](double a, double b) {
            return b - a > opt.stable_change * std::max(std::fabs(a), opt.stable_floor);
        };
        if (rising_n == 0 && rises(t[0], t[1]) && rises(t[1], t[2])) rising_n = n;
        if (!(stable(t[0], t[1], opt) && stable(t[1], t[2], opt))) all_stable = false;
        if (t[2] > best_top) best_top = t[2], best_trace = t;
    }
    r.trace.assign(best_trace.begin(), best_trace.end());
    if (rising_n != 0) {
        r.verdict = Verdict::Holds;
        r.witness["n"] = rising_n;
        r.witness["log_ratio_gap"] = best_top;
    } else if (all_stable) {
        r.verdict = Verdict::Fails;
        r.witness["max_log_ratio_gap"] = best_top;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    return r;
}

ConditionReport check_beta2_1(const WeightSequence& ws, const ClassifierOptions& opt) {
    ConditionReport r;
    const auto hs = horizons_of(ws);
    r.horizons.assign(hs.begin(), hs.end());
    const auto L = ws.log_M_values();
    const auto ell = ws.log_ratios();
    for (int h : hs) {
        double sup = -kInf;
        for (int p = std::max(1, h / 2); p <= h; ++p) sup = std::max(sup, L[p] / p - ell[p]);
        r.trace.push_back(sup);
    }
    const auto falls = [&](double a, double b) {
        return a - b > opt.stable_change * std::max(std::fabs(a), opt.stable_floor);
    };
    if (falls(r.trace[0], r.trace[1]) && falls(r.trace[1], r.trace[2])) {
        r.verdict = Verdict::Holds;
    } else if (stable(r.trace[0], r.trace[1], opt) && stable(r.trace[1], r.trace[2], opt)) {
        r.verdict = Verdict::Fails;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    r.witness["log_ratio_sup"] = r.trace.back();
    return r;
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string ConditionId::name() const {
    for (const auto& n : kNames) {
        if (n.kind != kind) continue;
        if (kind != Condition::gamma_r) return std::string(n.name);
        std::ostringstream os;
        os << "gamma_r(" << r << ")";
        return os.str();
    }
    return "unknown";
}

ConditionId ConditionId::parse(const std::string& name) {
    if (name.rfind("gamma_r(", 0) == 0 && name.size() > 9 && name.back() == ')') {
        const std::string arg = name.substr(8, name.size() - 9);
        char* end = nullptr;
        const double r = std::strtod(arg.c_str(), &end);
        if (end != arg.c_str() + arg.size() || !(r > 0.0)) {
            throw Error(ErrorCode::ParseError, "bad gamma_r exponent in '" + name + "'");
        }
        return {Condition::gamma_r, r};
    }
    for (const auto& n : kNames) {
        if (n.name == name && n.kind != Condition::gamma_r) return {n.kind, 1.0};
    }
    throw Error(ErrorCode::ParseError, "unknown condition '" + name + "'");
}

double ConditionId::root() const {
    switch (kind) {
        case Condition::gamma2: return 2.0;
        case Condition::gamma_r: return r;
        default: return 1.0;
    }
}

std::vector<ConditionId> standard_conditions() {
    return {{Condition::lc},      {Condition::dc},      {Condition::mg},          {Condition::gamma},
            {Condition::gamma1},  {Condition::gamma2},  {Condition::gamma_r, 3.0}, {Condition::beta2},
            {Condition::beta2_0}, {Condition::beta2_1}};
}

ConditionReport check_condition(const WeightSequence& ws, const ConditionId& id, const ClassifierOptions& opt) {
    if (ws.horizon() < kMinHorizon) throw Error(ErrorCode::IndexOutOfHorizon, "horizon below minimum");
    if (id.kind == Condition::gamma_r && !(id.r > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "gamma_r needs r > 0");
    }
    ConditionReport r;
    switch (id.kind) {
        case Condition::lc: r = check_lc(ws, opt); break;
        case Condition::dc: r = check_dc(ws, opt); break;
        case Condition::mg: r = check_mg(ws, opt); break;
        case Condition::gamma:
        case Condition::gamma1:
        case Condition::gamma2:
        case Condition::gamma_r: r = check_gamma(ws, id, opt); break;
        case Condition::beta2: r = check_beta2(ws, opt); break;
        case Condition::beta2_0: r = check_beta2_0(ws, opt); break;
        case Condition::beta2_1: r = check_beta2_1(ws, opt); break;
    }
    r.condition = id;
    return r;
}

std::vector<ConditionReport> classify(const WeightSequence& ws, const std::vector<ConditionId>& ids,
                                      const ClassifierOptions& opt) {
    std::vector<ConditionReport> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(check_condition(ws, id, opt));
    auto find = [&](Condition c) -> ConditionReport* {
        for (auto& r : out) {
            if (r.condition.kind == c) return &r;
        }
        return nullptr;
    };
    auto holds = [&](Condition c) {
        const ConditionReport* r = find(c);
        return r != nullptr && r->verdict == Verdict::Holds;
    };
    auto downgrade = [&](Condition consequent, bool premise, const std::string& why) {
        ConditionReport* r = find(consequent);
        if (r != nullptr && premise && r->verdict == Verdict::Fails) {
            r->verdict = Verdict::Inconclusive;
            r->note = "finite-horizon Fails contradicts " + why;
        }
    };
    // Order matters: beta2 may be downgraded before it serves as a premise.
    downgrade(Condition::gamma1, holds(Condition::lc) && holds(Condition::gamma2), "lc & gamma2 => gamma1");
    downgrade(Condition::gamma, holds(Condition::gamma1), "gamma1 => gamma");
    downgrade(Condition::dc, holds(Condition::mg), "mg => dc");
    downgrade(Condition::beta2, holds(Condition::beta2_0), "beta2_0 => beta2");
    downgrade(Condition::beta2_1, holds(Condition::beta2), "beta2 => beta2_1");
    return out;
}

}  // namespace gsm
