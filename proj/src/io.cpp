#include "gsmoment/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gsmoment/error.hpp"

namespace gsm::io {

namespace {

const json& param(const json& j, const char* key) {
    if (j.contains("params") && j["params"].is_object() && j["params"].contains(key)) return j["params"][key];
    if (j.contains(key)) return j[key];
    throw Error(ErrorCode::ParseError, std::string("sequence spec is missing '") + key + "'");
}

bool has_param(const json& j, const char* key) {
    return (j.contains("params") && j["params"].is_object() && j["params"].contains(key)) || j.contains(key);
}

double as_double(const json& v, const char* what) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
    return v.get<double>();
}

mp::Float as_float(const json& v, const char* what) {
    if (v.is_string()) return mp::Float(v.get<std::string>());
    if (v.is_number()) return mp::Float(v.get<double>());
    if (v.is_null()) return mp::Float(0);
    throw Error(ErrorCode::ParseError, std::string(what) + " must be a number or a decimal string");
}

std::complex<double> complex_from_json(const json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_object() && v.contains("re")) {
        return {as_double(v["re"], "re"), v.contains("im") ? as_double(v["im"], "im") : 0.0};
    }
    throw Error(ErrorCode::ParseError, "target entry must be a number, [re, im] or {re, im}");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json map_to_json(const std::map<std::string, double>& m) {
    json o = json::object();
    for (const auto& [k, v] : m) o[k] = number(v);
    return o;
}

}  // namespace

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_to_json(std::complex<double> z) { return json::array({number(z.real()), number(z.imag())}); }

SequenceSpec sequence_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw Error(ErrorCode::ParseError, "sequence spec must be an object with a string 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    int horizon = kDefaultHorizon;
    if (j.contains("horizon")) {
        if (!j["horizon"].is_number_integer()) throw Error(ErrorCode::ParseError, "horizon must be an integer");
        horizon = j["horizon"].get<int>();
    }
    if (kind == "gevrey") return SequenceSpec::gevrey(as_double(param(j, "alpha"), "alpha"), horizon);
    if (kind == "qgevrey" || kind == "q_gevrey") return SequenceSpec::q_gevrey(as_double(param(j, "q"), "q"), horizon);
    if (kind == "expr") {
        const json& e = has_param(j, "expression") ? param(j, "expression") : param(j, "log_M");
        if (!e.is_string()) throw Error(ErrorCode::ParseError, "expr sequences need a string 'log_M'");
        return SequenceSpec::expr(e.get<std::string>(), horizon);
    }
    if (kind == "table") {
        std::vector<double> logs;
        if (has_param(j, "log_M") || has_param(j, "values")) {
            const json& vals = has_param(j, "log_M") ? param(j, "log_M") : param(j, "values");
            if (!vals.is_array()) throw Error(ErrorCode::ParseError, "table values must be an array");
            for (const auto& v : vals) logs.push_back(as_double(v, "log_M entry"));
        } else {
            const json& vals = param(j, "M");
            if (!vals.is_array()) throw Error(ErrorCode::ParseError, "table values must be an array");
            for (const auto& v : vals) {
                const double m = as_double(v, "M entry");
                if (!(m > 0.0)) throw Error(ErrorCode::ParseError, "table values M_p must be positive");
                logs.push_back(std::log(m));
            }
        }
        return SequenceSpec::table(std::move(logs));
    }
    throw Error(ErrorCode::ParseError, "unknown sequence kind '" + kind + "'");
}

json to_json(const SequenceSpec& s) {
    json j;
    j["kind"] = std::string(to_string(s.kind));
    json p = json::object();
    switch (s.kind) {
    case GeneratorKind::Gevrey: p["alpha"] = s.alpha; break;
    case GeneratorKind::QGevrey: p["q"] = s.q; break;
    case GeneratorKind::Table: p["log_M"] = s.values; break;
    case GeneratorKind::Expr: p["log_M"] = s.expression; break;
    case GeneratorKind::Interpolated: break;
    }
    j["params"] = p;
    if (s.kind != GeneratorKind::Table) j["horizon"] = s.horizon;
    return j;
}

SequenceTarget target_from_json(const json& j) {
    SequenceTarget t;
    const json* entries = &j;
    if (j.is_object()) {
        if (!j.contains("entries")) throw Error(ErrorCode::ParseError, "target object needs 'entries'");
        entries = &j["entries"];
        if (j.contains("h")) t.h = as_double(j["h"], "h");
    }
    if (!entries->is_array()) throw Error(ErrorCode::ParseError, "target entries must be an array");
    for (const auto& e : *entries) t.entries.push_back(complex_from_json(e));
    if (t.entries.empty()) throw Error(ErrorCode::ParseError, "target needs at least one entry");
    if (!(t.h > 0.0)) throw Error(ErrorCode::ParseError, "target scale h must be > 0");
    return t;
}

json to_json(const SequenceTarget& t) {
    json e = json::array();
    for (const auto& z : t.entries) e.push_back(complex_to_json(z));
    return json{{"h", t.h}, {"entries", e}};
}

TestFunction test_function_from_json(const json& j) {
    const json& atoms = j.is_object() && j.contains("atoms") ? j["atoms"] : j;
    if (!atoms.is_array()) throw Error(ErrorCode::ParseError, "test function must be a list of atoms");
    TestFunction f;
    for (const auto& a : atoms) {
        if (!a.is_object() || !a.contains("kind") || !a.contains("k")) {
            throw Error(ErrorCode::ParseError, "atom needs 'kind' and 'k'");
        }
        if (!a["k"].is_number_integer()) throw Error(ErrorCode::ParseError, "atom index k must be an integer");
        const AtomKind kind = parse_atom_kind(a["kind"].get<std::string>());
        mp::Float re = a.contains("re") ? as_float(a["re"], "re") : mp::Float(1);
        mp::Float im = a.contains("im") ? as_float(a["im"], "im") : mp::Float(0);
        f.add(kind, a["k"].get<int>(), mp::Complex(std::move(re), std::move(im)));
    }
    return f;
}

json to_json(const TestFunction& f) {
    json arr = json::array();
    for (const auto& a : f.atoms()) {
        arr.push_back({{"kind", std::string(to_string(a.kind))},
                       {"k", a.k},
                       {"re", a.coeff.re.to_string()},
                       {"im", a.coeff.im.to_string()}});
    }
    return arr;
}

json to_json(const ConditionReport& r) {
    json trace = json::array();
    for (double v : r.trace) trace.push_back(number(v));
    json j{{"condition", r.condition.name()},
           {"verdict", std::string(to_string(r.verdict))},
           {"witness", map_to_json(r.witness)},
           {"horizons", r.horizons},
           {"trace", trace}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const std::vector<ConditionReport>& rs) {
    json arr = json::array();
    for (const auto& r : rs) arr.push_back(to_json(r));
    return arr;
}

json to_json(const LemmaReport& r) {
    auto item = [](const AgreementItem& it) {
        return json{{"agreement", std::string(to_string(it.agreement))},
                    {"base", to_json(it.base)},
                    {"interpolated", to_json(it.interpolated)}};
    };
    return json{{"dc", item(r.dc)}, {"gamma2_vs_gamma1", item(r.gamma)}, {"beta2", item(r.beta2)}};
}

json to_json(const ProfileCell& c) {
    return json{{"n", c.n},
                {"h", c.h},
                {"log_value", number(c.log_value)},
                {"value", number(c.value())},
                {"argmax_x", c.argmax_x},
                {"status", std::string(to_string(c.status))}};
}

json to_json(const MomentSolution& s) {
    json coeffs = json::array();
    for (const auto& c : s.coefficients) coeffs.push_back(json::array({c.re.to_string(), c.im.to_string()}));
    json achieved = json::array(), residuals = json::array(), profile = json::array();
    for (const auto& z : s.achieved) achieved.push_back(complex_to_json(z));
    for (double r : s.residuals) residuals.push_back(number(r));
    for (const auto& c : s.seminorm_profile) profile.push_back(to_json(c));
    return json{{"target", to_json(s.target)},
                {"coefficients", coeffs},
                {"function", to_json(s.phi)},
                {"achieved_moments", achieved},
                {"residuals", residuals},
                {"max_scaled_residual", number(s.max_scaled_residual)},
                {"condition_estimate", number(s.condition_estimate)},
                {"precision_bits", s.precision_bits},
                {"gamma2", std::string(to_string(s.gamma2))},
                {"override_used", s.override_used},
                {"seminorm_profile", profile}};
}

json to_json(const RoundtripRecord& r) {
    auto seq = [](const std::vector<std::complex<double>>& v) {
        json a = json::array();
        for (const auto& z : v) a.push_back(complex_to_json(z));
        return a;
    };
    return json{{"target", to_json(r.target)},
                {"even_target", to_json(r.even_target)},
                {"odd_target", to_json(r.odd_target)},
                {"even_branch_moments", seq(r.even_branch)},
                {"odd_branch_moments", seq(r.odd_branch)},
                {"recombined_moments", seq(r.achieved)},
                {"recombined", r.recombined ? r.recombined->describe() : ""},
                {"max_scaled_error", number(r.max_scaled_error)},
                {"max_cross_moment", number(r.max_cross_moment)},
                {"matches", r.matches}};
}

json to_json(const BoundaryCheck& c) {
    json ex = json::array();
    for (const auto& z : c.extrapolated) ex.push_back(complex_to_json(z));
    return json{{"sample_heights", c.ys}, {"extrapolated", ex}, {"max_discrepancy", number(c.max_discrepancy)}};
}

json to_json(const BorelRittSolution& s) {
    return json{{"target", to_json(s.target)},
                {"moment_target", to_json(s.twisted)},
                {"solution", to_json(s.moments)},
                {"boundary_derivatives", to_json(s.boundary)},
                {"extrapolation_check", to_json(s.check)},
                {"max_scaled_error", number(s.max_scaled_error)}};
}

std::string residual_csv(const MomentSolution& s) {
    std::ostringstream os;
    os << "p,target_re,target_im,achieved_re,achieved_im,residual\n";
    for (std::size_t p = 0; p < s.residuals.size(); ++p) {
        os << p << ',' << fmt(s.target.entries[p].real()) << ',' << fmt(s.target.entries[p].imag()) << ','
           << fmt(s.achieved[p].real()) << ',' << fmt(s.achieved[p].imag()) << ',' << fmt(s.residuals[p]) << '\n';
    }
    return os.str();
}

std::string profile_csv(const std::vector<ProfileCell>& cells) {
    std::ostringstream os;
    os << "n,h,log_value,argmax_x,status\n";
    for (const auto& c : cells) {
        os << c.n << ',' << fmt(c.h) << ',' << fmt(c.log_value) << ',' << fmt(c.argmax_x) << ','
           << to_string(c.status) << '\n';
    }
    return os.str();
}

std::string derivative_csv(const TestFunction& f, const std::vector<double>& xs, int m_max) {
    const DerivativeTable table(f, m_max);
    std::ostringstream os;
    os << "x";
    for (int m = 0; m <= m_max; ++m) os << ",d" << m << "_re,d" << m << "_im";
    os << '\n';
    for (double x : xs) {
        os << fmt(x);
        for (int m = 0; m <= m_max; ++m) {
            const auto v = table.value(m, x);
            os << ',' << fmt(v.real()) << ',' << fmt(v.imag());
        }
        os << '\n';
    }
    return os.str();
}

std::string heatmap_csv(const HalfPlaneFunction& f, const std::vector<std::complex<double>>& grid) {
    std::ostringstream os;
    os << "re_z,im_z,abs_f\n";
    for (const auto& z : grid) os << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(std::abs(f.value(z))) << '\n';
    return os.str();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorCode::ParseError, "write failed for " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace gsm::io
