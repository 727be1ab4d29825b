#include "gsmoment/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "gsmoment/error.hpp"
#include "gsmoment/invariants.hpp"
#include "gsmoment/io.hpp"
#include "gsmoment/multiprecision.hpp"

namespace gsm::cli {

namespace {

using io::json;

struct Config {
    std::string sequence, dual_sequence, target, function;
    std::string out;
    std::optional<int> horizon;
    long precision = 200;
    std::optional<double> tolerance;
    bool override_gamma2 = false;

    // classify
    std::string conditions;
    ClassifierOptions classifier;
    // seminorm
    int n = 0;
    double h = 1.0;
    int cap = 8;
    std::string csv;
    // moments
    std::string ops;
    int p_max = 10;
    // solve / borel-ritt
    long max_precision = 2000;
    bool reduction = false;
    bool uhf = false;
    int p_cap = 8;
    std::string heatmap;
    // verify
    std::string only;
};

// A path, or inline JSON when the value starts with '{' or '['.
json load(const std::string& value, const char* what) {
    if (value.empty()) throw Error(ErrorCode::ParseError, std::string("missing --") + what);
    const auto first = value.find_first_not_of(" \t\n");
    if (first != std::string::npos && (value[first] == '{' || value[first] == '[')) {
        try {
            return json::parse(value);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("--") + what + ": " + e.what());
        }
    }
    return io::read_json_file(value);
}

WeightSequence load_sequence(const Config& c, const std::string& value, const char* what) {
    SequenceSpec spec = io::sequence_spec_from_json(load(value, what));
    if (c.horizon) spec.horizon = *c.horizon;
    return WeightSequence(spec);
}

void emit(const Config& c, const json& report, std::ostream& out) {
    if (c.out.empty()) {
        out << io::dump(report);
    } else {
        io::write_text_file(c.out, io::dump(report));
    }
}

// Companion file next to --out: "run.json" -> "run.<suffix>".
std::string sibling(const Config& c, const std::string& suffix) {
    std::filesystem::path p(c.out);
    p.replace_extension(suffix);
    return p.string();
}

SolverOptions solver_options(const Config& c) {
    SolverOptions o;
    o.initial_bits = c.precision;
    o.max_bits = std::max(c.max_precision, c.precision);
    if (c.tolerance) o.tolerance = *c.tolerance;
    o.override_gamma2 = c.override_gamma2;
    o.classifier = c.classifier;
    return o;
}

int cmd_classify(const Config& c, std::ostream& out) {
    const WeightSequence ws = load_sequence(c, c.sequence, "sequence");
    std::vector<ConditionId> ids;
    if (c.conditions.empty()) {
        ids = standard_conditions();
    } else {
        std::stringstream ss(c.conditions);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) ids.push_back(ConditionId::parse(item));
        }
    }
    const auto reports = classify(ws, ids, c.classifier);
    emit(c, io::to_json(reports), out);
    for (const auto& r : reports) {
        if (r.verdict == Verdict::Inconclusive) return kInconclusive;
    }
    return kOk;
}

int cmd_interpolate(const Config& c, std::ostream& out) {
    const WeightSequence ws = load_sequence(c, c.sequence, "sequence");
    const auto rep = verify_interpolation_lemma(ws, c.classifier);
    const auto pair = two_interpolate(ws);
    json head = json::array();
    for (int p = 0; p <= std::min(16, pair.interpolated.horizon()); ++p) head.push_back(pair.interpolated.log_M(p));
    json report{{"sequence", ws.description()},
                {"interpolated",
                 {{"description", pair.interpolated.description()},
                  {"horizon", pair.interpolated.horizon()},
                  {"log_N_head", head}}},
                {"lemma", io::to_json(rep)}};
    emit(c, report, out);
    if (!c.csv.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "p,log_N\n";
        for (int p = 0; p <= pair.interpolated.horizon(); ++p) os << p << ',' << pair.interpolated.log_M(p) << '\n';
        io::write_text_file(c.csv, os.str());
    }
    int status = kOk;
    for (const auto* it : {&rep.dc, &rep.gamma, &rep.beta2}) {
        if (it->agreement == Agreement::Disagree) return kHardFailure;
        if (it->agreement == Agreement::Unknown) status = kInconclusive;
    }
    return status;
}

int cmd_seminorm(const Config& c, std::ostream& out) {
    const TestFunction f = io::test_function_from_json(load(c.function, "function"));
    const WeightSequence ws = load_sequence(c, c.sequence, "sequence");
    json report;
    auto describe = [](const SeminormResult& r) {
        return json{{"log_value", io::number(r.log_value)},
                    {"value", io::number(r.value())},
                    {"argmax_m", r.argmax_m},
                    {"argmax_x", r.argmax_x},
                    {"at_grid_edge", r.at_grid_edge}};
    };
    report["seminorm"] = describe(seminorm_detail(f, {c.n, c.h, {}}, ws));
    report["n"] = c.n;
    report["h"] = c.h;
    if (!c.dual_sequence.empty()) {
        const WeightSequence wa = load_sequence(c, c.dual_sequence, "dual-sequence");
        report["dual"] = describe(dual_seminorm_detail(f, c.cap, c.h, ws, wa));
        report["cap"] = c.cap;
    }
    emit(c, report, out);
    if (!c.csv.empty()) io::write_text_file(c.csv, io::derivative_csv(f, default_grid(ws, c.h), c.n));
    return kOk;
}

int cmd_moments(const Config& c, std::ostream& out) {
    const TestFunction f = io::test_function_from_json(load(c.function, "function"));
    const auto tags = parse_pipeline(c.ops);
    const PipelineOptions po{c.p_max, c.h};
    const PipelineValue v = apply_pipeline(f, tags, po);
    json ops = json::array();
    for (auto t : tags) ops.push_back(std::string(to_string(t)));
    json report{{"operators", ops}};
    if (const auto* tf = std::get_if<TestFunction>(&v)) {
        report["kind"] = "function";
        report["function"] = io::to_json(*tf);
    } else if (const auto* hd = std::get_if<Handle>(&v)) {
        report["kind"] = "handle";
        report["handle"] = (*hd)->describe();
    } else {
        report["kind"] = "sequence";
    }
    report["moments"] = io::to_json(moment_sequence(v, c.p_max, c.h));
    emit(c, report, out);
    return kOk;
}

int cmd_solve(const Config& c, std::ostream& out) {
    const SequenceTarget target = io::target_from_json(load(c.target, "target"));
    const WeightSequence ws = load_sequence(c, c.sequence, "sequence");
    const SolverOptions opt = solver_options(c);
    const MomentSolution sol = solve_moments(target, ws, opt);
    json report = io::to_json(sol);
    report["sequence"] = ws.description();
    report["lambda_norm"] = io::number(lambda_norm(target, ws));
    if (c.reduction) report["reduction"] = io::to_json(reduction_roundtrip(target, ws, opt));
    emit(c, report, out);
    if (!c.out.empty()) {
        io::write_text_file(sibling(c, ".residuals.csv"), io::residual_csv(sol));
        io::write_text_file(sibling(c, ".profile.csv"), io::profile_csv(sol.seminorm_profile));
    }
    return kOk;
}

int cmd_borel_ritt(const Config& c, std::ostream& out) {
    const SequenceTarget target = io::target_from_json(load(c.target, "target"));
    const WeightSequence ws = load_sequence(c, c.sequence, "sequence");
    const BorelRittSolution br = borel_ritt_solve(target, ws, solver_options(c));
    json report = io::to_json(br);
    report["sequence"] = ws.description();
    if (c.uhf) {
        const auto u = uhf_norm_detail(br.f, {c.h, c.p_cap, {}}, ws);
        report["uhf_norm"] = {{"h", c.h},
                              {"p_cap", c.p_cap},
                              {"log_value", io::number(u.log_value)},
                              {"value", io::number(u.value())},
                              {"argmax_p", u.argmax_p},
                              {"argmax_z", io::complex_to_json(u.argmax_z)}};
    }
    emit(c, report, out);
    if (!c.heatmap.empty()) io::write_text_file(c.heatmap, io::heatmap_csv(br.f, uhf_grid()));
    const double tol = c.tolerance.value_or(1e-5);
    return br.max_scaled_error <= tol ? kOk : kHardFailure;
}

int cmd_verify(const Config& c, std::ostream& out) {
    std::vector<InvariantResult> results;
    if (c.only.empty()) {
        results = run_invariants();
    } else {
        std::vector<std::string> names;
        std::stringstream ss(c.only);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) names.push_back(item);
        }
        results = run_invariants(names);
    }
    json arr = json::array();
    int passed = 0;
    for (const auto& r : results) {
        arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        passed += r.passed ? 1 : 0;
    }
    const int failed = static_cast<int>(results.size()) - passed;
    emit(c, json{{"results", arr}, {"passed", passed}, {"failed", failed}}, out);
    return failed == 0 ? kOk : kHardFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Weight-sequence classification, moment problems and Borel-Ritt interpolation", "gsmoment"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--horizon", c.horizon, "Override the sequence horizon P")->check(CLI::Range(kMinHorizon, 1 << 22));
    app.add_option("--precision", c.precision, "MPFR precision in bits (initial precision for the solver)")
        ->check(CLI::Range(64L, 2000L))
        ->capture_default_str();
    app.add_option("--tolerance", c.tolerance, "Residual tolerance (solve 1e-6, borel-ritt 1e-5)");
    app.add_flag("--override-gamma2", c.override_gamma2, "Solve even when (gamma2) does not hold");
    app.add_option("--out", c.out, "Write the JSON report here instead of stdout");
    app.add_option("--tol-lc", c.classifier.tol_lc, "Log-convexity tolerance")->capture_default_str();
    app.add_option("--stable-change", c.classifier.stable_change, "Relative change counted as stable")
        ->capture_default_str();
    app.add_option("--stable-floor", c.classifier.stable_floor, "Absolute floor of the relative change")
        ->capture_default_str();
    app.add_option("--growth-factor", c.classifier.growth_factor, "Per-step growth counted as divergent")
        ->capture_default_str();
    app.add_option("--beta2-n-max", c.classifier.beta2_n_max, "Largest n tried for (beta2)")->capture_default_str();
    app.add_option("--beta2-eps-k-max", c.classifier.beta2_eps_k_max, "Smallest eps = 2^-k for (beta2)")
        ->capture_default_str();
    app.add_option("--tail-margin", c.classifier.tail_exponent_margin, "Power-law tails up to 1 + margin diverge")
        ->capture_default_str();

    auto* classify_cmd = app.add_subcommand("classify", "Classify a weight sequence");
    classify_cmd->add_option("--sequence", c.sequence, "Sequence spec (file or inline JSON)")->required();
    classify_cmd->add_option("--conditions", c.conditions, "Comma list, e.g. lc,gamma2,gamma_r(1.5)");

    auto* interp_cmd = app.add_subcommand("interpolate", "Check the 2-interpolating correspondence");
    interp_cmd->add_option("--sequence", c.sequence, "Sequence spec (file or inline JSON)")->required();
    interp_cmd->add_option("--csv", c.csv, "Write p, log N_p");

    auto* semi_cmd = app.add_subcommand("seminorm", "Evaluate a weighted sup seminorm");
    semi_cmd->add_option("--function", c.function, "Test function (file or inline JSON)")->required();
    semi_cmd->add_option("--sequence", c.sequence, "Weight sequence M")->required();
    semi_cmd->add_option("--dual-sequence", c.dual_sequence, "Derivative-side sequence A for the pair norm");
    semi_cmd->add_option("--n", c.n, "Derivative order cap")->capture_default_str();
    semi_cmd->add_option("--scale", c.h, "Scale h")->capture_default_str();
    semi_cmd->add_option("--cap", c.cap, "Derivative cap for the pair norm")->capture_default_str();
    semi_cmd->add_option("--csv", c.csv, "Write x and phi^(m)(x), m <= n, on the grid");

    auto* mom_cmd = app.add_subcommand("moments", "Moments of a test function after an operator pipeline");
    mom_cmd->add_option("--function", c.function, "Test function (file or inline JSON)")->required();
    mom_cmd->add_option("--ops", c.ops, "Comma list of operators applied left to right");
    mom_cmd->add_option("--p-max", c.p_max, "Highest moment")->check(CLI::Range(0, 64))->capture_default_str();
    mom_cmd->add_option("--scale", c.h, "Scale attached to the output sequence")->capture_default_str();

    auto* solve_cmd = app.add_subcommand("solve", "Solve the finite Stieltjes moment problem");
    solve_cmd->add_option("--target", c.target, "Target sequence (file or inline JSON)")->required();
    solve_cmd->add_option("--sequence", c.sequence, "Weight sequence M")->required();
    solve_cmd->add_option("--max-precision", c.max_precision, "Precision cap in bits")
        ->check(CLI::Range(64L, 2000L))
        ->capture_default_str();
    solve_cmd->add_flag("--reduction", c.reduction, "Also run the even/odd reduction chain");

    auto* br_cmd = app.add_subcommand("borel-ritt", "Solve the Borel-Ritt problem on the upper half-plane");
    br_cmd->add_option("--target", c.target, "Boundary derivative targets (file or inline JSON)")->required();
    br_cmd->add_option("--sequence", c.sequence, "Weight sequence M")->required();
    br_cmd->add_option("--max-precision", c.max_precision, "Precision cap in bits")
        ->check(CLI::Range(64L, 2000L))
        ->capture_default_str();
    br_cmd->add_flag("--uhf", c.uhf, "Report the ultraholomorphic norm estimate");
    br_cmd->add_option("--scale", c.h, "Scale h for the norm")->capture_default_str();
    br_cmd->add_option("--p-cap", c.p_cap, "Derivative cap for the norm")->check(CLI::Range(0, 32))->capture_default_str();
    br_cmd->add_option("--heatmap", c.heatmap, "Write Re z, Im z, |f(z)| over the norm grid");

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
    verify_cmd->add_option("--only", c.only, "Comma list of invariant names");

    std::vector<std::string> argv_store{"gsmoment"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        mp::PrecisionScope scope(c.precision);
        if (classify_cmd->parsed()) return cmd_classify(c, out);
        if (interp_cmd->parsed()) return cmd_interpolate(c, out);
        if (semi_cmd->parsed()) return cmd_seminorm(c, out);
        if (mom_cmd->parsed()) return cmd_moments(c, out);
        if (solve_cmd->parsed()) return cmd_solve(c, out);
        if (br_cmd->parsed()) return cmd_borel_ritt(c, out);
        if (verify_cmd->parsed()) return cmd_verify(c, out);
    } catch (const Error& e) {
        err << "gsmoment: " << e.what() << '\n';
        return e.code() == ErrorCode::ParseError ? kUsageError : kHardFailure;
    } catch (const io::json::exception& e) {
        err << "gsmoment: malformed input: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "gsmoment: " << e.what() << '\n';
        return kHardFailure;
    }
    return kUsageError;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace gsm::cli
