#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsmoment/cli.hpp"
#include "json.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int s = gsm::cli::run(args, out, err);
    return {s, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / "gsmoment_cli_test";
    fs::create_directories(d);
    return d;
}

const std::string kG3 = R"({"kind":"gevrey","params":{"alpha":3}})";

}  // namespace

TEST_CASE("classify") {
    const auto r = run({"classify", "--sequence", kG3});
    CHECK(r.status == gsm::cli::kOk);
    const auto j = json::parse(r.out);
    bool found = false;
    for (const auto& c : j) {
        if (c["condition"] == "gamma2") found = c["verdict"] == "Holds";
    }
    CHECK(found);

    const auto c = run({"classify", "--sequence", kG3, "--conditions", "lc,gamma_r(3)"});
    CHECK(json::parse(c.out).size() == 2);
}

TEST_CASE("table needing extrapolation is inconclusive") {
    json t{{"kind", "table"}, {"log_M", json::array()}};
    for (int p = 0; p < 80; ++p) t["log_M"].push_back(2.0 * std::lgamma(p + 1.0));
    CHECK(run({"classify", "--sequence", t.dump()}).status == gsm::cli::kInconclusive);
}

TEST_CASE("usage and input errors") {
    CHECK(run({}).status == gsm::cli::kUsageError);
    CHECK(run({"frobnicate"}).status == gsm::cli::kUsageError);
    CHECK(run({"classify"}).status == gsm::cli::kUsageError);
    CHECK(run({"--precision", "32", "classify", "--sequence", kG3}).status == gsm::cli::kUsageError);
    CHECK(run({"--horizon", "10", "classify", "--sequence", kG3}).status == gsm::cli::kUsageError);
    const auto bad = run({"classify", "--sequence", "{\"kind\":"});
    CHECK(bad.status == gsm::cli::kUsageError);
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"classify", "--sequence", "/nonexistent/seq.json"}).status == gsm::cli::kUsageError);
    CHECK(run({"classify", "--sequence", R"({"kind":"zeta"})"}).status == gsm::cli::kUsageError);
    CHECK(run({"--help"}).status == gsm::cli::kOk);
}

TEST_CASE("hard failures") {
    const auto r = run({"classify", "--sequence", R"({"kind":"table","log_M":[0,0,-1]})"});
    CHECK(r.status == gsm::cli::kHardFailure);
    CHECK(r.err.find("NotAWeightSequence") != std::string::npos);
    const auto refused = run({"solve", "--sequence", R"({"kind":"gevrey","params":{"alpha":1.5}})", "--target",
                              "[[1,0],[0,0]]"});
    CHECK(refused.status == gsm::cli::kHardFailure);
    CHECK(refused.err.find("ConditionRefused") != std::string::npos);
}

TEST_CASE("solve writes the bundle") {
    const fs::path out = scratch() / "zero.json";
    const auto r = run({"--out", out.string(), "solve", "--sequence", kG3, "--target", R"({"h":1,"entries":[0,0,0,0]})"});
    REQUIRE(r.status == gsm::cli::kOk);
    const auto j = json::parse(slurp(out));
    for (const auto& c : j["coefficients"]) {
        CHECK(c[0] == "0");
        CHECK(c[1] == "0");
    }
    CHECK(fs::exists(scratch() / "zero.residuals.csv"));
    CHECK(fs::exists(scratch() / "zero.profile.csv"));
}

TEST_CASE("reruns are byte-identical") {
    const std::vector<std::string> args{"solve", "--sequence", kG3, "--target", R"({"h":0.25,"entries":[1,[0,2],-3]})",
                                        "--reduction"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.status == gsm::cli::kOk);
    CHECK(a.out == b.out);
    const auto c = run({"interpolate", "--sequence", kG3}), d = run({"interpolate", "--sequence", kG3});
    CHECK(c.out == d.out);
}

TEST_CASE("interpolate") {
    const auto r = run({"interpolate", "--sequence", R"({"kind":"qgevrey","q":2})"});
    CHECK(r.status == gsm::cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["lemma"]["beta2"]["agreement"] == "Agree");
}

TEST_CASE("moments and seminorm") {
    const std::string fn = R"({"atoms":[{"kind":"flat_halfline","k":0,"re":"1","im":"0"}]})";
    const auto m = run({"moments", "--function", fn, "--ops", "square_sub,te", "--p-max", "6"});
    REQUIRE(m.status == gsm::cli::kOk);
    const auto j = json::parse(m.out);
    CHECK(j["kind"] == "sequence");
    CHECK(j["moments"]["entries"][0][0].get<double>() == doctest::Approx(0.2797317636330439));
    const auto s = run({"seminorm", "--function", fn, "--sequence", kG3, "--n", "2", "--dual-sequence", kG3});
    REQUIRE(s.status == gsm::cli::kOk);
    CHECK(json::parse(s.out)["seminorm"]["value"].get<double>() > 0);
}

TEST_CASE("borel-ritt and verify") {
    const fs::path heat = scratch() / "heat.csv";
    const auto br = run({"borel-ritt", "--sequence", kG3, "--target", "[1,0,0,0]", "--uhf", "--heatmap", heat.string()});
    CHECK(br.status == gsm::cli::kOk);
    CHECK(fs::file_size(heat) > 0);
    const auto v = run({"verify", "--only", "sequence_maps,multiplier_roundtrip"});
    CHECK(v.status == gsm::cli::kOk);
    CHECK(json::parse(v.out)["passed"] == 2);
    CHECK(run({"verify", "--only", "no_such_check"}).status == gsm::cli::kUsageError);
}
