#pragma once

// JSON and CSV formats for sequences, targets, test functions and reports.
// Object keys come out sorted and no timestamps are written, so identical
// runs produce identical bytes.

#include <string>
#include <vector>

#include "json.hpp"

#include "gsmoment/conditions.hpp"
#include "gsmoment/halfplane.hpp"
#include "gsmoment/interpolating.hpp"
#include "gsmoment/moment_solver.hpp"
#include "gsmoment/sequence_target.hpp"
#include "gsmoment/test_function.hpp"
#include "gsmoment/transforms.hpp"
#include "gsmoment/weight_sequence.hpp"

namespace gsm::io {

using json = nlohmann::json;

// {"kind": "gevrey", "params": {"alpha": 3}, "horizon": 4096}; parameters may
// also sit at top level. Kinds: gevrey (alpha), qgevrey (q), table (log_M or
// M), expr (log_M, an expression in p).
SequenceSpec sequence_spec_from_json(const json& j);
json to_json(const SequenceSpec& s);

// {"h": 1, "entries": [[re, im], ...]}; a bare array means h = 1, and a bare
// number stands for a real entry.
SequenceTarget target_from_json(const json& j);
json to_json(const SequenceTarget& t);

// [{"kind": "flat_halfline", "k": 0, "re": "1", "im": "0"}, ...]; re and im
// may be numbers or decimal strings. Also accepted: {"atoms": [...]}.
TestFunction test_function_from_json(const json& j);
json to_json(const TestFunction& f);

json to_json(const ConditionReport& r);
json to_json(const std::vector<ConditionReport>& rs);
json to_json(const LemmaReport& r);
json to_json(const ProfileCell& c);
json to_json(const MomentSolution& s);
json to_json(const RoundtripRecord& r);
json to_json(const BoundaryCheck& c);
json to_json(const BorelRittSolution& s);

json complex_to_json(std::complex<double> z);
// Non-finite doubles become null.
json number(double v);

std::string residual_csv(const MomentSolution& s);
std::string profile_csv(const std::vector<ProfileCell>& cells);
// x, then re/im of phi^(m)(x) for m = 0..m_max.
std::string derivative_csv(const TestFunction& f, const std::vector<double>& xs, int m_max);
// Re z, Im z, |f(z)|.
std::string heatmap_csv(const HalfPlaneFunction& f, const std::vector<std::complex<double>>& grid);

// ParseError on unreadable files or malformed JSON.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace gsm::io
