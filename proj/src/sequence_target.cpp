#include "gsmoment/sequence_target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gsmoment/error.hpp"

namespace gsm {

bool SequenceTarget::is_zero() const {
    return std::all_of(entries.begin(), entries.end(), [](std::complex<double> z) { return z == 0.0; });
}

SequenceTarget SequenceTarget::zeros(int P, double h) {
    if (P < 0) throw Error(ErrorCode::InvalidParameter, "target order must be >= 0");
    return {std::vector<std::complex<double>>(static_cast<std::size_t>(P) + 1), h};
}

SequenceTarget SequenceTarget::unit(int P, int index, double h) {
    SequenceTarget t = zeros(P, h);
    if (index < 0 || index > P) throw Error(ErrorCode::InvalidParameter, "unit index outside 0..P");
    t.entries[static_cast<std::size_t>(index)] = 1.0;
    return t;
}

double log_lambda_norm(const SequenceTarget& a, const WeightSequence& ws) {
    if (!(a.h > 0.0)) throw Error(ErrorCode::InvalidParameter, "target scale h must be > 0");
    double best = -std::numeric_limits<double>::infinity();
    const double lh = std::log(a.h);
    for (int p = 0; p <= a.order(); ++p) {
        const double mag = std::abs(a.entries[static_cast<std::size_t>(p)]);
        if (mag == 0.0) continue;
        best = std::max(best, p * lh + std::log(mag) - ws.log_M(p));
    }
    return best;
}

double lambda_norm(const SequenceTarget& a, const WeightSequence& ws) { return std::exp(log_lambda_norm(a, ws)); }

SequenceTarget random_ball_target(const WeightSequence& ws, int P, double h, unsigned long seed, double radius) {
    SequenceTarget t = SequenceTarget::zeros(P, h);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int p = 0; p <= P; ++p) {
        const double r = radius * unit(rng);
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        const double scale = std::exp(ws.log_M(p) - p * std::log(h));
        t.entries[static_cast<std::size_t>(p)] = std::polar(r * scale, theta);
    }
    return t;
}

}  // namespace gsm
