#include "gsmoment/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/error.hpp"

namespace gsm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kRefinePoints = 32;

void check_weight(const WeightSequence& ws, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidParameter, "seminorm needs h > 0");
    if (!ws.log_convex()) {
        throw Error(ErrorCode::RequiresLogConvexity, "seminorm weight " + ws.description() + " violates (lc)");
    }
}

// Adds kRefinePoints evenly spaced abscissas around the grid argmax.
std::vector<double> refine_around(const std::vector<double>& grid, std::size_t at) {
    const double lo = at == 0 ? grid[at] * 0.5 : grid[at - 1];
    const double hi = at + 1 < grid.size() ? grid[at + 1] : grid[at];
    std::vector<double> extra;
    for (int i = 1; i < kRefinePoints; ++i) extra.push_back(lo + (hi - lo) * i / kRefinePoints);
    return extra;
}

// Core sweep: weight(m, log|x|) gives the log of the per-order weight factor.
template <class Weight>
SeminormResult sweep(const TestFunction& f, int n_max, const std::vector<double>& base_grid, Weight&& weight) {
    SeminormResult best;
    best.log_value = kNegInf;
    if (f.is_zero()) return best;
    std::vector<double> grid = base_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty() || !(grid.front() > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "seminorm grid must be nonempty and positive");
    }
    const bool mirrored = f.has_kind(AtomKind::FlatReflected) || f.has_kind(AtomKind::GaussianPoly);
    const DerivativeTable table(f, n_max);
    std::size_t best_index = 0;
    auto visit = [&](double x_abs, std::size_t index) {
        const double lx = std::log(x_abs);
        for (int m = 0; m <= n_max; ++m) {
            const double w = weight(m, lx);
            for (double x : {x_abs, -x_abs}) {
                if (x < 0.0 && !mirrored) continue;
                const double v = table.log_abs(m, x) + w;
                if (v > best.log_value) {
                    best.log_value = v;
                    best.argmax_m = m;
                    best.argmax_x = x;
                    best_index = index;
                }
            }
        }
    };
    for (std::size_t i = 0; i < grid.size(); ++i) visit(grid[i], i);
    if (best.log_value == kNegInf) return best;
    best.at_grid_edge = best_index + 1 == grid.size();
    const std::size_t keep = best_index;
    const double keep_x = best.argmax_x;
    for (double x : refine_around(grid, keep)) visit(x, keep);
    best.at_grid_edge = best.at_grid_edge && std::fabs(best.argmax_x) == std::fabs(keep_x);
    return best;
}

}  // namespace

double SeminormResult::value() const { return std::exp(log_value); }

std::vector<double> default_grid(const WeightSequence& ws, double h) {
    // pulled in slightly so that log h + log x_max stays at or below log m_P after rounding
    const double log_xmax = std::min(std::log(1e3), ws.log_ratio(ws.horizon()) - std::log(h) - 1e-12);
    const double x_max = std::exp(log_xmax);
    std::vector<double> g;
    for (int i = 1; i <= 200; ++i) {
        const double x = i / 200.0;
        if (x <= x_max) g.push_back(x);
    }
    const double lo = std::log(1e-3);
    if (log_xmax > lo) {
        for (int i = 0; i < 400; ++i) g.push_back(std::exp(lo + (log_xmax - lo) * i / 399.0));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty()) throw Error(ErrorCode::HorizonExceeded, "no grid point satisfies h x <= m_P");
    return g;
}

SeminormResult seminorm_detail(const TestFunction& f, const SeminormQuery& q, const WeightSequence& ws) {
    check_weight(ws, q.h);
    if (q.n < 0) throw Error(ErrorCode::InvalidParameter, "seminorm order must be >= 0");
    const std::vector<double> grid = q.grid.empty() ? default_grid(ws, q.h) : q.grid;
    const double lh = std::log(q.h);
    return sweep(f, q.n, grid, [&](int, double lx) { return associated_function_log(ws, lh + lx); });
}

double seminorm(const TestFunction& f, const SeminormQuery& q, const WeightSequence& ws) {
    return seminorm_detail(f, q, ws).value();
}

SeminormResult dual_seminorm_detail(const TestFunction& f, int cap, double h, const WeightSequence& ws_M,
                                    const WeightSequence& ws_A, const std::vector<double>& grid) {
    check_weight(ws_M, h);
    check_weight(ws_A, h);
    if (cap < 0) throw Error(ErrorCode::InvalidParameter, "derivative cap must be >= 0");
    if (cap > kDefaultMaxDerivative) {
        throw Error(ErrorCode::DepthExceeded, "derivative cap above " + std::to_string(kDefaultMaxDerivative));
    }
    const std::vector<double> g = grid.empty() ? default_grid(ws_M, h) : grid;
    const double lh = std::log(h);
    return sweep(f, cap, g, [&](int m, double lx) {
        return associated_function_log(ws_M, lh + lx) + m * lh - ws_A.log_M(m);
    });
}

double dual_seminorm_pair(const TestFunction& f, int cap, double h, const WeightSequence& ws_M,
                          const WeightSequence& ws_A, const std::vector<double>& grid) {
    return dual_seminorm_detail(f, cap, h, ws_M, ws_A, grid).value();
}

}  // namespace gsm
