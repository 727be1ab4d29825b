#pragma once

// Grid evaluation of sup_x |phi^(m)(x)| exp(M(h|x|)) in log domain.

#include <vector>

#include "gsmoment/test_function.hpp"
#include "gsmoment/weight_sequence.hpp"

namespace gsm {

struct SeminormQuery {
    int n = 0;         // derivative orders 0..n
    double h = 1.0;
    // Positive abscissas; empty selects default_grid(ws, h). Mirrored to -x
    // when the function has mass on the negative axis.
    std::vector<double> grid;
};

struct SeminormResult {
    double log_value = 0.0;  // -inf for the zero function
    int argmax_m = 0;
    double argmax_x = 0.0;
    bool at_grid_edge = false;  // sup attained at the largest |x| on the grid

    double value() const;
};

// 200 linear points on (0, 1] and 400 log-spaced points on [1e-3, x_max],
// x_max = min(1e3, m_P / h), so that h x stays inside the horizon.
std::vector<double> default_grid(const WeightSequence& ws, double h);

SeminormResult seminorm_detail(const TestFunction& f, const SeminormQuery& q, const WeightSequence& ws);
double seminorm(const TestFunction& f, const SeminormQuery& q, const WeightSequence& ws);

// max_{q <= cap} sup_x |phi^(q)(x)| exp(M(h|x|)) h^q / A_q.
SeminormResult dual_seminorm_detail(const TestFunction& f, int cap, double h, const WeightSequence& ws_M,
                                    const WeightSequence& ws_A, const std::vector<double>& grid = {});
double dual_seminorm_pair(const TestFunction& f, int cap, double h, const WeightSequence& ws_M,
                          const WeightSequence& ws_A, const std::vector<double>& grid = {});

}  // namespace gsm
