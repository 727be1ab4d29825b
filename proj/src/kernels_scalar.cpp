#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/kernels.hpp"

namespace gsm::kernels {

namespace {

double affine_max(std::span<const double> log_M, double log_t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < log_M.size(); ++p) {
        best = std::max(best, static_cast<double>(p) * log_t - log_M[p]);
    }
    return best;
}

double counting_sum(std::span<const double> log_ratio, double log_t) {
    double sum = 0.0;
    for (double l : log_ratio) {
        sum += std::max(0.0, log_t - l);
    }
    return sum;
}

double min_difference(std::span<const double> v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p + 1 < v.size(); ++p) {
        best = std::min(best, v[p + 1] - v[p]);
    }
    return best;
}

double min_pair_sum(std::span<const double> v, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= n / 2; ++p) {
        best = std::min(best, v[p] + v[n - p]);
    }
    return best;
}

void horner(std::span<const double> coeff, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = coeff.size(); j-- > 0;) {
            acc = std::fma(acc, x[i], coeff[j]);
        }
        out[i] = acc;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", affine_max, counting_sum, min_difference, min_pair_sum, horner};
    return table;
}

}  // namespace gsm::kernels
