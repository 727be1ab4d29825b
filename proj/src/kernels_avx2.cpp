// Compiled with -mavx2 -mfma; only reached after a CPUID check in the dispatcher.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmoment/kernels.hpp"

namespace gsm::kernels {

namespace {

double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    return std::min(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double affine_max(std::span<const double> log_M, double log_t) {
    const std::size_t n = log_M.size();
    const __m256d lt = _mm256_set1_pd(log_t);
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        const __m256d v = _mm256_fmsub_pd(idx, lt, _mm256_loadu_pd(log_M.data() + p));
        best = _mm256_max_pd(best, v);
        idx = _mm256_add_pd(idx, step);
    }
    double out = hmax(best);
    for (; p < n; ++p) {
        out = std::max(out, static_cast<double>(p) * log_t - log_M[p]);
    }
    return out;
}

double counting_sum(std::span<const double> log_ratio, double log_t) {
    const std::size_t n = log_ratio.size();
    const __m256d lt = _mm256_set1_pd(log_t);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        const __m256d d = _mm256_sub_pd(lt, _mm256_loadu_pd(log_ratio.data() + p));
        acc = _mm256_add_pd(acc, _mm256_max_pd(d, zero));
    }
    double out = hsum(acc);
    for (; p < n; ++p) {
        out += std::max(0.0, log_t - log_ratio[p]);
    }
    return out;
}

double min_difference(std::span<const double> v) {
    const std::size_t n = v.size();
    double out = std::numeric_limits<double>::infinity();
    if (n < 2) return out;
    __m256d best = _mm256_set1_pd(out);
    std::size_t p = 0;
    for (; p + 4 < n; p += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.data() + p + 1), _mm256_loadu_pd(v.data() + p));
        best = _mm256_min_pd(best, d);
    }
    out = hmin(best);
    for (; p + 1 < n; ++p) {
        out = std::min(out, v[p + 1] - v[p]);
    }
    return out;
}

double min_pair_sum(std::span<const double> v, std::size_t n) {
    const std::size_t last = n / 2;
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t p = 0;
    // Lanes p..p+3 pair with n-p..n-p-3, loaded as a reversed block.
    for (; p + 3 <= last; p += 4) {
        const __m256d lo = _mm256_loadu_pd(v.data() + p);
        const __m256d hi = _mm256_permute4x64_pd(_mm256_loadu_pd(v.data() + (n - p - 3)), 0x1B);
        best = _mm256_min_pd(best, _mm256_add_pd(lo, hi));
    }
    double out = hmin(best);
    for (; p <= last; ++p) {
        out = std::min(out, v[p] + v[n - p]);
    }
    return out;
}

void horner(std::span<const double> coeff, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x.data() + i);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = coeff.size(); j-- > 0;) {
            acc = _mm256_fmadd_pd(acc, xv, _mm256_set1_pd(coeff[j]));
        }
        _mm256_storeu_pd(out.data() + i, acc);
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = coeff.size(); j-- > 0;) {
            acc = std::fma(acc, x[i], coeff[j]);
        }
        out[i] = acc;
    }
}

}  // namespace

const KernelTable& avx2_table_impl() {
    static const KernelTable table{"avx2", affine_max, counting_sum, min_difference, min_pair_sum, horner};
    return table;
}

}  // namespace gsm::kernels
