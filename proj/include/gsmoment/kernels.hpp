#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2/FMA variant. The active table is chosen once at
// runtime from CPUID; GSMOMENT_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace gsm::kernels {

struct KernelTable {
    std::string_view name;

    // max_p (p * log_t - log_M[p])
    double (*affine_max)(std::span<const double> log_M, double log_t);

    // sum_p max(0, log_t - log_ratio[p])
    double (*counting_sum)(std::span<const double> log_ratio, double log_t);

    // min_p (v[p+1] - v[p]); +inf for size < 2. Applied to log m_p this is
    // the smallest second difference of log M_p.
    double (*min_difference)(std::span<const double> v);

    // min_{0 <= p <= n} (v[p] + v[n-p]); requires n < v.size().
    double (*min_pair_sum)(std::span<const double> v, std::size_t n);

    // out[i] = sum_j coeff[j] * x[i]^j (Horner); out.size() == x.size().
    void (*horner)(std::span<const double> coeff, std::span<const double> x, std::span<double> out);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

const KernelTable& active();

}  // namespace gsm::kernels
