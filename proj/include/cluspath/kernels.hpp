#pragma once

// Data-parallel inner loops shared by the solver, the measures and the
// baselines. Every kernel has a scalar reference implementation; SIMD
// variants are selected once at startup from what the CPU supports and are
// tested for equivalence against the reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace cluspath::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    // sum_k (a[k] - b[k])^2
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // y[k] += w * x[k]
    void (*axpy)(double w, const double* x, double* y, std::size_t n);
    // out[r] = squared_distance(point, rows + r * dim, dim) for r in [0, n_rows)
    void (*squared_distances)(const double* point, const double* rows, std::size_t n_rows,
                              std::size_t dim, double* out);
};

std::string_view isa_name(Isa isa) noexcept;

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

const KernelTable& table(Isa isa);

// The table used by the library. Defaults to the widest available ISA; the
// environment variable CLUSPATH_KERNEL=scalar|avx2 overrides the choice.
const KernelTable& active() noexcept;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double w, std::span<const double> x, std::span<double> y) {
    active().axpy(w, x.data(), y.data(), x.size());
}

namespace scalar {
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double w, const double* x, double* y, std::size_t n);
void squared_distances(const double* point, const double* rows, std::size_t n_rows,
                       std::size_t dim, double* out);
}  // namespace scalar

namespace avx2 {
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double w, const double* x, double* y, std::size_t n);
void squared_distances(const double* point, const double* rows, std::size_t n_rows,
                       std::size_t dim, double* out);
}  // namespace avx2

}  // namespace cluspath::kernels
