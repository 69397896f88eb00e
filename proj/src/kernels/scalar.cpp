#include "cluspath/kernels.hpp"

namespace cluspath::kernels::scalar {

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double diff = a[k] - b[k];
        acc += diff * diff;
    }
    return acc;
}

void axpy(double w, const double* x, double* y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        y[k] += w * x[k];
    }
}

void squared_distances(const double* point, const double* rows, std::size_t n_rows,
                       std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        out[r] = squared_distance(point, rows + r * dim, dim);
    }
}

}  // namespace cluspath::kernels::scalar
