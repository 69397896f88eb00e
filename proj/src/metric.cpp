#include "cluspath/metric.hpp"

#include <string>

#include "cluspath/error.hpp"
#include "cluspath/kernels.hpp"

namespace cluspath {

TAWeights gamma(double alpha) {
    if (!(alpha >= -1.0 && alpha <= 1.0)) {
        throw DomainError("alpha = " + std::to_string(alpha) + " is outside [-1, 1]");
    }
    if (alpha <= 0.0) {
        return {1.0 + alpha, 1.0};
    }
    return {1.0, 1.0 - alpha};
}

Scale Scale::from(const Diameters& diam) noexcept {
    Scale s;
    s.diam_d2 = diam.degenerate_d() ? 1.0 : diam.d * diam.d;
    s.diam_t2 = diam.degenerate_t() ? 1.0 : diam.t * diam.t;
    return s;
}

double ta_dissim(std::span<const double> xd_i, double t_i, std::span<const double> xd_j,
                 double t_j, const TAWeights& w, const Diameters& diam) {
    if (xd_i.size() != xd_j.size()) {
        throw DomainError("descriptor dimensions differ: " + std::to_string(xd_i.size()) +
                          " vs " + std::to_string(xd_j.size()));
    }
    const double dt = t_i - t_j;
    return ta_from_squared(kernels::squared_distance(xd_i, xd_j), dt * dt, w, Scale::from(diam));
}

double ta_dissim(const Prototype& a, const Prototype& b, const TAWeights& w, const Scale& s) {
    const double dt = a.mu_t - b.mu_t;
    return ta_from_squared(kernels::squared_distance(a.mu_d, b.mu_d), dt * dt, w, s);
}

double ta_dissim(const Dataset& ds, std::size_t i, const Prototype& p, const TAWeights& w,
                 const Scale& s) {
    const double dt = ds.time(i) - p.mu_t;
    return ta_from_squared(kernels::squared_distance(ds.descriptor(i), p.mu_d), dt * dt, w, s);
}

}  // namespace cluspath
