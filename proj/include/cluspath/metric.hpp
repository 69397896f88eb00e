#pragma once

#include <span>

#include "cluspath/core.hpp"

namespace cluspath {

// Weights of the descriptive and temporal components; at least one is 1.
struct TAWeights {
    double gamma_d = 1.0;
    double gamma_t = 1.0;

    bool operator==(const TAWeights&) const = default;
};

// Slider from temporal-only (alpha = -1) to descriptive-only (alpha = 1).
// Throws DomainError outside [-1, 1].
TAWeights gamma(double alpha);

// Squared diameters used as denominators. A zero diameter is replaced by 1 so
// the corresponding ratio is 0.
struct Scale {
    double diam_d2 = 1.0;
    double diam_t2 = 1.0;

    static Scale from(const Diameters& diam) noexcept;
};

// Temporal-aware dissimilarity given the squared descriptive and temporal gaps.
// Computed as r_d + r_t - r_d * r_t, which equals 1 - (1 - r_d)(1 - r_t).
inline double ta_from_squared(double dd2, double dt2, const TAWeights& w, const Scale& s) {
    const double rd = w.gamma_d * dd2 / s.diam_d2;
    const double rt = w.gamma_t * dt2 / s.diam_t2;
    return rd + rt - rd * rt;
}

// Throws DomainError when the descriptors differ in length.
double ta_dissim(std::span<const double> xd_i, double t_i, std::span<const double> xd_j,
                 double t_j, const TAWeights& w, const Diameters& diam);

double ta_dissim(const Prototype& a, const Prototype& b, const TAWeights& w, const Scale& s);

// Dissimilarity between observation i of ds and a prototype.
double ta_dissim(const Dataset& ds, std::size_t i, const Prototype& p, const TAWeights& w,
                 const Scale& s);

}  // namespace cluspath
