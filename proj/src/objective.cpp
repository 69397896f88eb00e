#include "cluspath/objective.hpp"

#include <cmath>
#include <string>

#include "cluspath/error.hpp"

namespace cluspath {

double constraint_decay(double dt, double beta, double delta) {
    if (beta == 0.0) {
        return 0.0;
    }
    const double z = dt / delta;
    return beta * std::exp(-0.5 * z * z);
}

double penalty_w(double t_i, double t_k, bool same_entity, double a_jl, double beta,
                 double delta) {
    if (!same_entity || !(t_i < t_k)) {
        return 0.0;
    }
    return constraint_decay(t_k - t_i, beta, delta) * (1.0 - a_jl * a_jl);
}

double term1(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos,
             const AdjacencyMatrix& adj, const HyperParams& hp) {
    const TAWeights w = gamma(hp.alpha);
    const Scale s = Scale::from(ds.diameters());
    double within = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        within += ta_dissim(ds, i, protos[asg[i]], w, s);
    }
    double penalties = 0.0;
    if (hp.beta != 0.0) {
        for (std::size_t e = 0; e < ds.entity_count(); ++e) {
            const auto series = ds.series(e);
            for (std::size_t a = 0; a < series.size(); ++a) {
                const std::size_t i = series[a];
                for (std::size_t b = a + 1; b < series.size(); ++b) {
                    const std::size_t k = series[b];
                    if (asg[i] != asg[k]) {
                        penalties += penalty_w(ds.time(i), ds.time(k), true, adj(asg[i], asg[k]),
                                               hp.beta, hp.delta);
                    }
                }
            }
        }
    }
    return within + penalties;
}

double term2(const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
             const TAWeights& w, const Scale& s) {
    double total = 0.0;
    const std::size_t k = protos.size();
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            const double a = adj(p, q);
            if (p != q && a != 0.0) {
                total += a * a * ta_dissim(protos[p], protos[q], w, s);
            }
        }
    }
    return total;
}

std::vector<std::size_t> transition_entity_counts(const Dataset& ds, const Assignment& asg) {
    const std::size_t k = asg.k;
    std::vector<std::size_t> counts(k * k, 0);
    std::vector<std::size_t> last_entity(k * k, SIZE_MAX);
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        const auto series = ds.series(e);
        for (std::size_t r = 1; r < series.size(); ++r) {
            const std::size_t p = asg[series[r - 1]];
            const std::size_t q = asg[series[r]];
            if (p != q && last_entity[p * k + q] != e) {
                last_entity[p * k + q] = e;
                ++counts[p * k + q];
            }
        }
    }
    return counts;
}

double inter_phi(const Dataset& ds, const Assignment& asg, std::size_t p, std::size_t q) {
    if (p == q) {
        throw DomainError("inter_phi needs two distinct clusters, got " + std::to_string(p) +
                          " twice");
    }
    const auto counts = transition_entity_counts(ds, asg);
    return 1.0 - static_cast<double>(counts[p * asg.k + q]) /
                     static_cast<double>(ds.entity_count());
}

double term3(const Dataset& ds, const Assignment& asg, const AdjacencyMatrix& adj) {
    const std::size_t k = asg.k;
    const auto counts = transition_entity_counts(ds, asg);
    const double entities = static_cast<double>(ds.entity_count());
    double total = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            const double a = adj(p, q);
            if (p != q && a != 0.0) {
                const double inter = 1.0 - static_cast<double>(counts[p * k + q]) / entities;
                total += a * a * inter * inter;
            }
        }
    }
    return total;
}

ObjectiveBreakdown objective_j(const Dataset& ds, const Assignment& asg,
                               const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                               const HyperParams& hp) {
    ObjectiveBreakdown out;
    out.t1 = term1(ds, asg, protos, adj, hp);
    out.t2 = term2(protos, adj, gamma(hp.alpha), Scale::from(ds.diameters()));
    out.t3 = term3(ds, asg, adj);
    out.j = hp.lambda1 * out.t1 + hp.lambda2 * out.t2 + hp.lambda3 * out.t3;
    return out;
}

std::vector<double> pen_matrix(const Dataset& ds, const Assignment& asg, double beta,
                               double delta) {
    const std::size_t k = asg.k;
    std::vector<double> pen(k * k, 0.0);
    if (beta == 0.0) {
        return pen;
    }
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        const auto series = ds.series(e);
        for (std::size_t a = 0; a < series.size(); ++a) {
            const std::size_t i = series[a];
            for (std::size_t b = a + 1; b < series.size(); ++b) {
                const std::size_t l = series[b];
                if (asg[i] != asg[l]) {
                    pen[asg[i] * k + asg[l]] +=
                        constraint_decay(ds.time(l) - ds.time(i), beta, delta);
                }
            }
        }
    }
    return pen;
}

double pen_transition(const Dataset& ds, const Assignment& asg, std::size_t r, std::size_t s,
                      double beta, double delta) {
    if (r == s) {
        throw DomainError("pen_transition needs two distinct clusters");
    }
    return pen_matrix(ds, asg, beta, delta)[r * asg.k + s];
}

}  // namespace cluspath
