#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cluspath/core.hpp"
#include "cluspath/metric.hpp"
#include "cluspath/objective.hpp"

namespace testing {

struct InstanceShape {
    std::size_t entities = 10;
    std::size_t per_entity = 8;
    std::size_t dim = 4;
    double time_span = 20.0;
};

// Entities with sorted random times and Gaussian descriptors drifting over time.
inline cluspath::Dataset random_dataset(const InstanceShape& shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<cluspath::Observation> obs;
    for (std::size_t e = 0; e < shape.entities; ++e) {
        std::vector<double> times;
        while (times.size() < shape.per_entity) {
            const double t = std::round(unit(rng) * shape.time_span * 100.0) / 100.0;
            if (std::find(times.begin(), times.end(), t) == times.end()) {
                times.push_back(t);
            }
        }
        std::sort(times.begin(), times.end());
        std::vector<double> drift(shape.dim);
        for (double& v : drift) {
            v = noise(rng) * 0.3;
        }
        for (double t : times) {
            cluspath::Observation o;
            o.entity = "p" + std::to_string(e);
            o.time = t;
            for (std::size_t d = 0; d < shape.dim; ++d) {
                o.descriptor.push_back(drift[d] * t + noise(rng));
            }
            obs.push_back(std::move(o));
        }
    }
    return cluspath::Dataset::from_observations(obs);
}

// Uniform draw from the tuner's default search box.
inline cluspath::HyperParams random_params(std::size_t k, std::mt19937_64& rng,
                                           double beta_hi = 1e-3) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    cluspath::HyperParams hp;
    hp.k = k;
    hp.alpha = -1.0 + 2.0 * unit(rng);
    hp.beta = beta_hi * unit(rng);
    hp.delta = 0.1 + 9.9 * unit(rng);
    hp.lambda1 = 1000.0 * unit(rng);
    hp.lambda2 = 1000.0 * unit(rng);
    hp.lambda3 = 1000.0 * unit(rng);
    return hp;
}

inline cluspath::Assignment random_assignment(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    cluspath::Assignment asg{k, std::vector<std::size_t>(n)};
    for (auto& c : asg.cluster_of) {
        c = pick(rng);
    }
    return asg;
}

inline std::vector<cluspath::Prototype> random_prototypes(const cluspath::Dataset& ds,
                                                          std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double t_lo = ds.time(0);
    double t_hi = ds.time(0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        t_lo = std::min(t_lo, ds.time(i));
        t_hi = std::max(t_hi, ds.time(i));
    }
    std::vector<cluspath::Prototype> protos(k);
    for (auto& p : protos) {
        p.mu_t = t_lo + (t_hi - t_lo) * unit(rng);
        p.mu_d.resize(ds.dim());
        for (double& v : p.mu_d) {
            v = noise(rng);
        }
    }
    return protos;
}

// Random off-diagonal matrix with unit sum.
inline cluspath::AdjacencyMatrix random_adjacency(std::size_t k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    cluspath::AdjacencyMatrix adj(k);
    double total = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            if (p != q) {
                adj(p, q) = unit(rng);
                total += adj(p, q);
            }
        }
    }
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            adj(p, q) /= total;
        }
    }
    return adj;
}

inline double choose2(double n) { return n * (n - 1.0) / 2.0; }

// Adjusted Rand index from the contingency table.
inline double adjusted_rand(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> ra;
    std::map<std::size_t, double> rb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    double index = 0.0;
    for (const auto& [key, n] : joint) {
        index += choose2(n);
    }
    double sa = 0.0;
    double sb = 0.0;
    for (const auto& [key, n] : ra) {
        sa += choose2(n);
    }
    for (const auto& [key, n] : rb) {
        sb += choose2(n);
    }
    const double expected = sa * sb / choose2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected) {
        return 1.0;
    }
    return (index - expected) / (max_index - expected);
}

// J straight from the definitions, without the library's objective code.
inline double brute_force_j(const cluspath::Dataset& ds, const cluspath::Assignment& asg,
                            const std::vector<cluspath::Prototype>& protos,
                            const cluspath::AdjacencyMatrix& adj, const cluspath::HyperParams& hp) {
    const std::size_t k = protos.size();
    double gd = 1.0;
    double gt = 1.0;
    if (hp.alpha <= 0.0) {
        gd = 1.0 + hp.alpha;
    } else {
        gt = 1.0 - hp.alpha;
    }
    double dmax = 0.0;
    double tmax = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < ds.dim(); ++d) {
                const double g = ds.descriptor(i)[d] - ds.descriptor(j)[d];
                s += g * g;
            }
            dmax = std::max(dmax, s);
            tmax = std::max(tmax, (ds.time(i) - ds.time(j)) * (ds.time(i) - ds.time(j)));
        }
    }
    if (dmax == 0.0) dmax = 1.0;
    if (tmax == 0.0) tmax = 1.0;
    auto dis = [&](const std::vector<double>& xd, double xt, const cluspath::Prototype& p) {
        double s = 0.0;
        for (std::size_t d = 0; d < xd.size(); ++d) {
            s += (xd[d] - p.mu_d[d]) * (xd[d] - p.mu_d[d]);
        }
        return 1.0 - (1.0 - gd * s / dmax) * (1.0 - gt * (xt - p.mu_t) * (xt - p.mu_t) / tmax);
    };
    double t1 = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::vector<double> xi(ds.descriptor(i).begin(), ds.descriptor(i).end());
        t1 += dis(xi, ds.time(i), protos[asg[i]]);
        for (std::size_t m = 0; m < ds.size(); ++m) {
            if (ds.entity_of(m) == ds.entity_of(i) && ds.time(i) < ds.time(m) && asg[i] != asg[m]) {
                const double dt = (ds.time(m) - ds.time(i)) / hp.delta;
                const double a = adj(asg[i], asg[m]);
                t1 += hp.beta * std::exp(-0.5 * dt * dt) * (1.0 - a * a);
            }
        }
    }
    double t2 = 0.0;
    double t3 = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            if (p == q) continue;
            const double a2 = adj(p, q) * adj(p, q);
            t2 += a2 * dis(protos[q].mu_d, protos[q].mu_t, protos[p]);
            double moved = 0.0;
            for (std::size_t e = 0; e < ds.entity_count(); ++e) {
                const auto s = ds.series(e);
                for (std::size_t r = 0; r + 1 < s.size(); ++r) {
                    if (asg[s[r]] == p && asg[s[r + 1]] == q) {
                        moved += 1.0;
                        break;
                    }
                }
            }
            const double inter = 1.0 - moved / static_cast<double>(ds.entity_count());
            t3 += a2 * inter * inter;
        }
    }
    return hp.lambda1 * t1 + hp.lambda2 * t2 + hp.lambda3 * t3;
}

}  // namespace testing
