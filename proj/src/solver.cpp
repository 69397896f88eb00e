#include "cluspath/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "cluspath/error.hpp"
#include "cluspath/io.hpp"
#include "cluspath/kernels.hpp"
#include "cluspath/log.hpp"
#include "cluspath/metric.hpp"

namespace cluspath {
namespace {

// Distinct (p, q) pairs, encoded p * k + q, of consecutive placed observations
// of one entity, where `label` gives each observation's cluster.
template <typename Label>
std::vector<std::size_t> entity_transitions(std::span<const std::size_t> series, std::size_t k,
                                            Label label) {
    std::vector<std::size_t> pairs;
    for (std::size_t r = 1; r < series.size(); ++r) {
        const std::size_t p = label(series[r - 1]);
        const std::size_t q = label(series[r]);
        if (p != kUnassigned && q != kUnassigned && p != q) {
            pairs.push_back(p * k + q);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<std::size_t> partial_transition_counts(const Dataset& ds, const Assignment& asg) {
    std::vector<std::size_t> counts(asg.k * asg.k, 0);
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        for (std::size_t pair : entity_transitions(ds.series(e), asg.k,
                                                   [&](std::size_t i) { return asg[i]; })) {
            ++counts[pair];
        }
    }
    return counts;
}

// Scores every candidate cluster for observation i. `counts` holds the
// per-pair entity transition counts of the current (partial) assignment and
// is only read by the exact rule.
void score_candidates(std::size_t i, const Dataset& ds, const Assignment& asg,
                      const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                      const HyperParams& hp, AssignmentRule rule,
                      const std::vector<std::size_t>& counts, const TAWeights& w, const Scale& s,
                      std::vector<double>& costs) {
    const std::size_t k = protos.size();
    const std::size_t e = ds.entity_of(i);
    const auto series = ds.series(e);
    const std::size_t rank = ds.rank_in_series(i);
    const double t_i = ds.time(i);

    costs.assign(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        costs[p] = ta_dissim(ds, i, protos[p], w, s);
    }

    if (hp.beta != 0.0) {
        for (std::size_t b = rank + 1; b < series.size(); ++b) {
            const std::size_t c = asg[series[b]];
            if (c == kUnassigned) {
                continue;
            }
            const double decay = constraint_decay(ds.time(series[b]) - t_i, hp.beta, hp.delta);
            for (std::size_t p = 0; p < k; ++p) {
                if (p != c) {
                    const double a = adj(p, c);
                    costs[p] += decay * (1.0 - a * a);
                }
            }
        }
        if (rule == AssignmentRule::exact) {
            for (std::size_t b = 0; b < rank; ++b) {
                const std::size_t c = asg[series[b]];
                if (c == kUnassigned) {
                    continue;
                }
                const double decay =
                    constraint_decay(t_i - ds.time(series[b]), hp.beta, hp.delta);
                for (std::size_t p = 0; p < k; ++p) {
                    if (p != c) {
                        const double a = adj(c, p);
                        costs[p] += decay * (1.0 - a * a);
                    }
                }
            }
        }
    }

    if (rule != AssignmentRule::exact) {
        return;
    }
    for (double& c : costs) {
        c *= hp.lambda1;
    }
    if (hp.lambda3 == 0.0) {
        return;
    }

    // Transition term restricted to the pairs this entity can touch; the
    // remaining pairs contribute the same amount for every candidate.
    const std::size_t current = asg[i];
    auto label_with = [&](std::size_t candidate) {
        return [&, candidate](std::size_t obs) { return obs == i ? candidate : asg[obs]; };
    };
    const auto own_now = entity_transitions(series, k, label_with(current));
    std::vector<std::vector<std::size_t>> own(k);
    std::vector<std::size_t> touched = own_now;
    for (std::size_t p = 0; p < k; ++p) {
        own[p] = entity_transitions(series, k, label_with(p));
        touched.insert(touched.end(), own[p].begin(), own[p].end());
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    const double entities = static_cast<double>(ds.entity_count());
    for (std::size_t p = 0; p < k; ++p) {
        double t3 = 0.0;
        for (std::size_t pair : touched) {
            const double a = adj.values()[pair];
            if (a == 0.0) {
                continue;
            }
            const bool had = std::binary_search(own_now.begin(), own_now.end(), pair);
            const bool has = std::binary_search(own[p].begin(), own[p].end(), pair);
            const double others = static_cast<double>(counts[pair] - (had ? 1 : 0));
            const double inter = 1.0 - (others + (has ? 1.0 : 0.0)) / entities;
            t3 += a * a * inter * inter;
        }
        costs[p] += hp.lambda3 * t3;
    }
}

std::size_t argmin_lowest(const std::vector<double>& costs) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < costs.size(); ++p) {
        if (costs[p] < costs[best]) {
            best = p;
        }
    }
    return best;
}

std::string dump_state(std::size_t iteration, const Assignment& asg,
                       const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                       const ObjectiveBreakdown& obj) {
    std::ostringstream out;
    out << "iteration " << iteration << "\n";
    out << "T1 " << io::format_double(obj.t1) << " T2 " << io::format_double(obj.t2) << " T3 "
        << io::format_double(obj.t3) << " J " << io::format_double(obj.j) << "\n";
    for (std::size_t j = 0; j < protos.size(); ++j) {
        out << "prototype " << j << " t=" << io::format_double(protos[j].mu_t) << " d=[";
        for (std::size_t f = 0; f < protos[j].mu_d.size(); ++f) {
            out << (f ? "," : "") << io::format_double(protos[j].mu_d[f]);
        }
        out << "]\n";
    }
    out << "adjacency";
    for (double a : adj.values()) {
        out << ' ' << io::format_double(a);
    }
    out << "\nassignment";
    for (std::size_t c : asg.cluster_of) {
        out << ' ' << c;
    }
    out << '\n';
    return out.str();
}

}  // namespace

std::vector<Prototype> init_prototypes(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k == 0 || k > ds.size()) {
        throw DomainError("cannot draw " + std::to_string(k) + " initial prototypes from " +
                          std::to_string(ds.size()) + " observations");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pool(ds.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i] = i;
    }
    std::vector<Prototype> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, pool.size() - 1);
        std::swap(pool[j], pool[pick(rng)]);
        const auto d = ds.descriptor(pool[j]);
        out.push_back(Prototype{ds.time(pool[j]), {d.begin(), d.end()}});
    }
    return out;
}

std::vector<double> assignment_costs(std::size_t i, const Dataset& ds, const Assignment& asg,
                                     const std::vector<Prototype>& protos,
                                     const AdjacencyMatrix& adj, const HyperParams& hp,
                                     AssignmentRule rule) {
    const auto counts = partial_transition_counts(ds, asg);
    std::vector<double> costs;
    score_candidates(i, ds, asg, protos, adj, hp, rule, counts, gamma(hp.alpha),
                     Scale::from(ds.diameters()), costs);
    return costs;
}

std::size_t best_cluster(std::size_t i, const Dataset& ds, const Assignment& asg,
                         const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                         const HyperParams& hp, AssignmentRule rule) {
    return argmin_lowest(assignment_costs(i, ds, asg, protos, adj, hp, rule));
}

Assignment assign_all(const Dataset& ds, const Assignment& asg,
                      const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                      const HyperParams& hp, AssignmentRule rule) {
    Assignment out = asg;
    out.k = protos.size();
    if (out.cluster_of.size() != ds.size()) {
        out.cluster_of.assign(ds.size(), kUnassigned);
    }
    const TAWeights w = gamma(hp.alpha);
    const Scale s = Scale::from(ds.diameters());
    const bool track_transitions = rule == AssignmentRule::exact && hp.lambda3 != 0.0;
    std::vector<std::size_t> counts;
    if (track_transitions) {
        counts = partial_transition_counts(ds, out);
    }
    std::vector<double> costs;
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        const auto series = ds.series(e);
        for (std::size_t i : series) {
            score_candidates(i, ds, out, protos, adj, hp, rule, counts, w, s, costs);
            const std::size_t chosen = argmin_lowest(costs);
            if (chosen == out.cluster_of[i]) {
                continue;
            }
            if (track_transitions) {
                auto label = [&](std::size_t obs) { return out.cluster_of[obs]; };
                for (std::size_t pair : entity_transitions(series, out.k, label)) {
                    --counts[pair];
                }
                out.cluster_of[i] = chosen;
                for (std::size_t pair : entity_transitions(series, out.k, label)) {
                    ++counts[pair];
                }
            } else {
                out.cluster_of[i] = chosen;
            }
        }
    }
    return out;
}

PrototypeUpdate update_prototype(std::size_t j, const Dataset& ds, const Assignment& asg,
                                 const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                                 const HyperParams& hp, const SolverConfig& cfg) {
    const std::size_t k = protos.size();
    const std::size_t dim = ds.dim();
    const TAWeights w = gamma(hp.alpha);
    const Scale s = Scale::from(ds.diameters());
    const auto& kern = kernels::active();

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (asg[i] == j) {
            members.push_back(i);
        }
    }
    // Link mass of every other prototype: a_jp^2 + a_pj^2.
    std::vector<double> link(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        if (p != j) {
            link[p] = adj(j, p) * adj(j, p) + adj(p, j) * adj(p, j);
        }
    }

    PrototypeUpdate out;
    out.prototype = protos[j];
    Prototype& mu = out.prototype;
    std::vector<double> num(dim);

    for (std::size_t it = 0; it < cfg.prototype_max_inner_iterations; ++it) {
        ++out.inner_iterations;
        out.frozen_d = false;
        out.frozen_t = false;

        // Descriptive half: members weighted by temporal proximity.
        std::fill(num.begin(), num.end(), 0.0);
        double den = 0.0;
        for (std::size_t i : members) {
            const double dt = ds.time(i) - mu.mu_t;
            const double factor = 1.0 - w.gamma_t * dt * dt / s.diam_t2;
            out.outside_hull |= factor < 0.0;
            const double weight = hp.lambda1 * factor;
            kern.axpy(weight, ds.descriptor(i).data(), num.data(), dim);
            den += weight;
        }
        for (std::size_t p = 0; p < k; ++p) {
            if (link[p] == 0.0) {
                continue;
            }
            const double dt = protos[p].mu_t - mu.mu_t;
            const double factor = 1.0 - w.gamma_t * dt * dt / s.diam_t2;
            out.outside_hull |= factor < 0.0;
            const double weight = hp.lambda2 * link[p] * factor;
            kern.axpy(weight, protos[p].mu_d.data(), num.data(), dim);
            den += weight;
        }
        std::vector<double> next_d = mu.mu_d;
        if (den > 1e-12) {
            for (std::size_t f = 0; f < dim; ++f) {
                next_d[f] = num[f] / den;
            }
        } else {
            out.frozen_d = true;
        }

        // Temporal half: members weighted by descriptive proximity to next_d.
        double num_t = 0.0;
        double den_t = 0.0;
        for (std::size_t i : members) {
            const double dd2 = kern.squared_distance(ds.descriptor(i).data(), next_d.data(), dim);
            const double factor = 1.0 - w.gamma_d * dd2 / s.diam_d2;
            out.outside_hull |= factor < 0.0;
            const double weight = hp.lambda1 * factor;
            num_t += weight * ds.time(i);
            den_t += weight;
        }
        for (std::size_t p = 0; p < k; ++p) {
            if (link[p] == 0.0) {
                continue;
            }
            const double dd2 = kern.squared_distance(protos[p].mu_d.data(), next_d.data(), dim);
            const double factor = 1.0 - w.gamma_d * dd2 / s.diam_d2;
            out.outside_hull |= factor < 0.0;
            const double weight = hp.lambda2 * link[p] * factor;
            num_t += weight * protos[p].mu_t;
            den_t += weight;
        }
        double next_t = mu.mu_t;
        if (den_t > 1e-12) {
            next_t = num_t / den_t;
        } else {
            out.frozen_t = true;
        }

        const double dt = next_t - mu.mu_t;
        const double change = dt * dt / s.diam_t2 +
                              kern.squared_distance(next_d.data(), mu.mu_d.data(), dim) / s.diam_d2;
        mu.mu_d = std::move(next_d);
        mu.mu_t = next_t;
        if (std::sqrt(change) <= cfg.prototype_inner_tolerance) {
            break;
        }
    }
    return out;
}

AdjacencyUpdate update_adjacency(const Dataset& ds, const Assignment& asg,
                                 const std::vector<Prototype>& protos, const HyperParams& hp) {
    const std::size_t k = protos.size();
    if (k < 2) {
        throw DomainError("adjacency update needs k >= 2");
    }
    Assignment full = asg;
    full.k = k;
    const TAWeights w = gamma(hp.alpha);
    const Scale s = Scale::from(ds.diameters());
    const auto pen = pen_matrix(ds, full, hp.beta, hp.delta);
    const auto counts = transition_entity_counts(ds, full);
    const double entities = static_cast<double>(ds.entity_count());

    AdjacencyUpdate out;
    out.matrix = AdjacencyMatrix(k);
    out.coefficients.assign(k * k, 0.0);
    std::vector<double> inverse(k * k, 0.0);
    std::size_t at_floor = 0;
    double total = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t q = 0; q < k; ++q) {
            if (r == q) {
                continue;
            }
            const double inter = 1.0 - static_cast<double>(counts[r * k + q]) / entities;
            double coeff = -hp.lambda1 * pen[r * k + q] +
                           hp.lambda2 * ta_dissim(protos[r], protos[q], w, s) +
                           hp.lambda3 * inter * inter;
            out.coefficients[r * k + q] = coeff;
            if (!(coeff >= kAdjacencyFloor)) {
                coeff = kAdjacencyFloor;
                out.floored = true;
                ++at_floor;
            }
            inverse[r * k + q] = 1.0 / coeff;
            total += inverse[r * k + q];
        }
    }
    out.degenerate = at_floor == k * (k - 1);

    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t q = 0; q < k; ++q) {
            if (r == q) {
                continue;
            }
            double a = inverse[r * k + q] / total;
            if (a > 1.0 || a < 0.0) {
                a = std::clamp(a, 0.0, 1.0);
                out.clamped = true;
            }
            out.matrix(r, q) = a;
            sum += a;
        }
    }
    if (out.clamped && sum > 0.0) {
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t q = 0; q < k; ++q) {
                out.matrix(r, q) /= sum;
            }
        }
    }
    return out;
}

FitResult fit_detailed(const Dataset& ds, const HyperParams& hp, const SolverConfig& cfg,
                       const std::optional<std::vector<Prototype>>& init,
                       const StageObserver& observer) {
    hp.validate();
    const std::size_t k = hp.k;
    if (ds.size() < k) {
        throw DomainError("fit needs at least k = " + std::to_string(k) + " observations, got " +
                          std::to_string(ds.size()));
    }
    if (cfg.max_iterations == 0) {
        throw DomainError("max_iterations must be positive");
    }

    std::vector<Prototype> protos;
    if (init.has_value()) {
        protos = *init;
        if (protos.size() != k) {
            throw DomainError("provided initialization has " + std::to_string(protos.size()) +
                              " prototypes, expected " + std::to_string(k));
        }
        for (const auto& p : protos) {
            if (p.mu_d.size() != ds.dim() || !std::isfinite(p.mu_t) ||
                !std::all_of(p.mu_d.begin(), p.mu_d.end(),
                             [](double v) { return std::isfinite(v); })) {
                throw DomainError("provided prototype does not match the dataset dimension");
            }
        }
    } else if (cfg.init_mode == InitMode::provided) {
        throw DomainError("init_mode is 'provided' but no prototypes were given");
    } else {
        protos = init_prototypes(ds, k, cfg.seed);
    }

    FitResult result;
    FitDiagnostics& diag = result.diagnostics;
    Assignment asg{k, std::vector<std::size_t>(ds.size(), kUnassigned)};
    AdjacencyMatrix adj(k);
    std::vector<std::size_t> previous_partition;
    std::vector<double> trace;
    bool converged = false;
    std::size_t iteration = 0;

    auto notify = [&](Stage stage, const AdjacencyUpdate* update) {
        if (observer) {
            observer(StageEvent{iteration, stage, asg, protos, adj, update});
        }
    };

    while (iteration < cfg.max_iterations) {
        ++iteration;

        asg = assign_all(ds, asg, protos, adj, hp, cfg.assignment_rule);
        notify(Stage::assignment, nullptr);

        const std::vector<Prototype> previous = protos;
        for (std::size_t j = 0; j < k; ++j) {
            const auto& reference =
                cfg.prototype_sweep == PrototypeSweep::jacobi ? previous : protos;
            PrototypeUpdate update = update_prototype(j, ds, asg, reference, adj, hp, cfg);
            diag.frozen_prototype_updates += (update.frozen_d || update.frozen_t) ? 1 : 0;
            diag.hull_exits += update.outside_hull ? 1 : 0;
            protos[j] = std::move(update.prototype);
        }
        notify(Stage::prototypes, nullptr);

        AdjacencyUpdate adj_update = update_adjacency(
            ds, asg, cfg.adjacency_uses_previous_prototypes ? previous : protos, hp);
        diag.floor_activations += adj_update.floored ? 1 : 0;
        adj = adj_update.matrix;
        notify(Stage::adjacency, &adj_update);

        const ObjectiveBreakdown obj = objective_j(ds, asg, protos, adj, hp);
        if (!std::isfinite(obj.j)) {
            throw SolverError("objective became non-finite at iteration " +
                                  std::to_string(iteration),
                              dump_state(iteration, asg, protos, adj, obj));
        }
        if (!trace.empty() &&
            obj.j > trace.back() + cfg.objective_tolerance * std::max(1.0, std::abs(trace.back()))) {
            ++diag.descent_violations;
        }
        trace.push_back(obj.j);

        if (asg.cluster_of == previous_partition) {
            converged = true;
            break;
        }
        previous_partition = asg.cluster_of;
    }

    if (diag.floor_activations > 0) {
        log::warn("adjacency coefficients hit the floor in " +
                  std::to_string(diag.floor_activations) + " of " + std::to_string(iteration) +
                  " iterations");
    }
    if (diag.frozen_prototype_updates > 0) {
        log::warn(std::to_string(diag.frozen_prototype_updates) +
                  " prototype updates had a vanishing denominator and kept their values");
    }
    if (diag.hull_exits > 0) {
        log::warn("a prototype left the data hull; proximity ratios above 1 were used as-is");
    }

    ClusPathModel& model = result.model;
    model.prototypes = std::move(protos);
    model.assignment = std::move(asg);
    model.adjacency = std::move(adj);
    model.objective_trace = std::move(trace);
    model.iterations = iteration;
    model.converged = converged;
    model.params = hp;
    model.seed = cfg.seed;
    return result;
}

ClusPathModel fit(const Dataset& ds, const HyperParams& hp, const SolverConfig& cfg,
                  const std::optional<std::vector<Prototype>>& init) {
    return fit_detailed(ds, hp, cfg, init).model;
}

}  // namespace cluspath
