#include "cluspath/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cluspath/error.hpp"
#include "cluspath/log.hpp"

namespace cluspath::tuner {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MeasureVector failed_measures() { return {kInf, kInf, kInf, kInf}; }

bool finite(const MeasureVector& m) {
    const auto a = m.as_array();
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

std::size_t ceil_fraction(double fraction, std::size_t count) {
    // Guard against 0.1 * 10 landing a hair above 1.
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count) - 1e-9));
}

void evaluate_pending(std::vector<Individual>& population, const Evaluator& evaluator,
                      std::size_t threads, std::size_t& evaluations) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!population[i].measures.has_value()) {
            pending.push_back(i);
        }
    }
    std::vector<MeasureVector> results(pending.size());
    std::vector<std::string> errors(pending.size());
    std::vector<char> failed(pending.size(), 0);

    auto work = [&](std::size_t slot) {
        try {
            results[slot] = evaluator(population[pending[slot]].genome);
            if (!finite(results[slot])) {
                failed[slot] = 1;
                errors[slot] = "non-finite measures";
            }
        } catch (const std::exception& e) {
            failed[slot] = 1;
            errors[slot] = e.what();
        }
    };

    const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), pending.size());
    if (workers <= 1) {
        for (std::size_t slot = 0; slot < pending.size(); ++slot) {
            work(slot);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t slot = next++; slot < pending.size(); slot = next++) {
                    work(slot);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (std::size_t slot = 0; slot < pending.size(); ++slot) {
        Individual& ind = population[pending[slot]];
        if (failed[slot]) {
            ind.evaluation_failed = true;
            ind.measures = failed_measures();
            log::warn("evaluation of individual " + std::to_string(ind.id) +
                      " failed: " + errors[slot]);
        } else {
            ind.measures = results[slot];
        }
    }
    evaluations += pending.size();
}

}  // namespace

SearchBox default_search_box() {
    return {GeneBox{-1.0, 1.0}, GeneBox{0.0, 1e-3},   GeneBox{0.1, 10.0},
            GeneBox{0.0, 1000.0}, GeneBox{0.0, 1000.0}, GeneBox{0.0, 1000.0}};
}

void TunerConfig::validate() const {
    if (population_size == 0) {
        throw DomainError("population size must be positive");
    }
    if (max_generations == 0) {
        throw DomainError("max_generations must be positive");
    }
    if (!(dominated_carryover >= 0.0 && dominated_carryover <= 1.0) ||
        !(mutation_fraction >= 0.0 && mutation_fraction <= 1.0)) {
        throw DomainError("tuner fractions must lie in [0, 1]");
    }
    for (std::size_t g = 0; g < kGenes; ++g) {
        if (!(search_box[g].lo <= search_box[g].hi)) {
            throw DomainError(std::string("search box for ") + kGeneNames[g] + " is empty");
        }
    }
    if (search_box[alpha].lo < -1.0 || search_box[alpha].hi > 1.0) {
        throw DomainError("search box for alpha must stay inside [-1, 1]");
    }
    if (search_box[beta].lo < 0.0 || search_box[delta].lo <= 0.0 || search_box[lambda1].lo < 0.0 ||
        search_box[lambda2].lo < 0.0 || search_box[lambda3].lo < 0.0) {
        throw DomainError("search box allows invalid hyperparameters");
    }
    if (k < 2) {
        throw DomainError("tuner needs k >= 2");
    }
}

HyperParams to_hyperparams(const Genome& genome, std::size_t k) {
    HyperParams hp;
    hp.alpha = genome[alpha];
    hp.beta = genome[beta];
    hp.delta = genome[delta];
    hp.lambda1 = genome[lambda1];
    hp.lambda2 = genome[lambda2];
    hp.lambda3 = genome[lambda3];
    hp.k = k;
    return hp;
}

bool dominates(const MeasureVector& a, const MeasureVector& b) {
    const auto x = a.as_array();
    const auto y = b.as_array();
    bool strictly = false;
    for (std::size_t m = 0; m < x.size(); ++m) {
        if (x[m] > y[m]) {
            return false;
        }
        strictly |= x[m] < y[m];
    }
    return strictly;
}

std::vector<std::size_t> dominance_fitness(std::span<const MeasureVector> points) {
    std::vector<std::size_t> fitness(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i != j && dominates(points[j], points[i])) {
                ++fitness[i];
            }
        }
    }
    return fitness;
}

void assign_fitness(std::vector<Individual>& population) {
    std::vector<MeasureVector> points;
    points.reserve(population.size());
    for (const auto& ind : population) {
        if (!ind.measures.has_value()) {
            throw DomainError("fitness needs every individual evaluated");
        }
        points.push_back(*ind.measures);
    }
    const auto fitness = dominance_fitness(points);
    for (std::size_t i = 0; i < population.size(); ++i) {
        population[i].fitness = fitness[i];
    }
}

std::vector<Individual> select_elite(const std::vector<Individual>& population,
                                     const TunerConfig& cfg) {
    std::vector<std::size_t> dominated;
    std::vector<char> keep(population.size(), 0);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!population[i].fitness.has_value()) {
            throw DomainError("select_elite needs fitness values");
        }
        if (*population[i].fitness == 0) {
            keep[i] = 1;
        } else {
            dominated.push_back(i);
        }
    }
    std::stable_sort(dominated.begin(), dominated.end(), [&](std::size_t a, std::size_t b) {
        return *population[a].fitness < *population[b].fitness;
    });
    const std::size_t carry =
        std::min(dominated.size(), ceil_fraction(cfg.dominated_carryover, dominated.size()));
    for (std::size_t r = 0; r < carry; ++r) {
        keep[dominated[r]] = 1;
    }
    std::vector<Individual> out;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (keep[i]) {
            out.push_back(population[i]);
        }
    }
    return out;
}

Individual mutate(const Individual& parent, const TunerConfig& cfg, std::mt19937_64& rng) {
    Individual child;
    child.genome = parent.genome;
    std::uniform_int_distribution<int> how_many(1, 2);
    const int count = how_many(rng);
    std::array<std::size_t, kGenes> genes{};
    for (std::size_t g = 0; g < kGenes; ++g) {
        genes[g] = g;
    }
    for (int c = 0; c < count; ++c) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(c), kGenes - 1);
        std::swap(genes[static_cast<std::size_t>(c)], genes[pick(rng)]);
        const std::size_t g = genes[static_cast<std::size_t>(c)];
        const GeneBox& box = cfg.search_box[g];
        if (box.lo < box.hi) {
            std::uniform_real_distribution<double> value(box.lo, box.hi);
            child.genome[g] = value(rng);
        }
    }
    return child;
}

Individual path_relink(const Individual& parent_a, const Individual& parent_b,
                       const TunerConfig& cfg, std::mt19937_64& rng) {
    Individual child;
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (std::size_t g = 0; g < kGenes; ++g) {
        const double w = weight(rng);
        const double a = parent_a.genome[g];
        const double b = parent_b.genome[g];
        double v = (1.0 - w) * a + w * b;
        // Rounding must not leave the parents' interval or the box.
        v = std::clamp(v, std::min(a, b), std::max(a, b));
        child.genome[g] = std::clamp(v, cfg.search_box[g].lo, cfg.search_box[g].hi);
    }
    return child;
}

std::vector<double> ideal_distances(std::span<const Individual> candidates,
                                    std::span<const Individual> population) {
    std::array<double, 4> lo;
    std::array<double, 4> hi;
    lo.fill(kInf);
    hi.fill(-kInf);
    for (const auto& ind : population) {
        if (!ind.measures.has_value() || !finite(*ind.measures)) {
            continue;
        }
        const auto m = ind.measures->as_array();
        for (std::size_t d = 0; d < 4; ++d) {
            lo[d] = std::min(lo[d], m[d]);
            hi[d] = std::max(hi[d], m[d]);
        }
    }
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& ind : candidates) {
        if (!ind.measures.has_value() || !finite(*ind.measures)) {
            out.push_back(kInf);
            continue;
        }
        const auto m = ind.measures->as_array();
        double sq = 0.0;
        for (std::size_t d = 0; d < 4; ++d) {
            const double span = hi[d] - lo[d];
            const double v = span > 0.0 ? (m[d] - lo[d]) / span : 0.0;
            sq += v * v;
        }
        out.push_back(std::sqrt(sq));
    }
    return out;
}

std::size_t closest_to_ideal(std::span<const Individual> candidates,
                             std::span<const Individual> population) {
    if (candidates.empty()) {
        throw DomainError("closest_to_ideal needs a non-empty front");
    }
    const auto dist = ideal_distances(candidates, population);
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.size(); ++i) {
        if (dist[i] < dist[best]) {
            best = i;
        }
    }
    return best;
}

std::size_t closest_to_ideal(std::span<const Individual> candidates) {
    return closest_to_ideal(candidates, candidates);
}

TuneResult tune(const Evaluator& evaluator, const TunerConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    TuneResult result;
    std::size_t next_id = 0;

    std::vector<Individual> population(cfg.population_size);
    for (auto& ind : population) {
        for (std::size_t g = 0; g < kGenes; ++g) {
            const GeneBox& box = cfg.search_box[g];
            ind.genome[g] = box.lo < box.hi ? std::uniform_real_distribution<double>(box.lo, box.hi)(rng)
                                            : box.lo;
        }
        ind.id = next_id++;
    }
    evaluate_pending(population, evaluator, cfg.threads, result.evaluations);

    std::vector<Individual> front;
    for (std::size_t generation = 1;; ++generation) {
        assign_fitness(population);
        front.clear();
        for (const auto& ind : population) {
            if (*ind.fitness == 0) {
                front.push_back(ind);
            }
        }
        const auto dist = ideal_distances(front, population);
        result.history.push_back(GenerationStats{generation, front.size(),
                                                 *std::min_element(dist.begin(), dist.end()),
                                                 result.evaluations});
        if (cfg.record_populations) {
            result.populations.push_back(population);
        }
        if (front.size() == population.size() || generation >= cfg.max_generations) {
            break;
        }

        std::vector<Individual> next = select_elite(population, cfg);
        const std::size_t survivors = next.size();
        const std::size_t room = cfg.population_size - std::min(cfg.population_size, survivors);
        const std::size_t mutants =
            std::min(room, ceil_fraction(cfg.mutation_fraction, survivors));
        std::uniform_int_distribution<std::size_t> pick(0, survivors - 1);
        for (std::size_t m = 0; m < mutants; ++m) {
            Individual child = mutate(next[pick(rng)], cfg, rng);
            child.id = next_id++;
            next.push_back(std::move(child));
        }
        while (next.size() < cfg.population_size) {
            const std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            if (survivors > 1) {
                while (b == a) {
                    b = pick(rng);
                }
            }
            Individual child = path_relink(next[a], next[b], cfg, rng);
            child.id = next_id++;
            next.push_back(std::move(child));
        }
        for (auto& ind : next) {
            ind.fitness.reset();
        }
        population = std::move(next);
        evaluate_pending(population, evaluator, cfg.threads, result.evaluations);
    }

    result.final_population = population;
    result.front = front;
    result.best_individual = front[closest_to_ideal(front, population)];
    result.best = to_hyperparams(result.best_individual.genome, cfg.k);
    return result;
}

Evaluator cluspath_evaluator(const Dataset& ds, std::size_t k, const SolverConfig& solver_cfg,
                             std::vector<Prototype> shared_init) {
    return [&ds, k, solver_cfg, init = std::move(shared_init)](const Genome& genome) {
        const HyperParams hp = to_hyperparams(genome, k);
        const ClusPathModel model = fit(ds, hp, solver_cfg, init);
        return evaluate(model, ds);
    };
}

TuneResult tune(const Dataset& ds, const TunerConfig& cfg, const SolverConfig& solver_cfg) {
    cfg.validate();
    auto init = init_prototypes(ds, cfg.k, solver_cfg.seed);
    return tune(cluspath_evaluator(ds, cfg.k, solver_cfg, std::move(init)), cfg);
}

}  // namespace cluspath::tuner
