#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cluspath/core.hpp"
#include "cluspath/measures.hpp"
#include "cluspath/solver.hpp"

namespace cluspath::tuner {

enum Gene : std::size_t { alpha = 0, beta, delta, lambda1, lambda2, lambda3 };
inline constexpr std::size_t kGenes = 6;
inline constexpr std::array<const char*, kGenes> kGeneNames = {"alpha",   "beta",    "delta",
                                                               "lambda1", "lambda2", "lambda3"};

using Genome = std::array<double, kGenes>;

struct GeneBox {
    double lo = 0.0;
    double hi = 1.0;
};

using SearchBox = std::array<GeneBox, kGenes>;

// alpha in [-1, 1], beta in [0, 1e-3], delta in [0.1, 10], lambdas in [0, 1000].
SearchBox default_search_box();

struct TunerConfig {
    std::size_t population_size = 100;
    std::size_t max_generations = 100;
    double dominated_carryover = 0.10;
    double mutation_fraction = 0.05;
    SearchBox search_box = default_search_box();
    std::uint64_t seed = 0;
    std::size_t k = 2;
    // Worker threads for evaluating a generation; results merge in index order.
    std::size_t threads = 1;
    // Keep a copy of every generation's evaluated population in the result.
    bool record_populations = false;

    // Throws DomainError on invalid fractions, boxes or sizes.
    void validate() const;
};

struct Individual {
    Genome genome{};
    std::optional<MeasureVector> measures;
    std::optional<std::size_t> fitness;
    bool evaluation_failed = false;
    // Unique per created individual; copies that survive keep their id.
    std::size_t id = 0;
};

HyperParams to_hyperparams(const Genome& genome, std::size_t k);

// a <= b componentwise with at least one strict inequality.
bool dominates(const MeasureVector& a, const MeasureVector& b);

// Number of members that dominate each member.
std::vector<std::size_t> dominance_fitness(std::span<const MeasureVector> points);

// Sets Individual::fitness on every member. All members must be evaluated.
void assign_fitness(std::vector<Individual>& population);

// Non-dominated members plus the ceil(carryover * |dominated|) least dominated
// ones (ties by position), in their original order.
std::vector<Individual> select_elite(const std::vector<Individual>& population,
                                     const TunerConfig& cfg);

// Copy with one or two distinct genes resampled uniformly in their box.
Individual mutate(const Individual& parent, const TunerConfig& cfg, std::mt19937_64& rng);

// child_g = (1 - w_g) * a_g + w_g * b_g with w_g ~ U[0, 1] drawn per gene.
Individual path_relink(const Individual& parent_a, const Individual& parent_b,
                       const TunerConfig& cfg, std::mt19937_64& rng);

// Euclidean distance to the origin after min-max normalizing each measure over
// `population`. Failed evaluations (non-finite measures) are excluded from the
// normalization and get an infinite distance.
std::vector<double> ideal_distances(std::span<const Individual> candidates,
                                    std::span<const Individual> population);

// Index in `candidates` of the member nearest the ideal point; ties go to the
// lowest index. Throws DomainError for an empty candidate list.
std::size_t closest_to_ideal(std::span<const Individual> candidates,
                             std::span<const Individual> population);
std::size_t closest_to_ideal(std::span<const Individual> candidates);

// Maps a genome to its measures; may throw, which marks the individual failed.
using Evaluator = std::function<MeasureVector(const Genome&)>;

struct GenerationStats {
    std::size_t generation = 0;
    std::size_t front_size = 0;
    double best_distance = 0.0;
    std::size_t evaluations = 0;  // cumulative evaluator calls
};

struct TuneResult {
    HyperParams best;
    Individual best_individual;
    std::vector<Individual> front;
    std::vector<Individual> final_population;
    std::vector<GenerationStats> history;
    std::vector<std::vector<Individual>> populations;
    std::size_t evaluations = 0;
};

TuneResult tune(const Evaluator& evaluator, const TunerConfig& cfg);

// Runs the solver for every genome from one shared prototype initialization
// and scores the fitted model.
Evaluator cluspath_evaluator(const Dataset& ds, std::size_t k, const SolverConfig& solver_cfg,
                             std::vector<Prototype> shared_init);

// Shared initialization drawn with solver_cfg.seed.
TuneResult tune(const Dataset& ds, const TunerConfig& cfg, const SolverConfig& solver_cfg);

}  // namespace cluspath::tuner
