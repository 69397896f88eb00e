#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "cluspath/core.hpp"
#include "cluspath/objective.hpp"

namespace cluspath {

// How best_cluster scores a candidate cluster for one observation.
enum class AssignmentRule {
    // Dissimilarity plus the penalties towards later same-entity observations
    // only, exactly the published assignment rule.
    as_written,
    // Full change of J: also the penalties from earlier same-entity
    // observations and the change of the transition term. Never increases J.
    exact,
};

enum class PrototypeSweep {
    // Every prototype is recomputed against the others' previous values.
    jacobi,
    // Prototypes are recomputed in index order against the latest values.
    gauss_seidel,
};

enum class InitMode { random_observations, provided };

struct SolverConfig {
    std::size_t max_iterations = 200;
    // Relative slack (times max(1, |J|)) before a rise of J counts as a
    // descent violation in the diagnostics.
    double objective_tolerance = 1e-9;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::random_observations;
    AssignmentRule assignment_rule = AssignmentRule::exact;
    PrototypeSweep prototype_sweep = PrototypeSweep::gauss_seidel;
    // Build the adjacency from the prototypes of the previous iteration, as
    // the published pseudocode passes them, instead of the fresh ones.
    bool adjacency_uses_previous_prototypes = false;
    // Fixed-point iterations alternating the descriptive and temporal halves
    // of a prototype update.
    std::size_t prototype_max_inner_iterations = 1000;
    double prototype_inner_tolerance = 1e-14;
};

// Marks observations not yet placed during the first assignment sweep.
inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

// k distinct observations drawn without replacement, seeded and deterministic.
// Throws DomainError when k exceeds the number of observations or k == 0.
std::vector<Prototype> init_prototypes(const Dataset& ds, std::size_t k, std::uint64_t seed);

// Score of every candidate cluster for observation i under the given rule.
// Entries of asg.cluster_of equal to kUnassigned are ignored.
std::vector<double> assignment_costs(std::size_t i, const Dataset& ds, const Assignment& asg,
                                     const std::vector<Prototype>& protos,
                                     const AdjacencyMatrix& adj, const HyperParams& hp,
                                     AssignmentRule rule = AssignmentRule::as_written);

// argmin of assignment_costs, ties to the lowest index.
std::size_t best_cluster(std::size_t i, const Dataset& ds, const Assignment& asg,
                         const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                         const HyperParams& hp,
                         AssignmentRule rule = AssignmentRule::as_written);

// Sequential best-response sweep: entities in load order, each entity's
// observations chronologically, each move visible to the next.
Assignment assign_all(const Dataset& ds, const Assignment& asg,
                      const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                      const HyperParams& hp, AssignmentRule rule = AssignmentRule::as_written);

struct PrototypeUpdate {
    Prototype prototype;
    // A denominator fell to 1e-12 or below; that component kept its value.
    bool frozen_d = false;
    bool frozen_t = false;
    // A proximity factor was negative (the prototype left the data hull).
    bool outside_hull = false;
    std::size_t inner_iterations = 0;
};

// Closed-form update of prototype j with every other prototype held at the
// values in protos. The descriptive and temporal halves are alternated until
// they reach their joint fixed point.
PrototypeUpdate update_prototype(std::size_t j, const Dataset& ds, const Assignment& asg,
                                 const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                                 const HyperParams& hp, const SolverConfig& cfg = {});

struct AdjacencyUpdate {
    AdjacencyMatrix matrix;
    // Coefficients K_rs, row-major k x k, before flooring.
    std::vector<double> coefficients;
    // Some K_rs was below the floor and raised to it.
    bool floored = false;
    // Every K_rs was at the floor; the matrix is uniform.
    bool degenerate = false;
    bool clamped = false;
};

inline constexpr double kAdjacencyFloor = 1e-9;

// Lagrange-constrained minimizer of J over the off-diagonal adjacency
// entries: a_rs proportional to 1 / K_rs with unit total.
AdjacencyUpdate update_adjacency(const Dataset& ds, const Assignment& asg,
                                 const std::vector<Prototype>& protos, const HyperParams& hp);

enum class Stage { assignment, prototypes, adjacency };

struct StageEvent {
    std::size_t iteration = 0;
    Stage stage = Stage::assignment;
    const Assignment& assignment;
    const std::vector<Prototype>& prototypes;
    const AdjacencyMatrix& adjacency;
    // Set for Stage::adjacency.
    const AdjacencyUpdate* adjacency_update = nullptr;
};

using StageObserver = std::function<void(const StageEvent&)>;

struct FitDiagnostics {
    std::size_t floor_activations = 0;
    std::size_t frozen_prototype_updates = 0;
    std::size_t hull_exits = 0;
    std::size_t descent_violations = 0;
};

struct FitResult {
    ClusPathModel model;
    FitDiagnostics diagnostics;
};

// Alternates assignment, prototype and adjacency updates from a zero
// adjacency until the partition repeats or max_iterations is reached.
// Throws SolverError if J becomes non-finite.
FitResult fit_detailed(const Dataset& ds, const HyperParams& hp, const SolverConfig& cfg = {},
                       const std::optional<std::vector<Prototype>>& init = std::nullopt,
                       const StageObserver& observer = {});

ClusPathModel fit(const Dataset& ds, const HyperParams& hp, const SolverConfig& cfg = {},
                  const std::optional<std::vector<Prototype>>& init = std::nullopt);

}  // namespace cluspath
