#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluspath/core.hpp"

namespace cluspath {

// Consecutive observations of one entity that sit in different clusters.
struct TransitionRecord {
    std::string entity_id;
    std::size_t from_cluster = 0;
    std::size_t to_cluster = 0;
    double time = 0.0;  // timestamp of the second observation

    bool operator==(const TransitionRecord&) const = default;
};

// Binarized adjacency for display.
struct EvolutionGraph {
    std::size_t k = 0;
    std::vector<bool> arcs;  // row-major k x k
    double threshold = 0.0;
    std::vector<std::size_t> nodes;  // clusters with at least one kept arc
    // All positive off-diagonal scores were equal, so every arc is tied.
    bool degenerate = false;

    bool arc(std::size_t p, std::size_t q) const { return arcs[p * k + q]; }
    std::size_t arc_count() const;
};

// Ordered by entity (load order) then time.
std::vector<TransitionRecord> extract_transitions(const Dataset& ds, const Assignment& asg);

// Keeps the arcs whose score reaches the (k-1)-th largest distinct positive
// off-diagonal score; ties at the threshold are all kept. Nodes without a kept
// arc are dropped.
EvolutionGraph binarize(const AdjacencyMatrix& adj, std::size_t k);

// Run-length-compressed chronological cluster sequence of one entity.
// Throws DomainError for an unknown entity.
std::vector<std::size_t> entity_path(const Dataset& ds, const Assignment& asg,
                                     const std::string& entity_id);

// counts[p * k + q] = number of transition records p -> q.
std::vector<std::size_t> arc_entity_counts(const std::vector<TransitionRecord>& transitions,
                                           std::size_t k);

// Graphviz digraph. Nodes carry the cluster id and prototype time; arcs carry
// the transition count, and arcs pointing to an earlier prototype are marked
// as backward.
std::string export_dot(const EvolutionGraph& g, const std::vector<Prototype>& protos,
                       const std::vector<std::size_t>& per_arc_entity_counts);

// One row per distinct timestamp: number of observations in each cluster.
std::string cluster_population_csv(const Dataset& ds, const Assignment& asg);

}  // namespace cluspath
