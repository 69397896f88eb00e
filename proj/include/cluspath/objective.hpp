#pragma once

#include <cstddef>
#include <vector>

#include "cluspath/core.hpp"
#include "cluspath/metric.hpp"

namespace cluspath {

struct ObjectiveBreakdown {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double j = 0.0;
};

// Time-decaying weight of one must-link constraint, before the link discount:
// beta * exp(-0.5 * (dt / delta)^2).
double constraint_decay(double dt, double beta, double delta);

// Penalty for an earlier observation (time t_i, cluster j) and a later one
// (time t_k, cluster l) of the same entity that sit in different clusters,
// where a_jl is the link between the two clusters. Zero unless same_entity and
// t_i < t_k. Callers only invoke it for pairs split across clusters.
double penalty_w(double t_i, double t_k, bool same_entity, double a_jl, double beta, double delta);

// Assignment term: dissimilarity to the assigned prototype plus the penalties
// of every violated ordered same-entity pair (all pairs, not only adjacent).
double term1(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos,
             const AdjacencyMatrix& adj, const HyperParams& hp);

// Smooth-passage term: sum over p != q of a_pq^2 * dissim(mu_p, mu_q).
double term2(const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
             const TAWeights& w, const Scale& s);

// counts[p * k + q] = number of entities with at least one pair of
// consecutive observations clustered p then q (p != q).
std::vector<std::size_t> transition_entity_counts(const Dataset& ds, const Assignment& asg);

// 1 - (entities with a p -> q transition) / (number of entities).
// Throws DomainError when p == q.
double inter_phi(const Dataset& ds, const Assignment& asg, std::size_t p, std::size_t q);

// Transition term: sum over p != q of a_pq^2 * inter_phi(p, q)^2.
double term3(const Dataset& ds, const Assignment& asg, const AdjacencyMatrix& adj);

ObjectiveBreakdown objective_j(const Dataset& ds, const Assignment& asg,
                               const std::vector<Prototype>& protos, const AdjacencyMatrix& adj,
                               const HyperParams& hp);

// Sum of constraint_decay over ordered same-entity pairs with the earlier
// observation in r and the later one in s. Throws DomainError when r == s.
double pen_transition(const Dataset& ds, const Assignment& asg, std::size_t r, std::size_t s,
                      double beta, double delta);

// All pen_transition values at once, row-major k x k (diagonal 0).
std::vector<double> pen_matrix(const Dataset& ds, const Assignment& asg, double beta,
                               double delta);

}  // namespace cluspath
