#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cluspath {

// One (entity, timestamp, descriptor) triple.
struct Observation {
    std::string entity;
    double time = 0.0;
    std::vector<double> descriptor;

    bool operator==(const Observation&) const = default;
};

// Largest pairwise descriptive (Euclidean) and temporal distances.
struct Diameters {
    double d = 0.0;
    double t = 0.0;

    bool degenerate_d() const noexcept { return d == 0.0; }
    bool degenerate_t() const noexcept { return t == 0.0; }
    bool operator==(const Diameters&) const = default;
};

// Immutable collection of observations grouped by entity.
//
// Observation indices follow input order. Entities are numbered in order of
// first appearance, and each entity keeps its observation indices sorted by
// strictly increasing timestamp. Descriptors are stored row-major so the
// kernels can stream over them.
class Dataset {
public:
    Dataset() = default;

    // Throws DataError on empty input, ragged or non-finite descriptors, and
    // duplicate (entity, timestamp) pairs.
    static Dataset from_observations(std::span<const Observation> observations);

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t entity_count() const noexcept { return entity_ids_.size(); }

    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> descriptor(std::size_t i) const {
        return {features_.data() + i * dim_, dim_};
    }
    std::span<const double> features() const noexcept { return features_; }
    std::span<const double> times() const noexcept { return times_; }

    std::size_t entity_of(std::size_t i) const { return entity_of_[i]; }
    const std::string& entity_id(std::size_t e) const { return entity_ids_[e]; }
    const std::vector<std::string>& entity_ids() const noexcept { return entity_ids_; }
    std::optional<std::size_t> find_entity(std::string_view id) const;

    // Observation indices of entity e in chronological order.
    std::span<const std::size_t> series(std::size_t e) const { return series_[e]; }
    // Position of observation i inside its entity's series.
    std::size_t rank_in_series(std::size_t i) const { return rank_[i]; }

    Observation observation(std::size_t i) const;
    std::vector<Observation> observations() const;

    // Cached exact diameters; both are 0 for a single-observation dataset.
    const Diameters& diameters() const noexcept { return diameters_; }

    bool operator==(const Dataset& other) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> times_;
    std::vector<double> features_;
    std::vector<std::size_t> entity_of_;
    std::vector<std::size_t> rank_;
    std::vector<std::string> entity_ids_;
    std::vector<std::vector<std::size_t>> series_;
    Diameters diameters_;
};

// Exhaustive O(n^2) scan. Throws DataError for fewer than two observations.
Diameters diameters(const Dataset& ds);

struct PreprocessOptions {
    bool remove_entity_mean = true;
    bool normalize = true;
};

// Subtracts each entity's per-feature mean, then z-scores every feature over
// all observations. Zero-variance features are set to 0 with a warning.
Dataset preprocess(const Dataset& ds, const PreprocessOptions& options);

struct HyperParams {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    std::size_t k = 2;

    // Throws DomainError when a bound is violated.
    void validate() const;
    bool operator==(const HyperParams&) const = default;
};

struct Prototype {
    double mu_t = 0.0;
    std::vector<double> mu_d;

    bool operator==(const Prototype&) const = default;
};

// Total map from observation index to cluster index.
struct Assignment {
    std::size_t k = 0;
    std::vector<std::size_t> cluster_of;

    std::size_t size() const noexcept { return cluster_of.size(); }
    std::size_t operator[](std::size_t i) const { return cluster_of[i]; }

    // Throws DomainError unless every observation maps to a cluster < k.
    void validate(std::size_t n_observations) const;
    std::vector<std::size_t> cluster_sizes() const;
    bool operator==(const Assignment&) const = default;
};

// Dense k x k matrix of link strengths, row-major.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(std::size_t k) : k_(k), a_(k * k, 0.0) {}

    std::size_t k() const noexcept { return k_; }
    double operator()(std::size_t p, std::size_t q) const { return a_[p * k_ + q]; }
    double& operator()(std::size_t p, std::size_t q) { return a_[p * k_ + q]; }
    std::span<const double> values() const noexcept { return a_; }

    double sum() const noexcept;
    bool operator==(const AdjacencyMatrix&) const = default;

private:
    std::size_t k_ = 0;
    std::vector<double> a_;
};

struct ClusPathModel {
    std::vector<Prototype> prototypes;
    Assignment assignment;
    AdjacencyMatrix adjacency;
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
    bool converged = false;
    HyperParams params;
    std::uint64_t seed = 0;

    bool operator==(const ClusPathModel&) const = default;
};

}  // namespace cluspath
