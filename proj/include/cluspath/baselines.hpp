#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cluspath/core.hpp"

namespace cluspath {

struct KMeansModel {
    std::vector<std::vector<double>> centroids;
    Assignment assignment;
    double inertia = 0.0;
    std::vector<double> inertia_trace;
    // Partition after each assignment step.
    std::vector<Assignment> partition_trace;
    std::size_t iterations = 0;
    bool converged = false;
};

// Lloyd iterations on the descriptors. The initial centroids are the
// descriptors of init_prototypes(ds, k, seed) unless given explicitly. Ties go
// to the lowest cluster index and empty clusters keep their centroid.
// Throws DomainError when k exceeds the number of observations.
KMeansModel kmeans_fit(const Dataset& ds, std::size_t k, std::uint64_t seed,
                       std::size_t max_iter = 200,
                       const std::optional<std::vector<std::vector<double>>>& init = std::nullopt);

}  // namespace cluspath
