#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cluspath/core.hpp"

namespace cluspath::synth {

// Planted evolution-phase scenario. Phase 0 opens every path; the remaining
// phases come in stages of two alternatives, so with 5 phases an entity moves
// through 0 -> {1 | 2} -> {3 | 4}. Each entity is observed at integer times
// 0 .. timestamps-1 and spends one contiguous segment in each stage.
struct Config {
    std::size_t entities = 12;
    std::size_t phases = 5;
    std::size_t timestamps = 12;
    std::size_t dim = 2;
    // Minimum distance between two phase centers.
    double separation = 1.0;
    // Gaussian noise standard deviation, as a fraction of the separation.
    double noise = 0.1;
    // Shift each stage boundary by up to this many timestamps per entity.
    std::size_t boundary_jitter = 1;
    std::uint64_t seed = 0;

    // Throws DomainError for an inconsistent layout.
    void validate() const;
};

struct PlantedData {
    Dataset dataset;
    // Planted phase of every observation, indexed like the dataset.
    Assignment labels;
    // Planted run-length path of every entity, in dataset entity order.
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::vector<double>> phase_centers;
};

std::size_t stage_count(std::size_t phases);

PlantedData generate(const Config& cfg);

}  // namespace cluspath::synth
