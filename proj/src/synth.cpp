#include "cluspath/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cluspath/error.hpp"

namespace cluspath::synth {

std::size_t stage_count(std::size_t phases) {
    return phases == 0 ? 0 : 1 + phases / 2;
}

void Config::validate() const {
    if (entities == 0) {
        throw DomainError("synthetic layout needs at least one entity");
    }
    if (phases == 0) {
        throw DomainError("synthetic layout needs at least one phase");
    }
    if (dim == 0) {
        throw DomainError("synthetic layout needs at least one feature");
    }
    if (timestamps < stage_count(phases)) {
        throw DomainError("synthetic layout has fewer timestamps than stages");
    }
    if (!(separation > 0.0) || !(noise >= 0.0)) {
        throw DomainError("separation must be positive and noise non-negative");
    }
}

PlantedData generate(const Config& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const std::size_t stages = stage_count(cfg.phases);

    // Centers on a circle in the first two coordinates with chord length equal
    // to the separation; one-dimensional layouts use a line.
    std::vector<std::vector<double>> centers(cfg.phases, std::vector<double>(cfg.dim, 0.0));
    if (cfg.dim == 1 || cfg.phases == 1) {
        for (std::size_t j = 0; j < cfg.phases; ++j) {
            centers[j][0] = cfg.separation * static_cast<double>(j);
        }
    } else {
        const double m = static_cast<double>(cfg.phases);
        const double radius = cfg.separation / (2.0 * std::sin(std::numbers::pi / m));
        for (std::size_t j = 0; j < cfg.phases; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / m;
            centers[j][0] = radius * std::cos(angle);
            centers[j][1] = radius * std::sin(angle);
        }
    }

    auto stage_phases = [&](std::size_t s) -> std::vector<std::size_t> {
        if (s == 0) {
            return {0};
        }
        std::vector<std::size_t> out;
        for (std::size_t j = 2 * s - 1; j <= 2 * s && j < cfg.phases; ++j) {
            out.push_back(j);
        }
        return out;
    };

    std::normal_distribution<double> gauss(0.0, cfg.noise * cfg.separation);
    std::vector<Observation> observations;
    std::vector<std::size_t> labels;
    std::vector<std::vector<std::size_t>> paths;
    for (std::size_t e = 0; e < cfg.entities; ++e) {
        std::vector<std::size_t> path;
        for (std::size_t s = 0; s < stages; ++s) {
            const auto options = stage_phases(s);
            std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
            path.push_back(options[pick(rng)]);
        }

        // Stage boundaries: nominal equal split, jittered, kept strictly
        // increasing so every stage holds at least one timestamp.
        std::vector<std::size_t> starts(stages, 0);
        for (std::size_t s = 1; s < stages; ++s) {
            const auto nominal = static_cast<long>(s * cfg.timestamps / stages);
            const long jitter = static_cast<long>(cfg.boundary_jitter);
            std::uniform_int_distribution<long> shift(-jitter, jitter);
            const long lo = static_cast<long>(starts[s - 1]) + 1;
            const long hi = static_cast<long>(cfg.timestamps - (stages - s));
            starts[s] = static_cast<std::size_t>(std::clamp(nominal + shift(rng), lo, hi));
        }

        std::size_t stage = 0;
        for (std::size_t t = 0; t < cfg.timestamps; ++t) {
            while (stage + 1 < stages && t >= starts[stage + 1]) {
                ++stage;
            }
            const std::size_t phase = path[stage];
            Observation obs;
            obs.entity = "e" + std::to_string(e);
            obs.time = static_cast<double>(t);
            obs.descriptor = centers[phase];
            if (cfg.noise > 0.0) {
                for (double& v : obs.descriptor) {
                    v += gauss(rng);
                }
            }
            observations.push_back(std::move(obs));
            labels.push_back(phase);
        }
        paths.push_back(std::move(path));
    }

    PlantedData out{Dataset::from_observations(observations),
                    Assignment{cfg.phases, std::move(labels)}, std::move(paths),
                    std::move(centers)};
    return out;
}

}  // namespace cluspath::synth
