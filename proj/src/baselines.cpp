#include "cluspath/baselines.hpp"

#include <string>

#include "cluspath/error.hpp"
#include "cluspath/kernels.hpp"
#include "cluspath/solver.hpp"

namespace cluspath {

KMeansModel kmeans_fit(const Dataset& ds, std::size_t k, std::uint64_t seed, std::size_t max_iter,
                       const std::optional<std::vector<std::vector<double>>>& init) {
    if (k == 0 || k > ds.size()) {
        throw DomainError("k-means needs 1 <= k <= n, got k = " + std::to_string(k));
    }
    const std::size_t n = ds.size();
    const std::size_t dim = ds.dim();
    const auto& kern = kernels::active();

    KMeansModel model;
    if (init.has_value()) {
        if (init->size() != k) {
            throw DomainError("k-means initialization has the wrong number of centroids");
        }
        model.centroids = *init;
    } else {
        for (auto& p : init_prototypes(ds, k, seed)) {
            model.centroids.push_back(std::move(p.mu_d));
        }
    }
    for (const auto& c : model.centroids) {
        if (c.size() != dim) {
            throw DomainError("k-means centroid dimension does not match the dataset");
        }
    }

    model.assignment = Assignment{k, std::vector<std::size_t>(n, kUnassigned)};
    std::vector<double> sums(k * dim);
    std::vector<std::size_t> counts(k);
    while (model.iterations < max_iter) {
        ++model.iterations;
        std::vector<std::size_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d2 = kern.squared_distance(ds.descriptor(i).data(),
                                                   model.centroids[0].data(), dim);
            for (std::size_t c = 1; c < k; ++c) {
                const double d2 = kern.squared_distance(ds.descriptor(i).data(),
                                                        model.centroids[c].data(), dim);
                if (d2 < best_d2) {
                    best = c;
                    best_d2 = d2;
                }
            }
            next[i] = best;
        }
        const bool unchanged = next == model.assignment.cluster_of;
        model.assignment.cluster_of = std::move(next);
        model.partition_trace.push_back(model.assignment);

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = model.assignment[i];
            kern.axpy(1.0, ds.descriptor(i).data(), sums.data() + c * dim, dim);
            ++counts[c];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            const double den = static_cast<double>(counts[c]);
            for (std::size_t f = 0; f < dim; ++f) {
                model.centroids[c][f] = sums[c * dim + f] / den;
            }
        }
        double after = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            after += kern.squared_distance(ds.descriptor(i).data(),
                                           model.centroids[model.assignment[i]].data(), dim);
        }
        model.inertia = after;
        model.inertia_trace.push_back(after);
        if (unchanged) {
            model.converged = true;
            break;
        }
    }
    return model;
}

}  // namespace cluspath
