#include <doctest.h>

#include <random>
#include <vector>

#include "cluspath/baselines.hpp"
#include "cluspath/error.hpp"
#include "support/support.hpp"

using namespace cluspath;

namespace {

// k tight blobs far apart, labels in generation order.
std::pair<Dataset, std::vector<std::size_t>> blobs(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<Observation> obs;
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < k; ++c) {
        for (int m = 0; m < 8; ++m) {
            obs.push_back({"b" + std::to_string(c) + "_" + std::to_string(m), 0.0,
                           {10.0 * double(c) + noise(rng), -5.0 * double(c) + noise(rng)}});
            labels.push_back(c);
        }
    }
    return {Dataset::from_observations(obs), labels};
}

}  // namespace

TEST_CASE("separated blobs are recovered") {
    const auto [ds, labels] = blobs(3, 1);
    // Start from one point of each blob.
    const std::vector<std::vector<double>> init{
        {ds.descriptor(0).begin(), ds.descriptor(0).end()},
        {ds.descriptor(8).begin(), ds.descriptor(8).end()},
        {ds.descriptor(16).begin(), ds.descriptor(16).end()}};
    const KMeansModel m = kmeans_fit(ds, 3, 0, 200, init);
    CHECK(testing::adjusted_rand(m.assignment.cluster_of, labels) == doctest::Approx(1.0));
    CHECK(m.converged);
}

TEST_CASE("k equal to n gives zero inertia") {
    const Dataset ds = testing::random_dataset({2, 4, 2, 10.0}, 3);
    const KMeansModel m = kmeans_fit(ds, ds.size(), 1);
    CHECK(m.inertia == doctest::Approx(0.0));
    CHECK_THROWS_AS(kmeans_fit(ds, ds.size() + 1, 1), DomainError);
}

TEST_CASE("inertia never rises and the run is deterministic") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset ds = testing::random_dataset({5, 6, 3, 10.0}, 20 + seed);
        const KMeansModel m = kmeans_fit(ds, 4, seed);
        for (std::size_t i = 1; i < m.inertia_trace.size(); ++i) {
            CHECK(m.inertia_trace[i] <= m.inertia_trace[i - 1] + 1e-12);
        }
        CHECK(m.partition_trace.size() == m.iterations);
        CHECK(kmeans_fit(ds, 4, seed).assignment == m.assignment);
    }
}
