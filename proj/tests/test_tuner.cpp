#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "cluspath/error.hpp"
#include "cluspath/tuner.hpp"
#include "support/support.hpp"

using namespace cluspath;
using namespace cluspath::tuner;

namespace {

Individual evaluated(MeasureVector m, std::size_t id = 0) {
    Individual ind;
    ind.measures = m;
    ind.id = id;
    return ind;
}

MeasureVector two_objective(const Genome& g) {
    const double u = g[alpha] + 1.0;
    const double v = (g[delta] - 5.05) / 4.95;
    return {u * u + v * v, (u - 2.0) * (u - 2.0) + v * v, 0.0, 0.0};
}

}  // namespace

TEST_CASE("dominance") {
    CHECK_FALSE(dominates({1, 1, 1, 1}, {1, 1, 1, 1}));
    CHECK(dominates({1, 1, 1, 1}, {2, 2, 2, 2}));
    CHECK_FALSE(dominates({1, 3, 1, 1}, {2, 2, 2, 2}));
    CHECK(dominates({1, 2, 2, 2}, {2, 2, 2, 2}));
}

TEST_CASE("dominance_fitness") {
    CHECK(dominance_fitness(std::vector<MeasureVector>{{1, 1, 1, 1}}) ==
          std::vector<std::size_t>{0});
    CHECK(dominance_fitness(std::vector<MeasureVector>{{1, 1, 1, 1}, {2, 2, 2, 2}}) ==
          std::vector<std::size_t>{0, 1});

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MeasureVector> cloud(20);
    for (auto& m : cloud) {
        m = {unit(rng), unit(rng), unit(rng), unit(rng)};
    }
    const auto fit = dominance_fitness(cloud);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::size_t count = 0;
        const auto b = cloud[i].as_array();
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            const auto a = cloud[j].as_array();
            bool le = true;
            bool lt = false;
            for (std::size_t d = 0; d < 4; ++d) {
                le = le && a[d] <= b[d];
                lt = lt || a[d] < b[d];
            }
            count += (le && lt) ? 1 : 0;
        }
        CHECK(fit[i] == count);
    }
}

TEST_CASE("select_elite") {
    TunerConfig cfg;
    SUBCASE("front of five and ten dominated keeps six") {
        std::vector<Individual> pop;
        for (std::size_t i = 0; i < 5; ++i) {
            pop.push_back(evaluated({double(i), 4.0 - double(i), 0, 0}, i));
        }
        for (std::size_t i = 0; i < 10; ++i) {
            pop.push_back(evaluated({10.0 + double(i), 10.0 + double(i), 1, 1}, 5 + i));
        }
        assign_fitness(pop);
        const auto elite = select_elite(pop, cfg);
        REQUIRE(elite.size() == 6);
        CHECK(elite.back().id == 5);
    }
    SUBCASE("all non-dominated survive") {
        std::vector<Individual> pop{evaluated({0, 1, 0, 0}), evaluated({1, 0, 0, 0})};
        assign_fitness(pop);
        CHECK(select_elite(pop, cfg).size() == 2);
    }
    SUBCASE("missing fitness is rejected") {
        CHECK_THROWS_AS(select_elite({evaluated({0, 0, 0, 0})}, cfg), DomainError);
    }
}

TEST_CASE("mutate") {
    TunerConfig cfg;
    std::mt19937_64 rng(2);
    Individual parent;
    parent.genome = {0.5, 5e-4, 3.0, 10.0, 20.0, 30.0};
    for (int trial = 0; trial < 200; ++trial) {
        const Individual child = mutate(parent, cfg, rng);
        std::size_t changed = 0;
        for (std::size_t g = 0; g < kGenes; ++g) {
            changed += child.genome[g] != parent.genome[g] ? 1 : 0;
            CHECK(child.genome[g] >= cfg.search_box[g].lo);
            CHECK(child.genome[g] <= cfg.search_box[g].hi);
        }
        CHECK(changed >= 1);
        CHECK(changed <= 2);
    }
    std::mt19937_64 r1(9);
    std::mt19937_64 r2(9);
    CHECK(mutate(parent, cfg, r1).genome == mutate(parent, cfg, r2).genome);

    TunerConfig flat = cfg;
    for (auto& box : flat.search_box) {
        box.hi = box.lo;
    }
    Individual low;
    for (std::size_t g = 0; g < kGenes; ++g) {
        low.genome[g] = flat.search_box[g].lo;
    }
    CHECK(mutate(low, flat, rng).genome == low.genome);

    TunerConfig only_alpha = cfg;
    for (std::size_t g = 1; g < kGenes; ++g) {
        only_alpha.search_box[g].hi = only_alpha.search_box[g].lo;
    }
    double mean = 0.0;
    int hits = 0;
    for (int trial = 0; trial < 8000; ++trial) {
        const Individual child = mutate(low, only_alpha, rng);
        if (child.genome[alpha] != low.genome[alpha]) {
            mean += child.genome[alpha];
            ++hits;
        }
    }
    REQUIRE(hits > 1000);
    CHECK(std::abs(mean / hits) < 0.1);
}

TEST_CASE("path_relink") {
    TunerConfig cfg;
    std::mt19937_64 rng(3);
    Individual a;
    a.genome = {-0.5, 1e-4, 1.0, 0.0, 100.0, 5.0};
    Individual b;
    b.genome = {0.5, 9e-4, 8.0, 900.0, 50.0, 5.0};
    for (int trial = 0; trial < 100; ++trial) {
        const Individual child = path_relink(a, b, cfg, rng);
        for (std::size_t g = 0; g < kGenes; ++g) {
            CHECK(child.genome[g] >= std::min(a.genome[g], b.genome[g]));
            CHECK(child.genome[g] <= std::max(a.genome[g], b.genome[g]));
        }
    }
    CHECK(path_relink(a, a, cfg, rng).genome == a.genome);

    // The weight drawn for a gene multiplies parent_b.
    std::mt19937_64 probe(17);
    const double w0 = std::uniform_real_distribution<double>(0.0, 1.0)(probe);
    std::mt19937_64 same(17);
    Individual zero;
    zero.genome = {0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
    Individual one;
    one.genome = {1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
    CHECK(path_relink(zero, one, cfg, same).genome[alpha] == doctest::Approx(w0));
}

TEST_CASE("closest_to_ideal") {
    const std::vector<Individual> single{evaluated({3, 3, 3, 3})};
    CHECK(closest_to_ideal(single) == 0);
    const std::vector<Individual> two{evaluated({0, 0, 0, 1}), evaluated({1, 1, 1, 0})};
    CHECK(closest_to_ideal(two) == 0);
    const auto d = ideal_distances(two, two);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(std::sqrt(3.0)));
    const std::vector<Individual> flat{evaluated({5, 0, 2, 1}), evaluated({5, 1, 2, 0})};
    CHECK(ideal_distances(flat, flat)[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(closest_to_ideal(std::vector<Individual>{}), DomainError);

    Individual failed = evaluated({INFINITY, INFINITY, INFINITY, INFINITY});
    const std::vector<Individual> with_failure{two[0], two[1], failed};
    const auto df = ideal_distances(with_failure, with_failure);
    CHECK(df[0] == doctest::Approx(1.0));
    CHECK(std::isinf(df[2]));
}

TEST_CASE("tune with a stub evaluator") {
    TunerConfig cfg;
    cfg.population_size = 20;
    cfg.max_generations = 8;
    cfg.seed = 5;
    cfg.record_populations = true;
    std::atomic<std::size_t> calls{0};
    const Evaluator stub = [&](const Genome& g) {
        ++calls;
        return two_objective(g);
    };
    const TuneResult r = tune(stub, cfg);
    CHECK(r.evaluations == calls.load());
    CHECK(r.populations.size() == r.history.size());
    for (const auto& pop : r.populations) {
        CHECK(pop.size() == cfg.population_size);
    }

    // Calls = initial population + every id created afterwards.
    std::set<std::size_t> ids;
    for (const auto& pop : r.populations) {
        for (const auto& ind : pop) {
            ids.insert(ind.id);
        }
    }
    CHECK(r.evaluations == ids.size());

    for (const auto& a : r.front) {
        for (const auto& b : r.front) {
            CHECK_FALSE(dominates(*a.measures, *b.measures));
        }
    }

    // Elitism and best distance under the final normalization.
    double last = INFINITY;
    for (std::size_t g = 0; g < r.populations.size(); ++g) {
        std::vector<Individual> pop = r.populations[g];
        assign_fitness(pop);
        std::vector<Individual> front;
        for (const auto& ind : pop) {
            if (*ind.fitness == 0) front.push_back(ind);
        }
        if (g + 1 < r.populations.size()) {
            std::set<std::size_t> next;
            for (const auto& ind : r.populations[g + 1]) next.insert(ind.id);
            for (const auto& ind : front) CHECK(next.count(ind.id) == 1);
        }
        const auto d = ideal_distances(front, r.final_population);
        const double best = *std::min_element(d.begin(), d.end());
        CHECK(best <= last + 1e-12);
        last = best;
    }

    const TuneResult again = tune(two_objective, cfg);
    CHECK(again.best == r.best);
    CHECK(again.front.size() == r.front.size());

    TunerConfig threaded = cfg;
    threaded.threads = 3;
    const TuneResult parallel = tune(two_objective, threaded);
    CHECK(parallel.best == r.best);
    CHECK(parallel.evaluations == r.evaluations);
}

TEST_CASE("tune stops early once everything is non-dominated") {
    TunerConfig cfg;
    cfg.population_size = 6;
    cfg.max_generations = 50;
    const TuneResult r = tune([](const Genome&) { return MeasureVector{1, 1, 1, 1}; }, cfg);
    CHECK(r.history.size() == 1);
    CHECK(r.front.size() == 6);

    cfg.max_generations = 1;
    const TuneResult one = tune(two_objective, cfg);
    CHECK(one.history.size() == 1);
    CHECK(one.evaluations == 6);
}

TEST_CASE("failing evaluations get infinite measures") {
    TunerConfig cfg;
    cfg.population_size = 10;
    cfg.max_generations = 3;
    const TuneResult r = tune(
        [](const Genome& g) {
            if (g[alpha] > 0.5) throw SolverError("boom", "state");
            return two_objective(g);
        },
        cfg);
    for (const auto& ind : r.final_population) {
        if (ind.evaluation_failed) {
            CHECK(std::isinf(ind.measures->mdvar));
        }
    }
    CHECK_FALSE(r.best_individual.evaluation_failed);
}

TEST_CASE("config validation") {
    TunerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.population_size = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.mutation_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.search_box[alpha] = {-2.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.search_box[delta] = {3.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("tune on a dataset is deterministic") {
    const Dataset ds = testing::random_dataset({4, 5, 2, 10.0}, 3);
    TunerConfig cfg;
    cfg.population_size = 8;
    cfg.max_generations = 3;
    cfg.k = 3;
    const TuneResult a = tune(ds, cfg, SolverConfig{});
    const TuneResult b = tune(ds, cfg, SolverConfig{});
    CHECK(a.best == b.best);
    CHECK(a.best.k == 3);
    REQUIRE(a.front.size() == b.front.size());
    for (std::size_t i = 0; i < a.front.size(); ++i) {
        CHECK(a.front[i].genome == b.front[i].genome);
        CHECK(*a.front[i].measures == *b.front[i].measures);
    }
}
