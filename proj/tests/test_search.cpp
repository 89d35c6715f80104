#include <doctest.h>

#include <map>

#include "rtsgen/search.hpp"

using namespace rtsgen;

namespace {

int stat_sum(const GeneratedUnit& u) {
    return u.cost + u.hp + u.damage + u.attackRange + u.moveTime + u.attackTime;
}

HillClimbConfig quick_config(int cap = 200) {
    HillClimbConfig cfg;
    cfg.iterationCap = cap;
    cfg.gamesPerEvaluation = 20;
    return cfg;
}

}  // namespace

TEST_CASE("a constant objective stops after one iteration") {
    auto [unit, trace] = hill_climb(quick_config(), [](const GeneratedUnit&) { return 1.0; }, 5);
    CHECK(trace.iterations.size() == 1);
    CHECK_FALSE(trace.iterations.back().chosen.has_value());
    CHECK_FALSE(trace.iterationCapHit);
    CHECK(unit.same_genome(random_unit(SearchBounds{}, 5)));  // never moved
    CHECK(trace.terminalUnit.same_genome(unit));
}

TEST_CASE("minimizing total stats walks to the all-ones corner") {
    auto objective = [](const GeneratedUnit& u) { return -static_cast<double>(stat_sum(u)); };
    for (uint64_t seed : {0ull, 3ull, 11ull}) {
        auto [unit, trace] = hill_climb(quick_config(), objective, seed);
        CAPTURE(seed);
        CHECK(unit.cost == 1);
        CHECK(unit.hp == 1);
        CHECK(unit.damage == 1);
        CHECK(unit.attackRange == 1);
        CHECK(unit.moveTime == 1);
        CHECK(unit.attackTime == 1);
        CHECK_FALSE(trace.iterationCapHit);

        // exactly the analytic distance: one accepted move per unit of excess
        GeneratedUnit start = random_unit(SearchBounds{}, seed);
        CHECK(trace.iterations.size() == static_cast<size_t>(stat_sum(start) - 6 + 1));
    }
}

TEST_CASE("accepted fitness is strictly increasing along the climb") {
    auto objective = [](const GeneratedUnit& u) {
        // a lumpy but deterministic landscape
        return static_cast<double>((u.cost * 7 + u.hp * 5 + u.damage * 11 + u.attackRange * 3 +
                                    u.moveTime + u.attackTime * 2 + static_cast<int>(u.cause) * 13 +
                                    static_cast<int>(u.effect) * 17) %
                                   101);
    };
    auto [unit, trace] = hill_climb(quick_config(), objective, 123);
    for (size_t i = 1; i < trace.iterations.size(); ++i)
        CHECK(trace.iterations[i].currentFitness > trace.iterations[i - 1].currentFitness);
    // local maximum: no evaluated neighbor of the final unit beats it
    const SearchIteration& last = trace.iterations.back();
    CHECK_FALSE(last.chosen.has_value());
    for (const NeighborEval& n : last.evaluated) CHECK(n.fitness <= last.currentFitness);
}

TEST_CASE("each genome is evaluated at most once per climb") {
    std::map<std::string, int> calls;
    auto objective = [&calls](const GeneratedUnit& u) {
        calls[genome_key(u)]++;
        return -static_cast<double>(stat_sum(u));
    };
    auto [unit, trace] = hill_climb(quick_config(), objective, 17);
    (void)unit;
    for (const auto& [key, count] : calls) {
        CAPTURE(key);
        CHECK(count == 1);
    }
    // the climb revisits overlapping neighborhoods, so the cache must have hits
    bool sawCacheHit = false;
    for (const auto& it : trace.iterations)
        for (const auto& n : it.evaluated) sawCacheHit |= n.fromCache;
    CHECK(sawCacheHit);

    // bookkeeping counts only fresh evaluations
    CHECK(trace.totalGamesSimulated == static_cast<long>(calls.size()) * 20);
}

TEST_CASE("fixed seed and objective reproduce the identical trace") {
    auto objective = [](const GeneratedUnit& u) {
        return static_cast<double>((stat_sum(u) * 37) % 23);
    };
    auto [u1, t1] = hill_climb(quick_config(), objective, 77);
    auto [u2, t2] = hill_climb(quick_config(), objective, 77);
    CHECK(u1.same_genome(u2));
    CHECK(search_trace_to_json(t1) == search_trace_to_json(t2));
}

TEST_CASE("iteration cap halts a non-converging climb and is logged") {
    // fitness keeps growing with cost, so the climb would drift forever
    auto objective = [](const GeneratedUnit& u) { return static_cast<double>(u.cost); };
    auto [unit, trace] = hill_climb(quick_config(4), objective, 9);
    (void)unit;
    CHECK(trace.iterationCapHit);
    CHECK(trace.iterations.size() == 4);
}

TEST_CASE("an evaluator failure aborts with a partial trace") {
    int calls = 0;
    auto objective = [&calls](const GeneratedUnit& u) -> double {
        if (++calls > 5) throw std::runtime_error("backend went away");
        return -static_cast<double>(stat_sum(u));
    };
    auto [unit, trace] = hill_climb(quick_config(), objective, 5);
    (void)unit;
    REQUIRE(trace.error.has_value());
    CHECK(*trace.error == "backend went away");
}

TEST_CASE("the trace serializes with its verdict intact") {
    auto objective = [](const GeneratedUnit& u) { return -static_cast<double>(stat_sum(u)); };
    auto [unit, trace] = hill_climb(quick_config(), objective, 2);
    std::string json = search_trace_to_json(trace);
    CHECK(json.find("terminalUnit") != std::string::npos);
    CHECK(json.find("totalGamesSimulated") != std::string::npos);
    CHECK(unit.fitness.has_value());
}
