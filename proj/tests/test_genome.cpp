#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "rtsgen/genome.hpp"
#include "rtsgen/search.hpp"

using namespace rtsgen;

namespace {

GeneratedUnit make_unit(int cost, int hp, int dmg, int range, int move, int attack, int cause,
                        int effect) {
    GeneratedUnit u;
    u.cost = cost;
    u.hp = hp;
    u.damage = dmg;
    u.attackRange = range;
    u.moveTime = move;
    u.attackTime = attack;
    u.cause = static_cast<Cause>(cause);
    u.effect = static_cast<Effect>(effect);
    return u;
}

int genes_changed(const GeneratedUnit& a, const GeneratedUnit& b) {
    int n = 0;
    n += a.cost != b.cost;
    n += a.hp != b.hp;
    n += a.damage != b.damage;
    n += a.attackRange != b.attackRange;
    n += a.moveTime != b.moveTime;
    n += a.attackTime != b.attackTime;
    n += a.cause != b.cause;
    n += a.effect != b.effect;
    return n;
}

}  // namespace

TEST_CASE("random_unit is deterministic per seed") {
    SearchBounds b;
    for (uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefull}) {
        GeneratedUnit a = random_unit(b, seed);
        GeneratedUnit c = random_unit(b, seed);
        CHECK(a.same_genome(c));
    }
    CHECK_FALSE(random_unit(b, 1).same_genome(random_unit(b, 2)));
}

TEST_CASE("random_unit respects bounds and covers every ability pair") {
    SearchBounds b;
    std::map<std::pair<int, int>, int> pairCounts;
    for (int seed = 0; seed < 10000; ++seed) {
        GeneratedUnit u = random_unit(b, static_cast<uint64_t>(seed));
        CHECK(u.cost >= b.cost.lo);
        CHECK(u.cost <= b.cost.hi);
        CHECK(u.hp >= b.hp.lo);
        CHECK(u.hp <= b.hp.hi);
        CHECK(u.damage >= b.damage.lo);
        CHECK(u.damage <= b.damage.hi);
        CHECK(u.attackRange >= b.attackRange.lo);
        CHECK(u.attackRange <= b.attackRange.hi);
        CHECK(u.moveTime >= b.moveTime.lo);
        CHECK(u.moveTime <= b.moveTime.hi);
        CHECK(u.attackTime >= b.attackTime.lo);
        CHECK(u.attackTime <= b.attackTime.hi);
        pairCounts[{static_cast<int>(u.cause), static_cast<int>(u.effect)}]++;
    }
    CHECK(pairCounts.size() == 16);

    // chi-square over the 16 ability cells; 70 is far out in the tail for
    // 15 degrees of freedom, this only guards against gross skew
    double expected = 10000.0 / 16.0;
    double chi2 = 0.0;
    for (const auto& [pair, count] : pairCounts) {
        double d = count - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 70.0);
}

TEST_CASE("random_unit degenerate bounds give the unique vector") {
    SearchBounds b;
    b.cost = {2, 2};
    b.hp = {3, 3};
    b.damage = {1, 1};
    b.attackRange = {2, 2};
    b.moveTime = {7, 7};
    b.attackTime = {4, 4};
    for (int seed = 0; seed < 50; ++seed) {
        GeneratedUnit u = random_unit(b, static_cast<uint64_t>(seed));
        CHECK(u.cost == 2);
        CHECK(u.hp == 3);
        CHECK(u.damage == 1);
        CHECK(u.attackRange == 2);
        CHECK(u.moveTime == 7);
        CHECK(u.attackTime == 4);
    }
}

TEST_CASE("neighbor counts at the floor") {
    CHECK(neighbors(make_unit(2, 3, 2, 2, 6, 4, 1, 2)).size() == 18);
    CHECK(neighbors(make_unit(1, 3, 2, 2, 6, 4, 1, 2)).size() == 17);
    CHECK(neighbors(make_unit(1, 1, 1, 1, 1, 1, 2, 3)).size() == 12);
}

TEST_CASE("neighbors match the brute-force enumerator on random genomes") {
    SearchBounds b;
    b.moveTime = {1, 14};  // let the floor cases show up in every stat
    b.attackTime = {1, 7};
    for (int i = 0; i < 1000; ++i) {
        GeneratedUnit u = random_unit(b, mix64(0xabc, static_cast<uint64_t>(i)));
        auto got = neighbors(u);
        std::set<std::string> gotKeys;
        for (const auto& n : got) {
            CHECK(genes_changed(u, n) == 1);
            CHECK(n.cost >= 1);
            CHECK(n.hp >= 1);
            CHECK(n.damage >= 1);
            CHECK(n.attackRange >= 1);
            CHECK(n.moveTime >= 1);
            CHECK(n.attackTime >= 1);
            gotKeys.insert(oracles::neighbor_key(n));
        }
        CHECK(gotKeys.size() == got.size());  // no duplicates
        CHECK(gotKeys == oracles::brute_force_neighbor_keys(u));

        int statsAtFloor = (u.cost == 1) + (u.hp == 1) + (u.damage == 1) + (u.attackRange == 1) +
                           (u.moveTime == 1) + (u.attackTime == 1);
        CHECK(static_cast<int>(got.size()) == 18 - statsAtFloor);
    }
}

TEST_CASE("to_type_def maps the shipped table rows") {
    GeneratedUnit revenger = make_unit(3, 4, 2, 3, 13, 10, 1, 2);
    revenger.name = "Revenger";
    UnitType t = to_type_def(revenger);
    CHECK(t.name == "Revenger");
    CHECK(t.cost == 3);
    CHECK(t.maxHp == 4);
    CHECK(t.damage == 2);
    CHECK(t.attackRange == 3);
    CHECK(t.moveTime == 13);
    CHECK(t.attackTime == 10);
    REQUIRE(t.ability.has_value());
    CHECK(t.ability->cause == Cause::OnDeath);
    CHECK(t.ability->effect == Effect::CounterOrRepeatAttack);
    CHECK(t.produceTime == 60 + 20 * 3);

    GeneratedUnit lootennet = make_unit(3, 2, 2, 1, 7, 7, 3, 1);
    UnitType lt = to_type_def(lootennet);
    CHECK(lt.cost == 3);
    CHECK(lt.maxHp == 2);
    CHECK(lt.damage == 2);
    CHECK(lt.attackRange == 1);
    CHECK(lt.moveTime == 7);
    CHECK(lt.attackTime == 7);
    CHECK(lt.ability->cause == Cause::OnDamageDealt);
    CHECK(lt.ability->effect == Effect::ReturnResources);
}

TEST_CASE("codec round-trips and is canonical") {
    GeneratedUnit u = make_unit(2, 1, 3, 1, 15, 3, 1, 1);
    u.name = "Phoenix";
    u.fitness = 1.3577;

    std::string once = unit_to_json(u);
    GeneratedUnit parsed = unit_from_json(once);
    CHECK(parsed.same_genome(u));
    CHECK(parsed.name == u.name);
    CHECK(parsed.fitness == u.fitness);
    CHECK(unit_to_json(parsed) == once);  // byte-identical second pass

    GeneratedUnit bare = make_unit(1, 1, 1, 1, 5, 3, 4, 4);
    std::string bareText = unit_to_json(bare);
    GeneratedUnit bareParsed = unit_from_json(bareText);
    CHECK(bareParsed.name.empty());
    CHECK_FALSE(bareParsed.fitness.has_value());
    CHECK(unit_to_json(bareParsed) == bareText);
}

TEST_CASE("codec names the offending field") {
    CHECK_THROWS_WITH_AS(unit_from_json(R"({"cost":1,"hp":0,"damage":1,"range":1,
        "moveTime":5,"attackTime":3,"cause":1,"effect":1})"),
                         doctest::Contains("hp"), CodecError);
    CHECK_THROWS_WITH_AS(unit_from_json(R"({"hp":1,"damage":1,"range":1,
        "moveTime":5,"attackTime":3,"cause":1,"effect":1})"),
                         doctest::Contains("cost"), CodecError);
    CHECK_THROWS_WITH_AS(unit_from_json(R"({"cost":1,"hp":1,"damage":1,"range":1,
        "moveTime":5,"attackTime":3,"cause":5,"effect":1})"),
                         doctest::Contains("cause"), CodecError);
    CHECK_THROWS_AS(unit_from_json("not json"), CodecError);
}

TEST_CASE("shipped fixture units parse and match the published rows") {
    struct Row {
        const char* file;
        const char* name;
        int cost, hp, dmg, range, move, attack, cause, effect;
        double fitness;
    };
    const Row rows[] = {
        {"revenger.json", "Revenger", 3, 4, 2, 3, 13, 10, 1, 2, 1.3397},
        {"lootennet.json", "LooTennet", 3, 2, 2, 1, 7, 7, 3, 1, 1.3773},
        {"phoenix.json", "Phoenix", 2, 1, 3, 1, 15, 3, 1, 1, 1.3577},
        {"penny_pincher.json", "Penny Pincher", 1, 3, 1, 2, 10, 8, 4, 1, 1.0068},
        {"slinger.json", "Slinger", 1, 3, 2, 3, 11, 3, 4, 2, 0.7911},
        {"statue.json", "Statue", 1, 4, 1, 3, 11, 5, 4, 1, 0.9153},
        {"lawman.json", "Lawman", 2, 1, 3, 2, 11, 3, 3, 2, 0.8511},
        {"barrage.json", "Barrage", 1, 3, 2, 4, 13, 3, 4, 2, 0.7255},
        {"hunter.json", "Hunter", 1, 3, 2, 1, 7, 6, 4, 1, 1.0819},
        {"chopper.json", "Chopper", 2, 1, 2, 2, 7, 5, 2, 4, 0.6816},
    };
    for (const Row& r : rows) {
        GeneratedUnit u = load_unit_file(std::string(RTSGEN_FIXTURES_DIR) + "/" + r.file);
        CAPTURE(r.file);
        CHECK(u.name == r.name);
        CHECK(u.cost == r.cost);
        CHECK(u.hp == r.hp);
        CHECK(u.damage == r.dmg);
        CHECK(u.attackRange == r.range);
        CHECK(u.moveTime == r.move);
        CHECK(u.attackTime == r.attack);
        CHECK(static_cast<int>(u.cause) == r.cause);
        CHECK(static_cast<int>(u.effect) == r.effect);
        REQUIRE(u.fitness.has_value());
        CHECK(*u.fitness == doctest::Approx(r.fitness).epsilon(1e-12));
    }
}

TEST_CASE("genome_key is injective over the genes and stable") {
    GeneratedUnit a = make_unit(3, 4, 2, 3, 13, 10, 1, 2);
    GeneratedUnit b = a;
    CHECK(genome_key(a) == genome_key(b));
    b.effect = Effect::Heal;
    CHECK(genome_key(a) != genome_key(b));

    // golden value; changing it silently invalidates any cached fitness files
    CHECK(genome_key(a) == "3-4-2-3-13-10-1-2");

    std::set<std::string> keys;
    SearchBounds bounds;
    for (int i = 0; i < 500; ++i) {
        GeneratedUnit u = random_unit(bounds, mix64(7, static_cast<uint64_t>(i)));
        keys.insert(genome_key(u));
        for (const auto& n : neighbors(u)) keys.insert(genome_key(n));
    }
    // spot check: keys of distinct genomes collide never (set growth matches)
    CHECK(keys.size() > 500);
}

TEST_CASE("with_generated_unit wires the type into army production") {
    GameConfig base = default_config();
    GeneratedUnit u = make_unit(2, 3, 2, 2, 8, 4, 2, 3);
    u.name = "Tester";
    GameConfig cfg = with_generated_unit(base, u);
    REQUIRE(cfg.generatedType == static_cast<int>(base.unitTypes.size()));
    const UnitType& t = cfg.unitTypes[static_cast<size_t>(cfg.generatedType)];
    CHECK(t.name == "Tester");

    // exactly the army producers picked it up
    for (size_t i = 0; i < base.unitTypes.size(); ++i) {
        bool producesGen = false;
        for (int p : cfg.unitTypes[i].produces) producesGen |= (p == cfg.generatedType);
        bool armyProducer = false;
        for (int p : base.unitTypes[i].produces)
            armyProducer |= !base.unitTypes[static_cast<size_t>(p)].canHarvest;
        armyProducer &= base.unitTypes[i].isStructure;
        CHECK(producesGen == armyProducer);
    }
}
