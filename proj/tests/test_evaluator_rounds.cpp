#include <doctest.h>

#include "rtsgen/evaluator.hpp"

using namespace rtsgen;

namespace {

GeneratedUnit sample_unit(int cost = 3) {
    GeneratedUnit u;
    u.cost = cost;
    u.hp = 4;
    u.damage = 2;
    u.attackRange = 2;
    u.moveTime = 8;
    u.attackTime = 5;
    u.cause = Cause::OnDamageDealt;
    u.effect = Effect::ReturnResources;
    return u;
}

EvalConfig scripted_config(AgentFactory factory, int maxTicks = 160, int games = 4) {
    EvalConfig cfg = EvalConfig::defaults();
    cfg.game.maxTicks = maxTicks;
    cfg.gamesPerRound = games;
    cfg.agentFactory = std::move(factory);
    cfg.jobs = 2;
    return cfg;
}

AgentFactory noop_factory() {
    return [](int, const AgentConfig&, const ProductionRights&) {
        return std::make_unique<NoopAgent>();
    };
}

// Builds the newest type in the table with whoever can; relies on the
// generated type being appended last.
class BuildNewestAgent : public Agent {
public:
    PlayerAction choose_action(const GameState& s, int player) override {
        BuilderAgent inner(s.typeCount() - 1);
        return inner.choose_action(s, player);
    }
};

class BuildThenRushAgent : public Agent {
public:
    PlayerAction choose_action(const GameState& s, int player) override {
        BuilderAgent builder(s.typeCount() - 1);
        RushAgent rusher;
        PlayerAction a = builder.choose_action(s, player);
        PlayerAction b = rusher.choose_action(s, player);
        a.commands.insert(a.commands.end(), b.commands.begin(), b.commands.end());
        return a;
    }
};

}  // namespace

TEST_CASE("a holder that never builds yields the neutral low-confidence score") {
    EvalConfig cfg = scripted_config(noop_factory(), 120, 4);
    RoundOneMetrics m = run_round_one(sample_unit(), cfg);
    CHECK(m.games.size() == 4);
    CHECK(m.made_games() == 0);
    bool low = false;
    CHECK(fitness_round_one(m, &low) == 0.0);
    CHECK(low);
}

TEST_CASE("round one records the exact survival interval of a built unit") {
    // holder builds exactly one instance (cost 3, stockpile 5, no income) and
    // nothing ever attacks it, so it lives from spawn to the timer
    auto factory = [](int enginePlayer, const AgentConfig&,
                      const ProductionRights& rights) -> std::unique_ptr<Agent> {
        // the non-holder side is the one stripped of the right to build
        bool holder = true;
        for (int t = 0; t < 32; ++t)
            if (!rights.allowed(enginePlayer, t)) holder = false;
        if (holder) return std::make_unique<BuildNewestAgent>();
        return std::make_unique<NoopAgent>();
    };
    EvalConfig cfg = scripted_config(factory, 300, 4);
    GeneratedUnit unit = sample_unit(3);

    RoundOneMetrics m = run_round_one(unit, cfg);
    int produceTime = cfg.typeDefaults.produceTimeBase + cfg.typeDefaults.produceTimePerCost * 3;
    REQUIRE(m.games.size() == 4);
    CHECK(m.made_games() == 4);
    for (const GameRecord& g : m.games) {
        CHECK(g.unitMade);
        CHECK(g.outcome == 0);  // nobody fights, the timer ends it
        CHECK(g.gameTicks == 300);
        CHECK(g.aliveTicks == 300 - produceTime);
    }
}

TEST_CASE("default round-one cardinality is ten games") {
    EvalConfig cfg = scripted_config(noop_factory(), 40);
    cfg.gamesPerRound = 10;
    CHECK(run_round_one(sample_unit(), cfg).games.size() == 10);
}

TEST_CASE("round two with passive agents is neutral and flagged") {
    EvalConfig cfg = scripted_config(noop_factory(), 80, 4);
    RoundTwoMetrics m = run_round_two(sample_unit(), cfg);
    CHECK(m.p1Wins == 0);
    CHECK(m.p1Made == 0);
    CHECK(m.p2Made == 0);
    bool low = false;
    CHECK(fitness_round_two(m, &low) == 0.5);
    CHECK(low);
}

TEST_CASE("round two counts both builders and the first player's sweep") {
    // both sides build; the first corner also fights and wins every game
    auto factory = [](int enginePlayer, const AgentConfig&,
                      const ProductionRights&) -> std::unique_ptr<Agent> {
        if (enginePlayer == 0) return std::make_unique<BuildThenRushAgent>();
        return std::make_unique<BuildNewestAgent>();
    };
    EvalConfig cfg = scripted_config(factory, 3000, 10);
    GeneratedUnit unit = sample_unit(1);  // cheap enough to finish before the rush arrives

    RoundTwoMetrics m = run_round_two(unit, cfg);
    CHECK(m.p1Made == 10);
    CHECK(m.p2Made == 10);
    CHECK(m.p1Wins == 10);
    CHECK(fitness_round_two(m) == 1.0);  // 10 / 20, the double-counted denominator
}

TEST_CASE("non-holders cannot produce the candidate in round one") {
    GeneratedUnit unit = sample_unit(1);
    EvalConfig cfg = EvalConfig::defaults();
    cfg.game.maxTicks = 400;
    cfg.gamesPerRound = 6;
    cfg.jobs = 2;
    cfg.agents.maxIterations = 40;
    cfg.agents.maxDepth = 2;

    GameConfig game = with_generated_unit(cfg.game, unit, cfg.typeDefaults);
    for (int i = 0; i < cfg.gamesPerRound; ++i) {
        int holder = i % 2;
        ProductionRights rights;
        rights.forbid(1 - holder, game.generatedType);
        MctsAgent a0(cfg.agents, rights);
        MctsAgent a1(cfg.agents, rights);
        RunOptions opts;
        opts.collectLog = false;
        GameResult r = run_game(game, a0, a1, mix64(cfg.seedBase, 0x31, static_cast<uint64_t>(i)),
                                opts);
        CHECK(r.produced_by(game.generatedType, 1 - holder) == 0);
    }
}

TEST_CASE("evaluate_unit is deterministic and composes both rounds") {
    GeneratedUnit unit = sample_unit();
    EvalConfig cfg = EvalConfig::defaults();
    cfg.game.maxTicks = 240;
    cfg.gamesPerRound = 2;
    cfg.jobs = 2;
    cfg.agents.maxIterations = 16;
    cfg.agents.maxDepth = 2;
    cfg.agents.playoutHorizon = 40;
    cfg.seedBase = 99;

    FitnessReport a = evaluate_unit(unit, cfg);
    FitnessReport b = evaluate_unit(unit, cfg);
    CHECK(fitness_report_to_json(a) == fitness_report_to_json(b));
    CHECK(a.total == a.utility + a.balance);
    CHECK(a.utility >= -2.0);
    CHECK(a.utility <= 2.0);
    CHECK(a.balance >= 0.5);
    CHECK(a.balance <= 1.0);
    CHECK(a.roundOne.games.size() == 2);
}

TEST_CASE("evaluation rejects invalid work orders") {
    EvalConfig cfg = scripted_config(noop_factory());
    cfg.gamesPerRound = 0;
    CHECK_THROWS_AS(run_round_one(sample_unit(), cfg), ConfigError);
    CHECK_THROWS_AS(run_round_two(sample_unit(), cfg), ConfigError);

    GeneratedUnit bad = sample_unit();
    bad.hp = 0;
    cfg.gamesPerRound = 1;
    CHECK_THROWS_AS(evaluate_unit(bad, cfg), CodecError);
}
