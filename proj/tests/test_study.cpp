#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rtsgen/study.hpp"

using namespace rtsgen;

namespace {

GeneratedUnit cheap_unit(const char* name) {
    GeneratedUnit u;
    u.cost = 1;
    u.hp = 3;
    u.damage = 2;
    u.attackRange = 2;
    u.moveTime = 8;
    u.attackTime = 4;
    u.cause = Cause::OnThirdAttack;
    u.effect = Effect::ReturnResources;
    u.name = name;
    return u;
}

AgentFactory noop_factory() {
    return [](int, const AgentConfig&, const ProductionRights&) {
        return std::make_unique<NoopAgent>();
    };
}

// Builds the last type in the table only where the rights allow it.
class RightsAwareBuilder : public Agent {
public:
    explicit RightsAwareBuilder(int player, const ProductionRights& rights)
        : player_(player), rights_(rights) {}
    PlayerAction choose_action(const GameState& s, int player) override {
        int genType = s.typeCount() - 1;
        if (!rights_.allowed(player_, genType)) return {};
        BuilderAgent inner(genType);
        return inner.choose_action(s, player);
    }

private:
    int player_;
    ProductionRights rights_;
};

AgentFactory builder_factory() {
    return [](int enginePlayer, const AgentConfig&, const ProductionRights& rights) {
        return std::make_unique<RightsAwareBuilder>(enginePlayer, rights);
    };
}

StudyConfig quick_study(AgentFactory factory, int games, double threshold) {
    StudyConfig cfg = StudyConfig::defaults();
    cfg.game.maxTicks = 150;
    cfg.gamesPerUnit = games;
    cfg.redoThreshold = threshold;
    cfg.agentFactory = std::move(factory);
    cfg.jobs = 2;
    return cfg;
}

}  // namespace

TEST_CASE("the redo rule is strictly below the threshold") {
    CHECK(redo_required(24.9, 25.0));
    CHECK_FALSE(redo_required(25.0, 25.0));
    CHECK_FALSE(redo_required(25.1, 25.0));

    // synthetic production counts averaging 24.9: nine cells of 25, one of 24
    double sum = 0.0;
    for (int i = 0; i < 9; ++i) sum += 25;
    sum += 24;
    CHECK(redo_required(sum / 10.0, 25.0));

    // exactly 25.0 on the nose: no redo
    CHECK_FALSE(redo_required(250.0 / 10.0, 25.0));
}

TEST_CASE("exclusive mode keeps the second player's production at zero") {
    StudyConfig cfg = quick_study(builder_factory(), 4, 0.5);
    MatchupSpec spec;
    spec.mode = AccessMode::Exclusive;
    spec.gamesPerUnit = 4;
    auto cells = run_matchup({cheap_unit("a")}, spec, cfg);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].p1Made == 4);
    CHECK(cells[0].p2Made == 0);
    CHECK(cells[0].games == 4);
    CHECK(cells[0].p1Wins + cells[0].p2Wins + cells[0].draws == 4);
}

TEST_CASE("shared mode lets both sides build") {
    StudyConfig cfg = quick_study(builder_factory(), 4, 0.5);
    cfg.game.maxTicks = 200;
    MatchupSpec spec;
    spec.mode = AccessMode::Shared;
    spec.gamesPerUnit = 4;
    auto cells = run_matchup({cheap_unit("a")}, spec, cfg);
    CHECK(cells[0].p1Made == 4);
    CHECK(cells[0].p2Made == 4);
    CHECK(cells[0].avgAliveTicks > 0.0);
}

TEST_CASE("three skills make eighteen matchup-rounds with exact cardinality") {
    StudyConfig cfg = quick_study(builder_factory(), 2, 1.0);
    cfg.game.maxTicks = 120;
    std::vector<GeneratedUnit> units = {cheap_unit("a"), cheap_unit("b")};
    StudyReport report =
        run_study(units, {SkillLevel::Strong, SkillLevel::Medium, SkillLevel::Weak}, cfg);
    CHECK(report.rounds.size() == 18);
    for (const MatchupRound& r : report.rounds) {
        CHECK(r.cells.size() == 2);
        CHECK_FALSE(r.redone);  // builders always produce, threshold 1 is met
        for (const MatchupCell& c : r.cells)
            CHECK(c.p1Wins + c.p2Wins + c.draws == c.games);
    }
}

TEST_CASE("a production drought triggers one redo and then a flag") {
    StudyConfig cfg = quick_study(noop_factory(), 2, 1.0);
    cfg.game.maxTicks = 60;
    StudyReport report = run_study({cheap_unit("a")}, {SkillLevel::Weak}, cfg);
    REQUIRE(report.rounds.size() == 2);
    for (const MatchupRound& r : report.rounds) {
        CHECK(r.redone);
        CHECK(r.lowProduction);
        CHECK(r.avgMadeGames == 0.0);
    }
    CHECK(report.redoLog.size() == 4);  // redo + flag per matchup-round
}

TEST_CASE("production exactly at the threshold does not redo") {
    StudyConfig cfg = quick_study(builder_factory(), 2, 2.0);
    cfg.game.maxTicks = 120;
    StudyReport report = run_study({cheap_unit("a")}, {SkillLevel::Weak}, cfg);
    for (const MatchupRound& r : report.rounds) {
        CHECK(r.avgMadeGames == 2.0);
        CHECK_FALSE(r.redone);
    }
    CHECK(report.redoLog.empty());
}

TEST_CASE("the emitted report has exact shapes and round-trips") {
    StudyConfig cfg = quick_study(builder_factory(), 2, 1.0);
    cfg.game.maxTicks = 100;
    std::vector<GeneratedUnit> units;
    for (int i = 0; i < 3; ++i) units.push_back(cheap_unit(("u" + std::to_string(i)).c_str()));
    StudyReport report =
        run_study(units, {SkillLevel::Strong, SkillLevel::Medium, SkillLevel::Weak}, cfg);

    std::string dir = (std::filesystem::temp_directory_path() / "rtsgen_report_test").string();
    auto [csvPath, jsonPath] = emit_report(report, dir);

    std::ifstream csv(csvPath);
    REQUIRE(csv.good());
    int lines = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 1 + 3 * 9 * 2);  // header plus units x ordered pairs x modes

    std::ifstream js(jsonPath);
    std::stringstream buf;
    buf << js.rdbuf();
    MatrixSummary m = parse_study_matrix(buf.str());
    CHECK(m.skills == std::vector<std::string>{"strong", "medium", "weak"});
    CHECK(m.mean.at("exclusive").size() == 3);
    CHECK(m.mean.at("shared")[0].size() == 3);
    CHECK(m.stddev.at("exclusive").size() == 3);

    // matrix values mirror the report
    for (const MatchupRound& r : report.rounds) {
        size_t row = static_cast<size_t>(r.p1Skill);
        size_t col = static_cast<size_t>(r.p2Skill);
        double got = m.mean.at(access_mode_name(r.mode))[row][col];
        CHECK(got == doctest::Approx(r.meanP1WinRate).epsilon(1e-9));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("an empty report is refused") {
    StudyReport empty;
    CHECK_THROWS_AS(emit_report(empty, "/tmp/should_not_exist_rtsgen"), ConfigError);
    StudyConfig cfg = quick_study(noop_factory(), 2, 1.0);
    CHECK_THROWS_AS(run_matchup({}, MatchupSpec{}, cfg), ConfigError);
    CHECK_THROWS_AS(run_study({}, {SkillLevel::Weak}, cfg), ConfigError);
}

TEST_CASE("matchups are deterministic per seed base") {
    StudyConfig cfg = quick_study(nullptr, 2, 1.0);  // real searchers, tiny budgets
    for (auto& p : cfg.presets) {
        p.maxIterations = 10;
        p.maxDepth = 2;
        p.playoutHorizon = 30;
    }
    cfg.game.maxTicks = 150;
    MatchupSpec spec;
    spec.gamesPerUnit = 2;
    spec.seedBase = 4242;
    auto a = run_matchup({cheap_unit("x")}, spec, cfg);
    auto b = run_matchup({cheap_unit("x")}, spec, cfg);
    CHECK(a[0].p1Wins == b[0].p1Wins);
    CHECK(a[0].p2Wins == b[0].p2Wins);
    CHECK(a[0].draws == b[0].draws);
    CHECK(a[0].p1Made == b[0].p1Made);
    CHECK(a[0].p2Made == b[0].p2Made);
    CHECK(a[0].avgAliveTicks == b[0].avgAliveTicks);
}
