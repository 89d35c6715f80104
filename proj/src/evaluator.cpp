#include "rtsgen/evaluator.hpp"

#include <cmath>

#include "rtsgen/parallel.hpp"

namespace rtsgen {

double fitness_round_one(const RoundOneMetrics& m, bool* lowConfidence) {
    int made = 0;
    double sum = 0.0;
    for (const GameRecord& g : m.games) {
        if (g.aliveTicks < 0 || g.gameTicks < 0 || g.aliveTicks > g.gameTicks)
            throw MetricsError("alive ticks outside [0, game ticks]");
        if (g.outcome < -1 || g.outcome > 1) throw MetricsError("outcome outside {-1,0,1}");
        if (!g.unitMade) continue;
        ++made;
        if (g.outcome == 0) continue;  // draws contribute nothing but still divide
        double share = g.gameTicks > 0
                           ? static_cast<double>(g.aliveTicks) / static_cast<double>(g.gameTicks)
                           : 0.0;
        sum += g.outcome > 0 ? 1.0 + share : -1.0 - share;
    }
    if (made == 0) {
        if (lowConfidence) *lowConfidence = true;
        return 0.0;
    }
    if (lowConfidence) *lowConfidence = false;
    return sum / made;
}

double fitness_round_two(const RoundTwoMetrics& m, bool* lowConfidence) {
    if (m.p1Wins < 0 || m.p1Made < 0 || m.p2Made < 0) throw MetricsError("negative counter");
    int madeTotal = m.p1Made + m.p2Made;
    if (m.p1Wins > madeTotal) throw MetricsError("wins exceed games with the unit");
    if (madeTotal == 0) {
        if (lowConfidence) *lowConfidence = true;
        return 0.5;
    }
    if (lowConfidence) *lowConfidence = false;
    // |1/2 - w/n| == |n - 2w| / (2n); the integer numerator keeps
    // f(w) == f(n - w) exact
    double dev = static_cast<double>(std::abs(madeTotal - 2 * m.p1Wins)) /
                 (2.0 * static_cast<double>(madeTotal));
    return 1.0 - dev;
}

AgentFactory mcts_agent_factory() {
    return [](int, const AgentConfig& cfg, const ProductionRights& rights) {
        return std::make_unique<MctsAgent>(cfg, rights);
    };
}

EvalConfig EvalConfig::defaults() {
    EvalConfig c;
    c.game = default_config();
    c.agents = skill_preset(SkillLevel::Medium);
    return c;
}

RoundOneMetrics run_round_one(const GeneratedUnit& unit, const EvalConfig& cfg) {
    if (cfg.gamesPerRound < 1) throw ConfigError("gamesPerRound must be >= 1");
    GameConfig game = with_generated_unit(cfg.game, unit, cfg.typeDefaults);
    int genType = game.generatedType;

    RoundOneMetrics metrics;
    metrics.games.resize(static_cast<size_t>(cfg.gamesPerRound));
    const AgentFactory factory = cfg.agentFactory ? cfg.agentFactory : mcts_agent_factory();
    parallel_for(cfg.gamesPerRound, cfg.jobs, [&](int i) {
        // the holder's corner alternates to cancel map-side bias
        int holder = i % 2;
        ProductionRights engineRights;
        engineRights.forbid(1 - holder, genType);

        auto a0 = factory(0, cfg.agents, engineRights);
        auto a1 = factory(1, cfg.agents, engineRights);
        RunOptions opts;
        opts.collectLog = false;
        GameResult r = run_game(game, *a0, *a1,
                                mix64(cfg.seedBase, 0x31, static_cast<uint64_t>(i)), opts);

        GameRecord rec;
        rec.gameTicks = r.endTick;
        rec.aliveTicks = r.stats_for(genType).aliveUnionTicks;
        rec.unitMade = r.produced_by(genType, holder) > 0;
        if (r.outcome.draw())
            rec.outcome = 0;
        else
            rec.outcome = r.outcome.winner == holder ? 1 : -1;
        metrics.games[static_cast<size_t>(i)] = rec;
    });
    return metrics;
}

RoundTwoMetrics run_round_two(const GeneratedUnit& unit, const EvalConfig& cfg) {
    if (cfg.gamesPerRound < 1) throw ConfigError("gamesPerRound must be >= 1");
    GameConfig game = with_generated_unit(cfg.game, unit, cfg.typeDefaults);
    int genType = game.generatedType;

    // fixed corners: the first player's win share is exactly the location
    // signal this round exists to measure
    struct PerGame {
        int winner = -1;
        bool made0 = false, made1 = false;
    };
    std::vector<PerGame> results(static_cast<size_t>(cfg.gamesPerRound));
    const AgentFactory factory = cfg.agentFactory ? cfg.agentFactory : mcts_agent_factory();
    parallel_for(cfg.gamesPerRound, cfg.jobs, [&](int i) {
        auto a0 = factory(0, cfg.agents, ProductionRights::all());
        auto a1 = factory(1, cfg.agents, ProductionRights::all());
        RunOptions opts;
        opts.collectLog = false;
        GameResult r = run_game(game, *a0, *a1,
                                mix64(cfg.seedBase, 0x32, static_cast<uint64_t>(i)), opts);
        results[static_cast<size_t>(i)] = {r.outcome.winner, r.produced_by(genType, 0) > 0,
                                           r.produced_by(genType, 1) > 0};
    });

    RoundTwoMetrics m;
    for (const PerGame& r : results) {
        if (r.made0) m.p1Made++;
        if (r.made1) m.p2Made++;
        // wins count only in games where someone made the unit; draws stay out
        if ((r.made0 || r.made1) && r.winner == 0) m.p1Wins++;
    }
    return m;
}

FitnessReport evaluate_unit(const GeneratedUnit& unit, const EvalConfig& cfg) {
    validate_unit(unit);
    FitnessReport report;
    report.roundOne = run_round_one(unit, cfg);
    report.roundTwo = run_round_two(unit, cfg);
    report.utility = fitness_round_one(report.roundOne, &report.lowConfidenceUtility);
    report.balance = fitness_round_two(report.roundTwo, &report.lowConfidenceBalance);
    report.total = report.utility + report.balance;
    return report;
}

}  // namespace rtsgen
