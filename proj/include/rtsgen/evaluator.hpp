#pragma once

// Two-round simulation fitness for a candidate unit. Round one gives the
// unit to one side only and measures utility (win/loss weighted by how long
// the unit stayed alive). Round two gives it to both sides and measures
// balance (closeness of the first player's win share to one half).

#include <functional>
#include <memory>
#include <vector>

#include "rtsgen/agents.hpp"
#include "rtsgen/genome.hpp"

namespace rtsgen {

class MetricsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GameRecord {
    bool unitMade = false;
    int outcome = 0;           // +1 win / 0 draw / -1 loss for the unit holder
    int32_t aliveTicks = 0;    // ticks with >= 1 generated-unit instance alive
    int32_t gameTicks = 0;
};

struct RoundOneMetrics {
    std::vector<GameRecord> games;

    int made_games() const {
        int n = 0;
        for (const auto& g : games) n += g.unitMade ? 1 : 0;
        return n;
    }
};

struct RoundTwoMetrics {
    int p1Wins = 0;  // first player's wins among games where the unit was made
    int p1Made = 0;  // games the first player made the unit
    int p2Made = 0;
};

struct FitnessReport {
    double utility = 0.0;   // round-one score, in [-2, 2]
    double balance = 0.5;   // round-two score, in [0.5, 1]
    double total = 0.5;
    bool lowConfidenceUtility = false;  // unit never made in round one
    bool lowConfidenceBalance = false;  // unit never made in round two
    RoundOneMetrics roundOne;
    RoundTwoMetrics roundTwo;
};

// Per made game: outcome (+1/0/-1) plus the alive share, signed like the
// outcome; normalized by the number of made games. Zero with the
// low-confidence flag when the unit was never made.
double fitness_round_one(const RoundOneMetrics& m, bool* lowConfidence = nullptr);

// 1 - |1/2 - wins/(made1 + made2)|. Computed from an integer numerator so
// the reflection symmetry around one half is exact in floating point.
double fitness_round_two(const RoundTwoMetrics& m, bool* lowConfidence = nullptr);

// Builds the agent for one engine player of one game. The default factory
// returns an MctsAgent honoring the given production rights; tests swap in
// scripted agents.
using AgentFactory = std::function<std::unique_ptr<Agent>(
    int enginePlayer, const AgentConfig& cfg, const ProductionRights& rights)>;

AgentFactory mcts_agent_factory();

struct EvalConfig {
    GameConfig game;          // base game; the candidate type is appended per run
    AgentConfig agents;       // both sides use the same search budget
    GeneratedTypeDefaults typeDefaults;
    int gamesPerRound = 10;
    uint64_t seedBase = 0;
    int jobs = 1;
    AgentFactory agentFactory;  // empty means MCTS

    static EvalConfig defaults();
};

RoundOneMetrics run_round_one(const GeneratedUnit& unit, const EvalConfig& cfg);
RoundTwoMetrics run_round_two(const GeneratedUnit& unit, const EvalConfig& cfg);
FitnessReport evaluate_unit(const GeneratedUnit& unit, const EvalConfig& cfg);

std::string fitness_report_to_json(const FitnessReport& r);

}  // namespace rtsgen
