#pragma once

// Balance-evaluation study: every ordered skill pairing plays two
// matchup-rounds per unit, one where only the first player may build the
// candidate and one where both may. Win rates, production counts and
// survival times land in a report fit for heatmap plotting.

#include <map>
#include <string>
#include <vector>

#include "rtsgen/evaluator.hpp"

namespace rtsgen {

enum class AccessMode { Exclusive = 0, Shared = 1 };

const char* access_mode_name(AccessMode m);
AccessMode access_mode_from_name(const std::string& name);  // throws ConfigError

struct MatchupSpec {
    SkillLevel p1Skill = SkillLevel::Medium;
    SkillLevel p2Skill = SkillLevel::Medium;
    AccessMode mode = AccessMode::Exclusive;
    int gamesPerUnit = 100;
    uint64_t seedBase = 0;
    bool alternateCorners = true;  // P1 keeps its identity but swaps map sides per game
};

struct StudyConfig {
    GameConfig game;
    GeneratedTypeDefaults typeDefaults;
    std::array<AgentConfig, 3> presets = {skill_preset(SkillLevel::Strong),
                                          skill_preset(SkillLevel::Medium),
                                          skill_preset(SkillLevel::Weak)};
    int gamesPerUnit = 100;
    double redoThreshold = 25.0;  // redo when the mean made-games count drops below this
    uint64_t seedBase = 0;
    int jobs = 1;
    bool alternateCorners = true;
    AgentFactory agentFactory;  // empty means MCTS

    const AgentConfig& preset(SkillLevel s) const {
        return presets[static_cast<size_t>(s)];
    }

    static StudyConfig defaults();
};

// One (matchup, unit) cell.
struct MatchupCell {
    std::string unit;
    int games = 0;
    int p1Wins = 0;
    int p2Wins = 0;
    int draws = 0;
    int p1Made = 0;  // games in which P1 completed at least one candidate unit
    int p2Made = 0;
    double avgAliveTicks = 0.0;  // mean survival of the candidate over games it was made

    double p1_win_rate() const { return games > 0 ? static_cast<double>(p1Wins) / games : 0.0; }
    double draw_rate() const { return games > 0 ? static_cast<double>(draws) / games : 0.0; }
    int made_any() const { return madeAnyGames; }
    int madeAnyGames = 0;  // games where at least one side made it
};

std::vector<MatchupCell> run_matchup(const std::vector<GeneratedUnit>& units,
                                     const MatchupSpec& spec, const StudyConfig& cfg);

// Strictly-below-threshold rule for redoing a matchup-round.
bool redo_required(double averageMadeGames, double threshold);

struct MatchupRound {
    SkillLevel p1Skill;
    SkillLevel p2Skill;
    AccessMode mode;
    std::vector<MatchupCell> cells;
    double meanP1WinRate = 0.0;  // across units
    double stdP1WinRate = 0.0;   // population form
    double avgMadeGames = 0.0;
    bool redone = false;
    bool lowProduction = false;  // still under threshold after the single redo
    uint64_t seedBase = 0;       // of the kept attempt; replays take it from here
};

struct StudyReport {
    std::vector<MatchupRound> rounds;
    std::vector<std::string> redoLog;
    std::vector<std::string> skills;  // axis labels, P1 order
};

StudyReport run_study(const std::vector<GeneratedUnit>& units,
                      const std::vector<SkillLevel>& skills, const StudyConfig& cfg);

// Deterministic replay of one game of a finished round, with its event log.
EventLog replay_round_game(const StudyReport& report, size_t roundIdx,
                           const std::vector<GeneratedUnit>& units, const StudyConfig& cfg,
                           int unitIdx = 0, int gameIdx = 0);

// Writes study_cells.csv (long form) and study_matrix.json (mean/std per
// mode) into outDir; returns the two paths. Throws on an empty unit list or
// unwritable destination.
std::pair<std::string, std::string> emit_report(const StudyReport& report,
                                                const std::string& outDir);

std::string study_matrix_json(const StudyReport& report);
std::string study_cells_csv(const StudyReport& report);

// Round-trip helper for the matrix file.
struct MatrixSummary {
    std::vector<std::string> skills;
    // [mode][p1][p2]
    std::map<std::string, std::vector<std::vector<double>>> mean, stddev;
};
MatrixSummary parse_study_matrix(const std::string& json);

}  // namespace rtsgen
