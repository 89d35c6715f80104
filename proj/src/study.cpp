#include "rtsgen/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rtsgen/parallel.hpp"
#include "rtsgen/search.hpp"

namespace rtsgen {

const char* access_mode_name(AccessMode m) {
    return m == AccessMode::Exclusive ? "exclusive" : "shared";
}

AccessMode access_mode_from_name(const std::string& name) {
    if (name == "exclusive") return AccessMode::Exclusive;
    if (name == "shared") return AccessMode::Shared;
    throw ConfigError("unknown access mode: " + name);
}

StudyConfig StudyConfig::defaults() {
    StudyConfig c;
    c.game = default_config();
    return c;
}

bool redo_required(double averageMadeGames, double threshold) {
    return averageMadeGames < threshold;
}

namespace {

struct IdentityResult {
    int winner = -1;            // identity index, -1 draw
    bool made[2] = {false, false};
    int32_t aliveTicks = 0;
};

// Identity P1 keeps its skill and build rights; with alternation it plays
// the second corner in odd games.
IdentityResult play_identity_game(const GameConfig& game, const StudyConfig& cfg,
                                  const MatchupSpec& spec, int gameIdx, uint64_t seed,
                                  EventLog* log = nullptr) {
    const bool swapped = spec.alternateCorners && (gameIdx % 2 == 1);
    const int genType = game.generatedType;

    ProductionRights rights;  // per engine player
    if (spec.mode == AccessMode::Exclusive) {
        int p2Engine = swapped ? 0 : 1;
        rights.forbid(p2Engine, genType);
    }

    const AgentConfig& cfg0 = cfg.preset(swapped ? spec.p2Skill : spec.p1Skill);
    const AgentConfig& cfg1 = cfg.preset(swapped ? spec.p1Skill : spec.p2Skill);
    const AgentFactory factory = cfg.agentFactory ? cfg.agentFactory : mcts_agent_factory();
    auto a0 = factory(0, cfg0, rights);
    auto a1 = factory(1, cfg1, rights);

    RunOptions opts;
    opts.collectLog = log != nullptr;
    GameResult r = run_game(game, *a0, *a1, seed, opts);
    if (log) *log = std::move(r.eventLog);

    IdentityResult out;
    out.aliveTicks = r.stats_for(genType).aliveUnionTicks;
    if (!r.outcome.draw()) out.winner = swapped ? 1 - r.outcome.winner : r.outcome.winner;
    for (int identity = 0; identity < 2; ++identity) {
        int enginePlayer = swapped ? 1 - identity : identity;
        out.made[identity] = r.produced_by(genType, enginePlayer) > 0;
    }
    return out;
}

}  // namespace

EventLog replay_round_game(const StudyReport& report, size_t roundIdx,
                           const std::vector<GeneratedUnit>& units, const StudyConfig& cfg,
                           int unitIdx, int gameIdx) {
    const MatchupRound& round = report.rounds.at(roundIdx);
    MatchupSpec spec;
    spec.p1Skill = round.p1Skill;
    spec.p2Skill = round.p2Skill;
    spec.mode = round.mode;
    spec.gamesPerUnit = cfg.gamesPerUnit;
    spec.alternateCorners = cfg.alternateCorners;
    GameConfig game =
        with_generated_unit(cfg.game, units.at(static_cast<size_t>(unitIdx)), cfg.typeDefaults);
    EventLog log;
    play_identity_game(game, cfg, spec, gameIdx,
                       mix64(round.seedBase, static_cast<uint64_t>(unitIdx),
                             static_cast<uint64_t>(gameIdx)),
                       &log);
    return log;
}

std::vector<MatchupCell> run_matchup(const std::vector<GeneratedUnit>& units,
                                     const MatchupSpec& spec, const StudyConfig& cfg) {
    if (units.empty()) throw ConfigError("no units to evaluate");
    if (spec.gamesPerUnit < 1) throw ConfigError("gamesPerUnit must be >= 1");

    std::vector<MatchupCell> cells(units.size());
    const int gamesTotal = static_cast<int>(units.size()) * spec.gamesPerUnit;

    std::vector<IdentityResult> results(static_cast<size_t>(gamesTotal));
    parallel_for(gamesTotal, cfg.jobs, [&](int k) {
        const int unitIdx = k / spec.gamesPerUnit;
        const int gameIdx = k % spec.gamesPerUnit;
        GameConfig game =
            with_generated_unit(cfg.game, units[static_cast<size_t>(unitIdx)], cfg.typeDefaults);
        results[static_cast<size_t>(k)] =
            play_identity_game(game, cfg, spec, gameIdx,
                               mix64(spec.seedBase, static_cast<uint64_t>(unitIdx),
                                     static_cast<uint64_t>(gameIdx)));
    });

    for (size_t u = 0; u < units.size(); ++u) {
        MatchupCell& cell = cells[u];
        cell.unit = units[u].name.empty() ? genome_key(units[u]) : units[u].name;
        cell.games = spec.gamesPerUnit;
        long aliveSum = 0;
        for (int g = 0; g < spec.gamesPerUnit; ++g) {
            const IdentityResult& r = results[u * static_cast<size_t>(spec.gamesPerUnit) +
                                              static_cast<size_t>(g)];
            if (r.winner == 0)
                cell.p1Wins++;
            else if (r.winner == 1)
                cell.p2Wins++;
            else
                cell.draws++;
            if (r.made[0]) cell.p1Made++;
            if (r.made[1]) cell.p2Made++;
            if (r.made[0] || r.made[1]) {
                cell.madeAnyGames++;
                aliveSum += r.aliveTicks;
            }
        }
        cell.avgAliveTicks =
            cell.madeAnyGames > 0 ? static_cast<double>(aliveSum) / cell.madeAnyGames : 0.0;
    }
    return cells;
}

StudyReport run_study(const std::vector<GeneratedUnit>& units,
                      const std::vector<SkillLevel>& skills, const StudyConfig& cfg) {
    if (units.empty()) throw ConfigError("no units to evaluate");
    if (skills.empty()) throw ConfigError("no skill levels given");

    StudyReport report;
    for (SkillLevel s : skills) report.skills.push_back(skill_name(s));

    int roundIdx = 0;
    for (SkillLevel p1 : skills) {
        for (SkillLevel p2 : skills) {
            for (AccessMode mode : {AccessMode::Exclusive, AccessMode::Shared}) {
                MatchupRound round;
                round.p1Skill = p1;
                round.p2Skill = p2;
                round.mode = mode;

                for (int attempt = 0;; ++attempt) {
                    MatchupSpec spec;
                    spec.p1Skill = p1;
                    spec.p2Skill = p2;
                    spec.mode = mode;
                    spec.gamesPerUnit = cfg.gamesPerUnit;
                    spec.alternateCorners = cfg.alternateCorners;
                    spec.seedBase = mix64(cfg.seedBase, static_cast<uint64_t>(roundIdx),
                                          static_cast<uint64_t>(attempt));
                    round.seedBase = spec.seedBase;
                    round.cells = run_matchup(units, spec, cfg);

                    double madeSum = 0.0;
                    for (const MatchupCell& c : round.cells) madeSum += c.madeAnyGames;
                    round.avgMadeGames = madeSum / static_cast<double>(round.cells.size());

                    if (!redo_required(round.avgMadeGames, cfg.redoThreshold)) break;
                    if (attempt == 0) {
                        round.redone = true;
                        char msg[160];
                        std::snprintf(msg, sizeof(msg),
                                      "%s vs %s (%s): average made-games %.2f below %.2f, redone",
                                      skill_name(p1), skill_name(p2), access_mode_name(mode),
                                      round.avgMadeGames, cfg.redoThreshold);
                        report.redoLog.emplace_back(msg);
                    } else {
                        round.lowProduction = true;
                        char msg[160];
                        std::snprintf(msg, sizeof(msg),
                                      "%s vs %s (%s): still %.2f after redo, flagged",
                                      skill_name(p1), skill_name(p2), access_mode_name(mode),
                                      round.avgMadeGames);
                        report.redoLog.emplace_back(msg);
                        break;
                    }
                }

                double mean = 0.0;
                for (const MatchupCell& c : round.cells) mean += c.p1_win_rate();
                mean /= static_cast<double>(round.cells.size());
                double var = 0.0;
                for (const MatchupCell& c : round.cells) {
                    double d = c.p1_win_rate() - mean;
                    var += d * d;
                }
                var /= static_cast<double>(round.cells.size());  // population form
                round.meanP1WinRate = mean;
                round.stdP1WinRate = std::sqrt(var);

                report.rounds.push_back(std::move(round));
                ++roundIdx;
            }
        }
    }
    return report;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string study_cells_csv(const StudyReport& report) {
    std::string out =
        "p1_skill,p2_skill,mode,unit,games,p1_wins,p2_wins,draws,p1_win_rate,draw_rate,"
        "p1_made,p2_made,avg_alive_ticks\n";
    char line[256];
    for (const MatchupRound& r : report.rounds) {
        for (const MatchupCell& c : r.cells) {
            std::snprintf(line, sizeof(line), "%s,%s,%s,%s,%d,%d,%d,%d,%.6f,%.6f,%d,%d,%.2f\n",
                          skill_name(r.p1Skill), skill_name(r.p2Skill), access_mode_name(r.mode),
                          csv_field(c.unit).c_str(), c.games, c.p1Wins, c.p2Wins, c.draws,
                          c.p1_win_rate(), c.draw_rate(), c.p1Made, c.p2Made, c.avgAliveTicks);
            out += line;
        }
    }
    return out;
}

std::string study_matrix_json(const StudyReport& report) {
    using ordered_json = nlohmann::ordered_json;
    const size_t n = report.skills.size();
    auto index_of = [&](const char* name) -> size_t {
        for (size_t i = 0; i < n; ++i)
            if (report.skills[i] == name) return i;
        return 0;
    };

    ordered_json j;
    j["skills"] = report.skills;
    j["axes"] = {{"rows", "p1 skill"}, {"cols", "p2 skill"}};
    for (AccessMode mode : {AccessMode::Exclusive, AccessMode::Shared}) {
        std::vector<std::vector<double>> mean(n, std::vector<double>(n, 0.0));
        std::vector<std::vector<double>> stddev(n, std::vector<double>(n, 0.0));
        for (const MatchupRound& r : report.rounds) {
            if (r.mode != mode) continue;
            size_t row = index_of(skill_name(r.p1Skill));
            size_t col = index_of(skill_name(r.p2Skill));
            mean[row][col] = r.meanP1WinRate;
            stddev[row][col] = r.stdP1WinRate;
        }
        ordered_json m;
        m["mean"] = mean;
        m["std"] = stddev;
        j[access_mode_name(mode)] = m;
    }
    return j.dump(2) + "\n";
}

MatrixSummary parse_study_matrix(const std::string& json) {
    auto j = nlohmann::json::parse(json);
    MatrixSummary out;
    out.skills = j.at("skills").get<std::vector<std::string>>();
    for (const char* mode : {"exclusive", "shared"}) {
        if (!j.contains(mode)) continue;
        out.mean[mode] = j.at(mode).at("mean").get<std::vector<std::vector<double>>>();
        out.stddev[mode] = j.at(mode).at("std").get<std::vector<std::vector<double>>>();
    }
    return out;
}

std::pair<std::string, std::string> emit_report(const StudyReport& report,
                                                const std::string& outDir) {
    bool anyCell = false;
    for (const MatchupRound& r : report.rounds) anyCell |= !r.cells.empty();
    if (!anyCell) throw ConfigError("refusing to emit an empty report");

    std::filesystem::create_directories(outDir);
    std::string csvPath = (std::filesystem::path(outDir) / "study_cells.csv").string();
    std::string jsonPath = (std::filesystem::path(outDir) / "study_matrix.json").string();

    std::ofstream csv(csvPath);
    if (!csv) throw std::runtime_error("cannot write " + csvPath);
    csv << study_cells_csv(report);

    std::ofstream js(jsonPath);
    if (!js) throw std::runtime_error("cannot write " + jsonPath);
    js << study_matrix_json(report);

    return {csvPath, jsonPath};
}

}  // namespace rtsgen
