// Command-line front end: generate units, evaluate fitness, run match-ups
// and full studies, replay single games, lint unit files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "rtsgen/config_io.hpp"
#include "rtsgen/evaluator.hpp"
#include "rtsgen/parallel.hpp"
#include "rtsgen/search.hpp"
#include "rtsgen/study.hpp"

namespace {

using namespace rtsgen;

std::unique_ptr<Agent> make_agent(const std::string& kind, const StudyConfig& cfg,
                                  const ProductionRights& rights) {
    if (kind == "noop") return std::make_unique<NoopAgent>();
    if (kind == "rush") return std::make_unique<RushAgent>();
    if (kind == "random") return std::make_unique<RandomAgent>();
    return std::make_unique<MctsAgent>(cfg.preset(skill_from_name(kind)), rights);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<GeneratedUnit> load_units_dir(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<GeneratedUnit> units;
    for (const auto& f : files) units.push_back(load_unit_file(f.string()));
    if (units.empty()) throw ConfigError("no .json unit files under " + dir);
    return units;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"search-based generator and balance lab for mini-RTS units"};
    app.require_subcommand(1);

    std::string configPath;
    app.add_option("--config", configPath, "study config JSON (engine/agent/threshold overrides)")
        ->check(CLI::ExistingFile);

    int jobs = default_jobs();
    app.add_option("--jobs", jobs, "max parallel games");

    // generate
    auto* gen = app.add_subcommand("generate", "hill-climb a new unit from a random start");
    uint64_t genSeed = 0;
    int genGames = 10;
    int genCap = 100;
    std::string genOut = "generated_unit.json";
    std::string genTrace;
    std::string genSkill = "medium";
    gen->add_option("--seed", genSeed, "search seed");
    gen->add_option("--games-per-round", genGames, "games per evaluation round")
        ->check(CLI::PositiveNumber);
    gen->add_option("--max-iterations", genCap, "climb iteration cap (0 = unbounded)");
    gen->add_option("--out", genOut, "output unit file");
    gen->add_option("--trace", genTrace, "also write the full search trace JSON");
    gen->add_option("--agents", genSkill, "agent preset used during generation")
        ->check(CLI::IsMember({"strong", "medium", "weak"}));

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "two-round fitness of a unit file");
    std::string evalUnit;
    uint64_t evalSeed = 0;
    int evalGames = 10;
    std::string evalOut;
    std::string evalSkill = "medium";
    eval->add_option("--unit", evalUnit, "unit JSON file")->required()->check(CLI::ExistingFile);
    eval->add_option("--seed", evalSeed, "evaluation seed");
    eval->add_option("--games-per-round", evalGames, "games per round")->check(CLI::PositiveNumber);
    eval->add_option("--out", evalOut, "write the fitness report here instead of stdout");
    eval->add_option("--agents", evalSkill, "agent preset")
        ->check(CLI::IsMember({"strong", "medium", "weak"}));

    // matchup
    auto* match = app.add_subcommand("matchup", "one skill pairing over one unit");
    std::string matchUnit, matchP1 = "medium", matchP2 = "medium", matchMode = "exclusive";
    int matchGames = 100;
    uint64_t matchSeed = 0;
    match->add_option("--unit", matchUnit, "unit JSON file")->required()->check(CLI::ExistingFile);
    match->add_option("--p1", matchP1)->check(CLI::IsMember({"strong", "medium", "weak"}));
    match->add_option("--p2", matchP2)->check(CLI::IsMember({"strong", "medium", "weak"}));
    match->add_option("--mode", matchMode)->check(CLI::IsMember({"exclusive", "shared"}));
    match->add_option("--games", matchGames)->check(CLI::PositiveNumber);
    match->add_option("--seed", matchSeed);

    // study
    auto* study = app.add_subcommand("study", "all skill pairings x both modes over a unit set");
    std::string unitsDir, outDir = "study_out";
    int studyGames = 100;
    double redoThreshold = 25.0;
    uint64_t studySeed = 0;
    study->add_option("--units-dir", unitsDir, "directory of unit JSON files")
        ->required()
        ->check(CLI::ExistingDirectory);
    study->add_option("--out-dir", outDir, "report output directory");
    study->add_option("--games", studyGames, "games per unit per matchup-round")
        ->check(CLI::PositiveNumber);
    study->add_option("--redo-threshold", redoThreshold,
                      "redo a matchup-round when mean made-games falls below this");
    study->add_option("--seed", studySeed);
    bool studySaveLogs = false;
    study->add_flag("--save-logs", studySaveLogs,
                    "also write one replayed event log per matchup-round");

    // simulate
    auto* sim = app.add_subcommand("simulate", "play one game and dump its event log");
    std::string simUnit, simP1 = "medium", simP2 = "medium", simLog = "-";
    uint64_t simSeed = 0;
    int simMaxTicks = 0;
    int simBudgetMs = 0;
    sim->add_option("--unit", simUnit, "optional unit JSON to add to the game")
        ->check(CLI::ExistingFile);
    sim->add_option("--p1", simP1, "strong|medium|weak|noop|rush|random");
    sim->add_option("--p2", simP2, "strong|medium|weak|noop|rush|random");
    sim->add_option("--seed", simSeed);
    sim->add_option("--log", simLog, "event log path, '-' for stdout");
    sim->add_option("--max-ticks", simMaxTicks, "override the game length cap");
    sim->add_option("--decision-budget-ms", simBudgetMs,
                    "replace any slower decision with all-idle (breaks determinism)");

    // validate
    auto* val = app.add_subcommand("validate", "lint a unit file");
    std::string valUnit;
    val->add_option("unit", valUnit, "unit JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        StudyConfig cfg = StudyConfig::defaults();
        cfg.jobs = jobs;
        if (!configPath.empty()) {
            StudyConfig loaded = load_study_config(configPath);
            loaded.jobs = jobs;
            cfg = loaded;
        }

        if (*gen) {
            EvalConfig ec;
            ec.game = cfg.game;
            ec.agents = cfg.preset(skill_from_name(genSkill));
            ec.typeDefaults = cfg.typeDefaults;
            ec.gamesPerRound = genGames;
            ec.seedBase = mix64(genSeed, 0xe5a1);
            ec.jobs = jobs;
            auto [unit, trace] = hill_climb(SearchBounds{}, ec, genSeed, genCap);
            save_unit_file(unit, genOut);
            if (!genTrace.empty()) write_text(genTrace, search_trace_to_json(trace));
            std::cout << "unit " << genome_key(unit) << " fitness "
                      << (unit.fitness ? *unit.fitness : 0.0) << " after "
                      << trace.iterations.size() << " iterations ("
                      << trace.totalGamesSimulated << " games) -> " << genOut << "\n";
            if (trace.error) {
                std::cerr << "search aborted: " << *trace.error << "\n";
                return 1;
            }
        } else if (*eval) {
            EvalConfig ec;
            ec.game = cfg.game;
            ec.agents = cfg.preset(skill_from_name(evalSkill));
            ec.typeDefaults = cfg.typeDefaults;
            ec.gamesPerRound = evalGames;
            ec.seedBase = evalSeed;
            ec.jobs = jobs;
            FitnessReport report = evaluate_unit(load_unit_file(evalUnit), ec);
            std::string text = fitness_report_to_json(report);
            if (evalOut.empty())
                std::cout << text;
            else
                write_text(evalOut, text);
        } else if (*match) {
            MatchupSpec spec;
            spec.p1Skill = skill_from_name(matchP1);
            spec.p2Skill = skill_from_name(matchP2);
            spec.mode = access_mode_from_name(matchMode);
            spec.gamesPerUnit = matchGames;
            spec.seedBase = matchSeed;
            spec.alternateCorners = cfg.alternateCorners;
            auto cells = run_matchup({load_unit_file(matchUnit)}, spec, cfg);
            const MatchupCell& c = cells.front();
            std::cout << c.unit << ": games " << c.games << ", p1 wins " << c.p1Wins
                      << ", p2 wins " << c.p2Wins << ", draws " << c.draws << ", p1 made "
                      << c.p1Made << ", p2 made " << c.p2Made << ", avg alive "
                      << c.avgAliveTicks << " ticks\n";
        } else if (*study) {
            cfg.gamesPerUnit = studyGames;
            cfg.redoThreshold = redoThreshold;
            cfg.seedBase = studySeed;
            auto units = load_units_dir(unitsDir);
            StudyReport report = run_study(
                units, {SkillLevel::Strong, SkillLevel::Medium, SkillLevel::Weak}, cfg);
            auto [csvPath, jsonPath] = emit_report(report, outDir);
            std::cout << "wrote " << csvPath << " and " << jsonPath << "\n";
            for (const std::string& line : report.redoLog) std::cout << "redo: " << line << "\n";
            if (studySaveLogs) {
                auto logDir = std::filesystem::path(outDir) / "logs";
                std::filesystem::create_directories(logDir);
                for (size_t i = 0; i < report.rounds.size(); ++i) {
                    const MatchupRound& r = report.rounds[i];
                    std::string name = std::string(skill_name(r.p1Skill)) + "_vs_" +
                                       skill_name(r.p2Skill) + "_" + access_mode_name(r.mode) +
                                       ".jsonl";
                    EventLog log = replay_round_game(report, i, units, cfg);
                    write_text((logDir / name).string(), event_log_to_jsonl(log));
                }
                std::cout << "wrote " << report.rounds.size() << " replay logs under "
                          << logDir.string() << "\n";
            }
        } else if (*sim) {
            GameConfig game = cfg.game;
            if (simMaxTicks > 0) game.maxTicks = simMaxTicks;
            if (!simUnit.empty())
                game = with_generated_unit(game, load_unit_file(simUnit), cfg.typeDefaults);
            auto a0 = make_agent(simP1, cfg, ProductionRights::all());
            auto a1 = make_agent(simP2, cfg, ProductionRights::all());
            RunOptions opts;
            opts.collectLog = true;
            opts.decisionBudgetMs = simBudgetMs;
            GameResult r = run_game(game, *a0, *a1, simSeed, opts);
            std::string logText = event_log_to_jsonl(r.eventLog);
            if (simLog == "-")
                std::cout << logText;
            else
                write_text(simLog, logText);
            std::cerr << "outcome: "
                      << (r.outcome.draw() ? "draw"
                                           : "player " + std::to_string(r.outcome.winner) + " wins")
                      << " at tick " << r.endTick << ", log hash " << std::hex
                      << event_log_hash(r.eventLog) << std::dec << "\n";
        } else if (*val) {
            GeneratedUnit u = load_unit_file(valUnit);
            std::cout << valUnit << ": ok (" << genome_key(u) << ")\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
