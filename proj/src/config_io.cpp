#include "rtsgen/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rtsgen {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

UnitType unit_type_from_json(const json& j) {
    UnitType t;
    t.name = j.at("name").get<std::string>();
    maybe(j, "cost", t.cost);
    maybe(j, "hp", t.maxHp);
    maybe(j, "damage", t.damage);
    maybe(j, "range", t.attackRange);
    maybe(j, "moveTime", t.moveTime);
    maybe(j, "attackTime", t.attackTime);
    maybe(j, "produceTime", t.produceTime);
    maybe(j, "structure", t.isStructure);
    maybe(j, "harvests", t.canHarvest);
    maybe(j, "acceptsReturns", t.acceptsReturns);
    if (j.contains("ability")) {
        const auto& a = j.at("ability");
        int c = a.at("cause").get<int>();
        int e = a.at("effect").get<int>();
        if (c < 1 || c > 4 || e < 1 || e > 4)
            throw ConfigError("ability cause/effect must be in 1..4");
        t.ability = Ability{static_cast<Cause>(c), static_cast<Effect>(e)};
    }
    return t;
}

void agent_overrides_from_json(const json& j, AgentConfig& cfg) {
    maybe(j, "maxDepth", cfg.maxDepth);
    maybe(j, "maxIterations", cfg.maxIterations);
    maybe(j, "explorationConstant", cfg.explorationConstant);
    maybe(j, "playoutHorizon", cfg.playoutHorizon);
    maybe(j, "decisionPeriod", cfg.decisionPeriod);
    if (cfg.maxDepth < 1 || cfg.maxIterations < 1 || cfg.explorationConstant <= 0.0 ||
        cfg.playoutHorizon < 1 || cfg.decisionPeriod < 1)
        throw ConfigError("agent settings must be positive");
}

}  // namespace

GameConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    GameConfig cfg = default_config();
    maybe(j, "width", cfg.width);
    maybe(j, "height", cfg.height);
    maybe(j, "maxTicks", cfg.maxTicks);
    maybe(j, "startingResources", cfg.startingResources);
    maybe(j, "harvestTime", cfg.harvestTime);
    maybe(j, "returnTime", cfg.returnTime);
    maybe(j, "carryCapacity", cfg.carryCapacity);

    if (j.contains("unitTypes")) {
        cfg.unitTypes.clear();
        std::vector<json> raw = j.at("unitTypes").get<std::vector<json>>();
        for (const json& tj : raw) cfg.unitTypes.push_back(unit_type_from_json(tj));
        // second pass: resolve produce lists by name
        for (size_t i = 0; i < raw.size(); ++i) {
            if (!raw[i].contains("produces")) continue;
            for (const auto& name : raw[i].at("produces").get<std::vector<std::string>>()) {
                int id = cfg.typeId(name);
                if (id < 0) throw ConfigError("produces references unknown type: " + name);
                cfg.unitTypes[i].produces.push_back(id);
            }
        }
        cfg.placements.clear();  // a new table invalidates default placements
        cfg.resourceNodes.clear();
    }
    if (j.contains("placements")) {
        cfg.placements.clear();
        for (const json& pj : j.at("placements")) {
            GameConfig::Placement p;
            std::string typeName = pj.at("type").get<std::string>();
            p.type = cfg.typeId(typeName);
            if (p.type < 0) throw ConfigError("placement references unknown type: " + typeName);
            p.owner = pj.at("owner").get<int>();
            p.x = pj.at("x").get<int>();
            p.y = pj.at("y").get<int>();
            maybe(pj, "hp", p.hp);
            cfg.placements.push_back(p);
        }
    }
    if (j.contains("resourceNodes")) {
        cfg.resourceNodes.clear();
        for (const json& nj : j.at("resourceNodes")) {
            cfg.resourceNodes.push_back(
                {nj.at("x").get<int>(), nj.at("y").get<int>(), nj.at("amount").get<int>()});
        }
    }
    return cfg;
}

std::string config_to_json(const GameConfig& cfg) {
    ordered_json j;
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["maxTicks"] = cfg.maxTicks;
    j["startingResources"] = cfg.startingResources;
    j["harvestTime"] = cfg.harvestTime;
    j["returnTime"] = cfg.returnTime;
    j["carryCapacity"] = cfg.carryCapacity;

    ordered_json types = ordered_json::array();
    for (const UnitType& t : cfg.unitTypes) {
        ordered_json tj;
        tj["name"] = t.name;
        tj["cost"] = t.cost;
        tj["hp"] = t.maxHp;
        tj["damage"] = t.damage;
        tj["range"] = t.attackRange;
        tj["moveTime"] = t.moveTime;
        tj["attackTime"] = t.attackTime;
        tj["produceTime"] = t.produceTime;
        if (t.isStructure) tj["structure"] = true;
        if (t.canHarvest) tj["harvests"] = true;
        if (t.acceptsReturns) tj["acceptsReturns"] = true;
        if (!t.produces.empty()) {
            std::vector<std::string> names;
            for (int p : t.produces) names.push_back(cfg.unitTypes[static_cast<size_t>(p)].name);
            tj["produces"] = names;
        }
        if (t.ability) {
            tj["ability"] = {{"cause", static_cast<int>(t.ability->cause)},
                             {"effect", static_cast<int>(t.ability->effect)}};
        }
        types.push_back(tj);
    }
    j["unitTypes"] = types;

    ordered_json placements = ordered_json::array();
    for (const auto& p : cfg.placements) {
        ordered_json pj;
        pj["type"] = cfg.unitTypes[static_cast<size_t>(p.type)].name;
        pj["owner"] = p.owner;
        pj["x"] = p.x;
        pj["y"] = p.y;
        if (p.hp >= 0) pj["hp"] = p.hp;
        placements.push_back(pj);
    }
    j["placements"] = placements;

    ordered_json nodes = ordered_json::array();
    for (const auto& n : cfg.resourceNodes)
        nodes.push_back({{"x", n.x}, {"y", n.y}, {"amount", n.amount}});
    j["resourceNodes"] = nodes;

    return j.dump(2) + "\n";
}

GameConfig load_config_file(const std::string& path) { return config_from_json(slurp(path)); }

void apply_study_overrides(StudyConfig& cfg, const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("study config is not valid JSON: ") + e.what());
    }
    if (j.contains("engine")) cfg.game = config_from_json(j.at("engine").dump());
    if (j.contains("agents")) {
        const json& a = j.at("agents");
        for (SkillLevel s : {SkillLevel::Strong, SkillLevel::Medium, SkillLevel::Weak}) {
            if (a.contains(skill_name(s)))
                agent_overrides_from_json(a.at(skill_name(s)),
                                          cfg.presets[static_cast<size_t>(s)]);
        }
    }
    maybe(j, "gamesPerUnit", cfg.gamesPerUnit);
    maybe(j, "redoThreshold", cfg.redoThreshold);
    maybe(j, "alternateCorners", cfg.alternateCorners);
    if (j.contains("typeDefaults")) {
        const json& t = j.at("typeDefaults");
        maybe(t, "produceTimeBase", cfg.typeDefaults.produceTimeBase);
        maybe(t, "produceTimePerCost", cfg.typeDefaults.produceTimePerCost);
    }
    if (cfg.redoThreshold <= 0.0) throw ConfigError("redoThreshold must be positive");
}

StudyConfig load_study_config(const std::string& path) {
    StudyConfig cfg = StudyConfig::defaults();
    apply_study_overrides(cfg, slurp(path));
    return cfg;
}

}  // namespace rtsgen
