#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtsgen/genome.hpp"

namespace rtsgen {

namespace {

using ordered_json = nlohmann::ordered_json;

int require_stat(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw CodecError(std::string(key) + ": missing");
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw CodecError(std::string(key) + ": expected an integer");
    int n = v.get<int>();
    if (n < 1) throw CodecError(std::string(key) + ": must be at least 1");
    return n;
}

int require_enum(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw CodecError(std::string(key) + ": missing");
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw CodecError(std::string(key) + ": expected an integer");
    int n = v.get<int>();
    if (n < 1 || n > 4) throw CodecError(std::string(key) + ": must be in 1..4");
    return n;
}

}  // namespace

std::string unit_to_json(const GeneratedUnit& u) {
    validate_unit(u);
    ordered_json j;
    j["cost"] = u.cost;
    j["hp"] = u.hp;
    j["damage"] = u.damage;
    j["range"] = u.attackRange;
    j["moveTime"] = u.moveTime;
    j["attackTime"] = u.attackTime;
    j["cause"] = static_cast<int>(u.cause);
    j["effect"] = static_cast<int>(u.effect);
    if (!u.name.empty()) j["name"] = u.name;
    if (u.fitness) j["fitness"] = *u.fitness;
    return j.dump(2) + "\n";
}

GeneratedUnit unit_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw CodecError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CodecError("expected a JSON object");

    GeneratedUnit u;
    u.cost = require_stat(j, "cost");
    u.hp = require_stat(j, "hp");
    u.damage = require_stat(j, "damage");
    u.attackRange = require_stat(j, "range");
    u.moveTime = require_stat(j, "moveTime");
    u.attackTime = require_stat(j, "attackTime");
    u.cause = static_cast<Cause>(require_enum(j, "cause"));
    u.effect = static_cast<Effect>(require_enum(j, "effect"));
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw CodecError("name: expected a string");
        u.name = j.at("name").get<std::string>();
    }
    if (j.contains("fitness")) {
        if (!j.at("fitness").is_number()) throw CodecError("fitness: expected a number");
        u.fitness = j.at("fitness").get<double>();
    }
    return u;
}

GeneratedUnit load_unit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CodecError("cannot open unit file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return unit_from_json(buf.str());
    } catch (const CodecError& e) {
        throw CodecError(path + ": " + e.what());
    }
}

void save_unit_file(const GeneratedUnit& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CodecError("cannot write unit file: " + path);
    out << unit_to_json(u);
}

}  // namespace rtsgen
