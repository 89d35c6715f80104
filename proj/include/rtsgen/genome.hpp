#pragma once

// The generated-unit genome: six searched stats plus one (cause, effect)
// ability, its initialization ranges, neighbor generation for the local
// search, and the bridge into an engine unit type.

#include <optional>
#include <string>
#include <vector>

#include "rtsgen/engine.hpp"

namespace rtsgen {

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratedUnit {
    int cost = 1;
    int hp = 1;
    int damage = 1;
    int attackRange = 1;
    int moveTime = 1;
    int attackTime = 1;
    Cause cause = Cause::OnDeath;
    Effect effect = Effect::ReturnResources;
    std::string name;                // optional label
    std::optional<double> fitness;   // filled in after evaluation

    // Identity of the searched genes; name and fitness are annotations.
    bool same_genome(const GeneratedUnit& o) const {
        return cost == o.cost && hp == o.hp && damage == o.damage &&
               attackRange == o.attackRange && moveTime == o.moveTime &&
               attackTime == o.attackTime && cause == o.cause && effect == o.effect;
    }
};

struct StatRange {
    int lo = 1;
    int hi = 1;
};

// Initialization ranges only; neighbor generation may drift above them but
// never below 1.
struct SearchBounds {
    StatRange cost{1, 3};
    StatRange hp{1, 4};
    StatRange damage{1, 4};
    StatRange attackRange{1, 3};
    StatRange moveTime{5, 14};
    StatRange attackTime{3, 7};
};

void validate_bounds(const SearchBounds& b);  // throws ConfigError
void validate_unit(const GeneratedUnit& u);   // throws CodecError naming the field

GeneratedUnit random_unit(const SearchBounds& bounds, uint64_t seed);

// All single-gene edits: each stat +1 and, above the floor of 1, -1; plus the
// three other causes and three other effects. Canonical order, no duplicates,
// input excluded.
std::vector<GeneratedUnit> neighbors(const GeneratedUnit& u);

struct GeneratedTypeDefaults {
    int produceTimeBase = 60;
    int produceTimePerCost = 20;
};

UnitType to_type_def(const GeneratedUnit& u, const GeneratedTypeDefaults& d = {});

// Appends the generated type to a base config and lets every barracks-style
// producer build it. `config.generatedType` points at the new entry.
GameConfig with_generated_unit(const GameConfig& base, const GeneratedUnit& u,
                               const GeneratedTypeDefaults& d = {});

// JSON codec. Serialization is canonical: fixed key order, two-space indent,
// trailing newline; serialize(parse(serialize(u))) is byte-identical.
std::string unit_to_json(const GeneratedUnit& u);
GeneratedUnit unit_from_json(const std::string& text);
GeneratedUnit load_unit_file(const std::string& path);
void save_unit_file(const GeneratedUnit& u, const std::string& path);

}  // namespace rtsgen
