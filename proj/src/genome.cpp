#include "rtsgen/genome.hpp"

namespace rtsgen {

namespace {

struct StatAccess {
    const char* name;
    int GeneratedUnit::*field;
    StatRange SearchBounds::*range;
};

// Canonical gene order; neighbor enumeration and the genome key both use it.
constexpr StatAccess kStats[6] = {
    {"cost", &GeneratedUnit::cost, &SearchBounds::cost},
    {"hp", &GeneratedUnit::hp, &SearchBounds::hp},
    {"damage", &GeneratedUnit::damage, &SearchBounds::damage},
    {"range", &GeneratedUnit::attackRange, &SearchBounds::attackRange},
    {"moveTime", &GeneratedUnit::moveTime, &SearchBounds::moveTime},
    {"attackTime", &GeneratedUnit::attackTime, &SearchBounds::attackTime},
};

}  // namespace

void validate_bounds(const SearchBounds& b) {
    for (const auto& st : kStats) {
        const StatRange& r = b.*(st.range);
        if (r.lo < 1) throw ConfigError(std::string(st.name) + ": lower bound below 1");
        if (r.lo > r.hi) throw ConfigError(std::string(st.name) + ": empty range");
    }
}

void validate_unit(const GeneratedUnit& u) {
    for (const auto& st : kStats) {
        if (u.*(st.field) < 1)
            throw CodecError(std::string(st.name) + ": must be at least 1");
    }
    int c = static_cast<int>(u.cause);
    int e = static_cast<int>(u.effect);
    if (c < 1 || c > 4) throw CodecError("cause: must be in 1..4");
    if (e < 1 || e > 4) throw CodecError("effect: must be in 1..4");
}

GeneratedUnit random_unit(const SearchBounds& bounds, uint64_t seed) {
    validate_bounds(bounds);
    Rng rng(mix64(seed, 0x756e6974ULL));
    GeneratedUnit u;
    for (const auto& st : kStats) {
        const StatRange& r = bounds.*(st.range);
        u.*(st.field) = rng.range(r.lo, r.hi);
    }
    u.cause = static_cast<Cause>(rng.range(1, 4));
    u.effect = static_cast<Effect>(rng.range(1, 4));
    return u;
}

std::vector<GeneratedUnit> neighbors(const GeneratedUnit& u) {
    validate_unit(u);
    std::vector<GeneratedUnit> out;
    out.reserve(18);
    GeneratedUnit base = u;
    base.name.clear();
    base.fitness.reset();

    for (const auto& st : kStats) {
        GeneratedUnit up = base;
        up.*(st.field) += 1;  // upward drift is unbounded
        out.push_back(up);
        if (base.*(st.field) > 1) {
            GeneratedUnit down = base;
            down.*(st.field) -= 1;
            out.push_back(down);
        }
    }
    for (int c = 1; c <= 4; ++c) {
        if (c == static_cast<int>(base.cause)) continue;  // replacement means change
        GeneratedUnit g = base;
        g.cause = static_cast<Cause>(c);
        out.push_back(g);
    }
    for (int e = 1; e <= 4; ++e) {
        if (e == static_cast<int>(base.effect)) continue;
        GeneratedUnit g = base;
        g.effect = static_cast<Effect>(e);
        out.push_back(g);
    }
    return out;
}

UnitType to_type_def(const GeneratedUnit& u, const GeneratedTypeDefaults& d) {
    validate_unit(u);
    UnitType t;
    t.name = u.name.empty() ? "generated" : u.name;
    t.cost = u.cost;
    t.maxHp = u.hp;
    t.damage = u.damage;
    t.attackRange = u.attackRange;
    t.moveTime = u.moveTime;
    t.attackTime = u.attackTime;
    t.produceTime = d.produceTimeBase + d.produceTimePerCost * u.cost;
    t.ability = Ability{u.cause, u.effect};
    return t;
}

GameConfig with_generated_unit(const GameConfig& base, const GeneratedUnit& u,
                               const GeneratedTypeDefaults& d) {
    GameConfig c = base;
    int newType = static_cast<int>(c.unitTypes.size());
    if (newType >= kMaxTypes) throw ConfigError("unit type table is full");
    c.unitTypes.push_back(to_type_def(u, d));
    for (UnitType& t : c.unitTypes) {
        // army producers (structures that already make non-harvesting units)
        if (!t.isStructure || t.produces.empty()) continue;
        bool armyProducer = false;
        for (int p : t.produces)
            armyProducer |= !c.unitTypes[static_cast<size_t>(p)].canHarvest;
        if (armyProducer) t.produces.push_back(newType);
    }
    c.generatedType = newType;
    return c;
}

}  // namespace rtsgen
