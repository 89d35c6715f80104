#include "rtsgen/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>

namespace rtsgen {

namespace {

int chebyshev(const Unit& a, const Unit& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

int manhattan(const Unit& a, int x, int y) {
    return std::abs(a.x - x) + std::abs(a.y - y);
}

}  // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Spawn: return "spawn";
        case EventKind::Death: return "death";
        case EventKind::MoveDone: return "move";
        case EventKind::MoveBlocked: return "move_blocked";
        case EventKind::HarvestDone: return "harvest";
        case EventKind::HarvestFailed: return "harvest_failed";
        case EventKind::ReturnDone: return "return";
        case EventKind::ReturnFailed: return "return_failed";
        case EventKind::ProduceStarted: return "produce_started";
        case EventKind::ProduceBlocked: return "produce_blocked";
        case EventKind::AttackHit: return "attack_hit";
        case EventKind::AttackMissed: return "attack_missed";
        case EventKind::AbilityFired: return "ability";
        case EventKind::ResourceGrant: return "grant";
        case EventKind::ResourcesLost: return "cargo_lost";
        case EventKind::CommandRejected: return "command_rejected";
        case EventKind::BudgetExceeded: return "budget_exceeded";
        case EventKind::GameOver: return "game_over";
    }
    return "unknown";
}

std::string event_to_json_line(const Event& e) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), R"({"tick":%d,"event":"%s","a":%d,"b":%d,"c":%d})",
                  e.tick, event_kind_name(e.kind), e.a, e.b, e.c);
    return buf;
}

std::string event_log_to_jsonl(const EventLog& log) {
    std::string out;
    out.reserve(log.size() * 48);
    for (const Event& e : log) {
        out += event_to_json_line(e);
        out += '\n';
    }
    return out;
}

uint64_t event_log_hash(const EventLog& log) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const Event& e : log) {
        int32_t fields[4] = {e.tick, e.a, e.b, e.c};
        h = fnv1a(fields, sizeof(fields), h);
        uint8_t k = static_cast<uint8_t>(e.kind);
        h = fnv1a(&k, 1, h);
    }
    return h;
}

int GameConfig::typeId(const std::string& name) const {
    for (size_t i = 0; i < unitTypes.size(); ++i)
        if (unitTypes[i].name == name) return static_cast<int>(i);
    return -1;
}

GameConfig default_config() {
    GameConfig c;
    c.unitTypes.resize(6);

    UnitType& base = c.unitTypes[0];
    base.name = "base";
    base.cost = 10;
    base.maxHp = 10;
    base.damage = 0;
    base.attackRange = 1;
    base.moveTime = 1;
    base.attackTime = 1;
    base.produceTime = 250;
    base.isStructure = true;
    base.acceptsReturns = true;

    UnitType& barracks = c.unitTypes[1];
    barracks.name = "barracks";
    barracks.cost = 5;
    barracks.maxHp = 4;
    barracks.damage = 0;
    barracks.attackRange = 1;
    barracks.moveTime = 1;
    barracks.attackTime = 1;
    barracks.produceTime = 200;
    barracks.isStructure = true;

    UnitType& worker = c.unitTypes[2];
    worker.name = "worker";
    worker.cost = 1;
    worker.maxHp = 1;
    worker.damage = 1;
    worker.attackRange = 1;
    worker.moveTime = 10;
    worker.attackTime = 5;
    worker.produceTime = 50;
    worker.canHarvest = true;

    UnitType& light = c.unitTypes[3];
    light.name = "light";
    light.cost = 2;
    light.maxHp = 4;
    light.damage = 2;
    light.attackRange = 1;
    light.moveTime = 8;
    light.attackTime = 5;
    light.produceTime = 80;

    UnitType& heavy = c.unitTypes[4];
    heavy.name = "heavy";
    heavy.cost = 2;
    heavy.maxHp = 4;
    heavy.damage = 4;
    heavy.attackRange = 1;
    heavy.moveTime = 12;
    heavy.attackTime = 5;
    heavy.produceTime = 120;

    UnitType& ranged = c.unitTypes[5];
    ranged.name = "ranged";
    ranged.cost = 2;
    ranged.maxHp = 1;
    ranged.damage = 1;
    ranged.attackRange = 3;
    ranged.moveTime = 10;
    ranged.attackTime = 5;
    ranged.produceTime = 100;

    base.produces = {2};           // workers
    barracks.produces = {3, 4, 5};  // army

    // Opposite corners, 180-degree rotational symmetry. Each worker starts
    // between its mineral node and base so the economy runs from tick 0.
    c.resourceNodes = {{0, 0, 20}, {7, 7, 20}};
    c.placements = {
        {0, 0, 2, 0, -1},  // base
        {1, 0, 0, 2, -1},  // barracks
        {2, 0, 1, 0, -1},  // worker
        {0, 1, 5, 7, -1},
        {1, 1, 7, 5, -1},
        {2, 1, 6, 7, -1},
    };
    return c;
}

int GameState::node_index_at(int x, int y) const {
    for (int i = 0; i < nodeCount; ++i) {
        const ResourceNode& n = nodes[static_cast<size_t>(i)];
        if (n.x == x && n.y == y && n.remaining > 0) return i;
    }
    return -1;
}

bool GameState::cell_free(int x, int y) const {
    return in_bounds(x, y) && unit_id_at(x, y) < 0 && node_index_at(x, y) < 0;
}

const Unit* GameState::unit_by_id(int id) const {
    for (int i = 0; i < unitCount; ++i)
        if (units[static_cast<size_t>(i)].id == id) return &units[static_cast<size_t>(i)];
    return nullptr;
}

Unit* GameState::unit_by_id(int id) {
    return const_cast<Unit*>(static_cast<const GameState*>(this)->unit_by_id(id));
}

int GameState::live_units(int player) const {
    int n = 0;
    for (int i = 0; i < unitCount; ++i)
        if (units[static_cast<size_t>(i)].owner == player) ++n;
    return n;
}

int GameState::effective_attack_time(const Unit& u) const {
    int t = type_of(u).attackTime;
    if (u.attackFaster) t = std::max(1, t / 2);
    if (u.attackSlower) t *= 2;
    return t;
}

uint64_t GameState::fingerprint() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    int32_t head[4] = {tick, unitCount, resources[0], resources[1]};
    h = fnv1a(head, sizeof(head), h);
    for (int i = 0; i < unitCount; ++i) {
        const Unit& u = units[static_cast<size_t>(i)];
        int32_t f[8] = {u.id, u.type, u.owner, u.x, u.y, u.hp, u.carried,
                        static_cast<int32_t>(u.actionKind)};
        h = fnv1a(f, sizeof(f), h);
    }
    for (int i = 0; i < nodeCount; ++i) {
        const ResourceNode& n = nodes[static_cast<size_t>(i)];
        int32_t f[3] = {n.x, n.y, n.remaining};
        h = fnv1a(f, sizeof(f), h);
    }
    return h;
}

GameState new_game(const GameConfig& config, uint64_t seed) {
    (void)seed;  // layout is seed independent; seeds drive agents and playouts
    if (config.width < 1 || config.height < 1 || config.width * config.height > 64)
        throw ConfigError("map must fit in 64 cells");
    if (config.unitTypes.empty()) throw ConfigError("unit type table is empty");
    if (static_cast<int>(config.unitTypes.size()) > kMaxTypes)
        throw ConfigError("too many unit types");
    for (const UnitType& t : config.unitTypes) {
        if (t.cost < 1 || t.maxHp < 1 || t.attackRange < 1 || t.moveTime < 1 ||
            t.attackTime < 1 || t.produceTime < 1 || t.damage < 0)
            throw ConfigError("unit type '" + t.name + "' has out-of-range stats");
        for (int p : t.produces)
            if (p < 0 || p >= static_cast<int>(config.unitTypes.size()))
                throw ConfigError("unit type '" + t.name + "' produces unknown type");
    }

    GameState s;
    s.maxTicks = config.maxTicks;
    s.width = static_cast<int8_t>(config.width);
    s.height = static_cast<int8_t>(config.height);
    s.harvestTime = static_cast<int16_t>(config.harvestTime);
    s.returnTime = static_cast<int16_t>(config.returnTime);
    s.carryCapacity = static_cast<int16_t>(config.carryCapacity);
    s.types = std::make_shared<const std::vector<UnitType>>(config.unitTypes);
    s.grid.fill(-1);

    if (static_cast<int>(config.resourceNodes.size()) > kMaxNodes)
        throw ConfigError("too many resource nodes");
    for (const auto& n : config.resourceNodes) {
        if (!s.in_bounds(n.x, n.y)) throw ConfigError("resource node out of bounds");
        if (n.amount < 0) throw ConfigError("negative resource node amount");
        if (s.node_index_at(n.x, n.y) >= 0) throw ConfigError("overlapping resource nodes");
        s.nodes[static_cast<size_t>(s.nodeCount++)] = {
            static_cast<int8_t>(n.x), static_cast<int8_t>(n.y), static_cast<int16_t>(n.amount)};
        s.initialNodeResources += n.amount;
    }

    for (const auto& p : config.placements) {
        if (p.type < 0 || p.type >= static_cast<int>(config.unitTypes.size()))
            throw ConfigError("placement references unknown unit type");
        if (p.owner < 0 || p.owner >= kNumPlayers) throw ConfigError("placement owner out of range");
        if (!s.in_bounds(p.x, p.y)) throw ConfigError("placement out of bounds");
        if (!s.cell_free(p.x, p.y)) throw ConfigError("overlapping placements");
        const UnitType& t = config.unitTypes[static_cast<size_t>(p.type)];
        Unit u;
        u.id = s.nextUnitId++;
        u.type = static_cast<int8_t>(p.type);
        u.owner = static_cast<int8_t>(p.owner);
        u.x = static_cast<int8_t>(p.x);
        u.y = static_cast<int8_t>(p.y);
        u.hp = static_cast<int16_t>(p.hp < 0 ? t.maxHp : std::min(p.hp, t.maxHp));
        if (u.hp < 1) throw ConfigError("placement hp below 1");
        u.bornTick = 0;
        s.units[static_cast<size_t>(s.unitCount++)] = u;
        s.grid[static_cast<size_t>(s.cell(p.x, p.y))] = u.id;
        s.aliveByType[static_cast<size_t>(p.type)]++;
    }

    s.resources = {config.startingResources, config.startingResources};
    // conservation baseline: everything in the ground plus both stockpiles
    s.initialNodeResources += 2 * config.startingResources;
    return s;
}

bool command_legal(const GameState& s, int player, const Command& cmd) {
    const Unit* u = s.unit_by_id(cmd.unitId);
    if (!u || u->owner != player || u->busy()) return false;
    const UnitType& t = s.type_of(*u);
    switch (cmd.kind) {
        case CommandKind::Idle:
            return true;
        case CommandKind::Move: {
            int nx = u->x + kDirDx[static_cast<int>(cmd.dir)];
            int ny = u->y + kDirDy[static_cast<int>(cmd.dir)];
            return !t.isStructure && s.cell_free(nx, ny);
        }
        case CommandKind::Attack: {
            if (t.damage < 1) return false;
            const Unit* v = s.unit_by_id(cmd.target);
            return v && v->owner != player && chebyshev(*u, *v) <= t.attackRange;
        }
        case CommandKind::Harvest: {
            if (!t.canHarvest || u->carried >= s.carryCapacity) return false;
            if (cmd.target < 0 || cmd.target >= s.nodeCount) return false;
            const ResourceNode& n = s.nodes[static_cast<size_t>(cmd.target)];
            return n.remaining > 0 && manhattan(*u, n.x, n.y) == 1;
        }
        case CommandKind::Return: {
            if (u->carried <= 0) return false;
            const Unit* b = s.unit_by_id(cmd.target);
            return b && b->owner == player && s.type_of(*b).acceptsReturns &&
                   manhattan(*u, b->x, b->y) == 1;
        }
        case CommandKind::Produce: {
            if (cmd.target < 0 || cmd.target >= s.typeCount()) return false;
            bool canMake = false;
            for (int pt : t.produces) canMake |= (pt == cmd.target);
            if (!canMake) return false;
            const UnitType& made = (*s.types)[static_cast<size_t>(cmd.target)];
            if (s.resources[static_cast<size_t>(player)] < made.cost) return false;
            int nx = u->x + kDirDx[static_cast<int>(cmd.dir)];
            int ny = u->y + kDirDy[static_cast<int>(cmd.dir)];
            return s.cell_free(nx, ny);
        }
    }
    return false;
}

void unit_commands(const GameState& s, const Unit& u, std::vector<Command>& out) {
    out.clear();
    out.push_back({u.id, CommandKind::Idle, Dir::Up, -1});
    if (u.busy()) return;  // busy units accept nothing new; Idle stands for "no command"

    const UnitType& t = s.type_of(u);
    if (!t.isStructure) {
        for (int d = 0; d < 4; ++d) {
            if (s.cell_free(u.x + kDirDx[d], u.y + kDirDy[d]))
                out.push_back({u.id, CommandKind::Move, static_cast<Dir>(d), -1});
        }
    }
    if (t.damage >= 1) {
        for (int i = 0; i < s.unitCount; ++i) {
            const Unit& v = s.units[static_cast<size_t>(i)];
            if (v.owner != u.owner && chebyshev(u, v) <= t.attackRange)
                out.push_back({u.id, CommandKind::Attack, Dir::Up, v.id});
        }
    }
    if (t.canHarvest && u.carried < s.carryCapacity) {
        for (int n = 0; n < s.nodeCount; ++n) {
            const ResourceNode& node = s.nodes[static_cast<size_t>(n)];
            if (node.remaining > 0 && manhattan(u, node.x, node.y) == 1)
                out.push_back({u.id, CommandKind::Harvest, Dir::Up, n});
        }
    }
    if (u.carried > 0) {
        for (int i = 0; i < s.unitCount; ++i) {
            const Unit& b = s.units[static_cast<size_t>(i)];
            if (b.owner == u.owner && s.type_of(b).acceptsReturns && manhattan(u, b.x, b.y) == 1)
                out.push_back({u.id, CommandKind::Return, Dir::Up, b.id});
        }
    }
    for (int made : t.produces) {
        const UnitType& mt = (*s.types)[static_cast<size_t>(made)];
        if (s.resources[static_cast<size_t>(u.owner)] < mt.cost) continue;
        for (int d = 0; d < 4; ++d) {
            if (s.cell_free(u.x + kDirDx[d], u.y + kDirDy[d]))
                out.push_back({u.id, CommandKind::Produce, static_cast<Dir>(d), made});
        }
    }
}

std::vector<UnitOptions> legal_actions(const GameState& s, int player) {
    if (s.terminal) throw EngineError("legal_actions on a terminal state");
    std::vector<UnitOptions> result;
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        if (u.owner != player || u.busy()) continue;
        UnitOptions opt;
        opt.unitId = u.id;
        unit_commands(s, u, opt.commands);
        result.push_back(std::move(opt));
    }
    return result;
}

namespace {

void log_event(EventLog* log, int32_t tick, EventKind kind, int32_t a = -1, int32_t b = -1,
               int32_t c = 0) {
    if (log) log->push_back({tick, kind, a, b, c});
}

struct DeathInfo {
    int16_t victimIdx;
    int16_t killerId;
};

// Marks the unit dead and frees its cell. Physical removal from the unit
// array happens once per tick, after hooks.
void mark_dead(GameState& s, std::array<bool, kMaxUnits>& dead, int idx, int killerId,
               EventLog* log) {
    Unit& u = s.units[static_cast<size_t>(idx)];
    if (dead[static_cast<size_t>(idx)]) return;
    dead[static_cast<size_t>(idx)] = true;
    u.hp = 0;
    s.grid[static_cast<size_t>(s.cell(u.x, u.y))] = -1;
    s.aliveByType[static_cast<size_t>(u.type)]--;
    log_event(log, s.tick, EventKind::Death, u.id, killerId);
    if (u.carried > 0) {
        s.lostOnDeath[static_cast<size_t>(u.owner)] += u.carried;
        log_event(log, s.tick, EventKind::ResourcesLost, u.id, -1, u.carried);
        u.carried = 0;
    }
}

// Ability-inflicted damage. Never triggers further hooks, so chains of
// counter-attacks cannot recurse; kills are still real kills.
void ability_damage(GameState& s, std::array<bool, kMaxUnits>& dead, int victimIdx, int dmg,
                    int sourceId, EventLog* log) {
    Unit& v = s.units[static_cast<size_t>(victimIdx)];
    if (dead[static_cast<size_t>(victimIdx)]) return;
    v.hp = static_cast<int16_t>(std::max(0, v.hp - dmg));
    log_event(log, s.tick, EventKind::AttackHit, sourceId, v.id, dmg);
    if (v.hp == 0) mark_dead(s, dead, victimIdx, sourceId, log);
}

int index_of_unit(const GameState& s, int id) {
    for (int i = 0; i < s.unitCount; ++i)
        if (s.units[static_cast<size_t>(i)].id == id) return i;
    return -1;
}

// Fires one ability hook. `ownerIdx` holds the ability; `otherId` is the
// interacting unit (killer, attacker, or attack target depending on cause).
void fire_ability(GameState& s, std::array<bool, kMaxUnits>& dead, int ownerIdx, int otherId,
                  EventLog* log) {
    Unit& owner = s.units[static_cast<size_t>(ownerIdx)];
    const UnitType& ot = s.type_of(owner);
    if (!ot.ability) return;
    const Cause cause = ot.ability->cause;
    const Effect effect = ot.ability->effect;
    const bool selfPerspective = (cause == Cause::OnDeath || cause == Cause::OnDamageTaken);
    int otherIdx = index_of_unit(s, otherId);

    log_event(log, s.tick, EventKind::AbilityFired, owner.id, otherId,
              static_cast<int>(cause) * 10 + static_cast<int>(effect));

    switch (effect) {
        case Effect::ReturnResources: {
            int amount;
            if (selfPerspective) {
                amount = ot.cost;
            } else {
                if (otherIdx < 0) return;
                amount = s.type_of(s.units[static_cast<size_t>(otherIdx)]).cost;
            }
            s.resources[static_cast<size_t>(owner.owner)] += amount;
            s.granted[static_cast<size_t>(owner.owner)] += amount;
            log_event(log, s.tick, EventKind::ResourceGrant, owner.id, -1, amount);
            break;
        }
        case Effect::CounterOrRepeatAttack: {
            if (otherIdx < 0 || dead[static_cast<size_t>(otherIdx)]) return;
            // causes 1,2: strike the attacker back; causes 3,4: hit the same
            // target a second time
            ability_damage(s, dead, otherIdx, ot.damage, owner.id, log);
            break;
        }
        case Effect::Heal: {
            if (cause == Cause::OnDeath) return;  // dead on arrival
            owner.hp = static_cast<int16_t>(std::min<int>(ot.maxHp, owner.hp + 3));
            break;
        }
        case Effect::SpeedChange: {
            if (cause == Cause::OnDeath) {
                if (otherIdx >= 0 && !dead[static_cast<size_t>(otherIdx)])
                    s.units[static_cast<size_t>(otherIdx)].attackSlower = true;
            } else {
                owner.attackFaster = true;
            }
            break;
        }
    }
}

void assign_commands(GameState& s, const PlayerAction& action, int player, EventLog* log,
                     StepDiagnostics* diag) {
    for (const Command& cmd : action.commands) {
        Unit* u = s.unit_by_id(cmd.unitId);
        const char* reason = nullptr;
        if (!u)
            reason = "no such unit";
        else if (u->owner != player)
            reason = "not owned";
        else if (u->busy())
            reason = "unit busy";
        else if (!command_legal(s, player, cmd))
            reason = "illegal command";

        if (reason) {
            if (diag) diag->rejected.push_back({cmd.unitId, reason});
            log_event(log, s.tick, EventKind::CommandRejected, cmd.unitId, -1,
                      static_cast<int>(cmd.kind));
            continue;
        }
        if (cmd.kind == CommandKind::Idle) continue;

        u->actionKind = cmd.kind;
        u->actionDir = cmd.dir;
        u->actionTarget = static_cast<int16_t>(cmd.target);
        switch (cmd.kind) {
            case CommandKind::Move:
                u->actionDone = s.tick + s.type_of(*u).moveTime;
                break;
            case CommandKind::Attack:
                u->actionDone = s.tick + s.effective_attack_time(*u);
                break;
            case CommandKind::Harvest:
                u->actionDone = s.tick + s.harvestTime;
                break;
            case CommandKind::Return:
                u->actionDone = s.tick + s.returnTime;
                break;
            case CommandKind::Produce: {
                const UnitType& made = (*s.types)[static_cast<size_t>(cmd.target)];
                s.resources[static_cast<size_t>(player)] -= made.cost;
                s.spent[static_cast<size_t>(player)] += made.cost;
                u->actionDone = s.tick + made.produceTime;
                log_event(log, s.tick, EventKind::ProduceStarted, u->id, -1, cmd.target);
                break;
            }
            default:
                break;
        }
    }
}

}  // namespace

void step(GameState& s, const PlayerAction& p0, const PlayerAction& p1, EventLog* log,
          StepDiagnostics* diag) {
    if (s.terminal) throw EngineError("step on a terminal state");

    // Survival accounting for the interval [tick, tick+1). A unit born at t
    // and dying at d is counted for exactly d - t ticks.
    for (int t = 0; t < s.typeCount(); ++t) {
        int16_t alive = s.aliveByType[static_cast<size_t>(t)];
        if (alive > 0) {
            s.typeStats[static_cast<size_t>(t)].aliveUnionTicks++;
            s.typeStats[static_cast<size_t>(t)].totalAliveTicks += alive;
        }
    }

    assign_commands(s, p0, 0, log, diag);
    assign_commands(s, p1, 1, log, diag);

    s.tick++;
    const int32_t now = s.tick;
    std::array<bool, kMaxUnits> dead{};

    // Phase 1: movement. Ascending unit id; the first mover claims a
    // contested cell and later completions are cancelled.
    for (int i = 0; i < s.unitCount; ++i) {
        Unit& u = s.units[static_cast<size_t>(i)];
        if (u.actionKind != CommandKind::Move || u.actionDone != now) continue;
        int nx = u.x + kDirDx[static_cast<int>(u.actionDir)];
        int ny = u.y + kDirDy[static_cast<int>(u.actionDir)];
        if (s.cell_free(nx, ny)) {
            s.grid[static_cast<size_t>(s.cell(u.x, u.y))] = -1;
            u.x = static_cast<int8_t>(nx);
            u.y = static_cast<int8_t>(ny);
            s.grid[static_cast<size_t>(s.cell(nx, ny))] = u.id;
            log_event(log, now, EventKind::MoveDone, u.id, -1,
                      static_cast<int>(u.actionDir));
        } else {
            log_event(log, now, EventKind::MoveBlocked, u.id, -1,
                      static_cast<int>(u.actionDir));
        }
        u.actionKind = CommandKind::Idle;
    }

    // Phase 2: harvests.
    for (int i = 0; i < s.unitCount; ++i) {
        Unit& u = s.units[static_cast<size_t>(i)];
        if (u.actionKind != CommandKind::Harvest || u.actionDone != now) continue;
        ResourceNode& n = s.nodes[static_cast<size_t>(u.actionTarget)];
        if (n.remaining > 0 && u.carried < s.carryCapacity) {
            n.remaining--;
            u.carried++;
            log_event(log, now, EventKind::HarvestDone, u.id, u.actionTarget, n.remaining);
        } else {
            log_event(log, now, EventKind::HarvestFailed, u.id, u.actionTarget);
        }
        u.actionKind = CommandKind::Idle;
    }

    // Phase 3: resource returns.
    for (int i = 0; i < s.unitCount; ++i) {
        Unit& u = s.units[static_cast<size_t>(i)];
        if (u.actionKind != CommandKind::Return || u.actionDone != now) continue;
        const Unit* b = s.unit_by_id(u.actionTarget);
        if (b && b->owner == u.owner) {
            s.resources[static_cast<size_t>(u.owner)] += u.carried;
            log_event(log, now, EventKind::ReturnDone, u.id, b->id, u.carried);
            u.carried = 0;
        } else {
            log_event(log, now, EventKind::ReturnFailed, u.id, u.actionTarget);
        }
        u.actionKind = CommandKind::Idle;
    }

    // Phase 4: completed productions. A blocked spawn cell refunds the cost.
    int producerCount = s.unitCount;  // spawns go to the back; don't revisit them
    for (int i = 0; i < producerCount; ++i) {
        Unit& u = s.units[static_cast<size_t>(i)];
        if (u.actionKind != CommandKind::Produce || u.actionDone != now) continue;
        int madeType = u.actionTarget;
        const UnitType& mt = (*s.types)[static_cast<size_t>(madeType)];
        int nx = u.x + kDirDx[static_cast<int>(u.actionDir)];
        int ny = u.y + kDirDy[static_cast<int>(u.actionDir)];
        if (s.cell_free(nx, ny) && s.unitCount < kMaxUnits) {
            Unit spawned;
            spawned.id = s.nextUnitId++;
            spawned.type = static_cast<int8_t>(madeType);
            spawned.owner = u.owner;
            spawned.x = static_cast<int8_t>(nx);
            spawned.y = static_cast<int8_t>(ny);
            spawned.hp = static_cast<int16_t>(mt.maxHp);
            spawned.bornTick = now;
            s.units[static_cast<size_t>(s.unitCount++)] = spawned;
            s.grid[static_cast<size_t>(s.cell(nx, ny))] = spawned.id;
            s.aliveByType[static_cast<size_t>(madeType)]++;
            s.typeStats[static_cast<size_t>(madeType)].produced[static_cast<size_t>(u.owner)]++;
            log_event(log, now, EventKind::Spawn, spawned.id, u.id, madeType);
        } else {
            s.resources[static_cast<size_t>(u.owner)] += mt.cost;
            s.spent[static_cast<size_t>(u.owner)] -= mt.cost;
            log_event(log, now, EventKind::ProduceBlocked, u.id, -1, madeType);
        }
        u.actionKind = CommandKind::Idle;
    }

    // Phase 5: combat. All attacks landing this tick hit simultaneously,
    // then deaths resolve, then hooks fire in a fixed order: on-death,
    // surviving-victim on-damage, attacker on-deal / third-attack. Lethal
    // damage suppresses the victim's on-damage hook.
    struct Hit {
        int16_t attackerIdx;
        int16_t victimIdx;
        int16_t damage;
    };
    std::array<Hit, kMaxUnits> hits;
    int hitCount = 0;
    for (int i = 0; i < s.unitCount; ++i) {
        Unit& u = s.units[static_cast<size_t>(i)];
        if (u.actionKind != CommandKind::Attack || u.actionDone != now) continue;
        const UnitType& t = s.type_of(u);
        int victimIdx = index_of_unit(s, u.actionTarget);
        if (victimIdx >= 0 && chebyshev(u, s.units[static_cast<size_t>(victimIdx)]) <= t.attackRange) {
            hits[static_cast<size_t>(hitCount++)] = {static_cast<int16_t>(i),
                                                     static_cast<int16_t>(victimIdx),
                                                     static_cast<int16_t>(t.damage)};
        } else {
            log_event(log, now, EventKind::AttackMissed, u.id, u.actionTarget);
        }
        u.actionKind = CommandKind::Idle;
    }

    for (int h = 0; h < hitCount; ++h) {
        Unit& v = s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].victimIdx)];
        v.hp = static_cast<int16_t>(std::max(0, v.hp - hits[static_cast<size_t>(h)].damage));
        log_event(log, now, EventKind::AttackHit,
                  s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].attackerIdx)].id, v.id,
                  hits[static_cast<size_t>(h)].damage);
    }
    for (int h = 0; h < hitCount; ++h) {
        int vIdx = hits[static_cast<size_t>(h)].victimIdx;
        Unit& v = s.units[static_cast<size_t>(vIdx)];
        if (v.hp == 0 && !dead[static_cast<size_t>(vIdx)]) {
            // killer = lowest-id attacker that hit this victim this tick
            int killerId = s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].attackerIdx)].id;
            mark_dead(s, dead, vIdx, killerId, log);
        }
    }

    // on-death hooks
    for (int h = 0; h < hitCount; ++h) {
        int vIdx = hits[static_cast<size_t>(h)].victimIdx;
        if (!dead[static_cast<size_t>(vIdx)]) continue;
        const Unit& v = s.units[static_cast<size_t>(vIdx)];
        const auto& ab = s.type_of(v).ability;
        if (ab && ab->cause == Cause::OnDeath) {
            // fire once even if several attackers landed hits
            bool first = true;
            for (int g = 0; g < h; ++g)
                if (hits[static_cast<size_t>(g)].victimIdx == vIdx) first = false;
            if (first)
                fire_ability(s, dead, vIdx,
                             s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].attackerIdx)].id,
                             log);
        }
    }
    // surviving-victim on-damage hooks, one per landed hit
    for (int h = 0; h < hitCount; ++h) {
        int vIdx = hits[static_cast<size_t>(h)].victimIdx;
        if (dead[static_cast<size_t>(vIdx)]) continue;
        const auto& ab = s.type_of(s.units[static_cast<size_t>(vIdx)]).ability;
        if (ab && ab->cause == Cause::OnDamageTaken)
            fire_ability(s, dead, vIdx,
                         s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].attackerIdx)].id,
                         log);
    }
    // attacker hooks, one per landed hit; dead attackers act no further
    for (int h = 0; h < hitCount; ++h) {
        int aIdx = hits[static_cast<size_t>(h)].attackerIdx;
        if (dead[static_cast<size_t>(aIdx)]) continue;
        Unit& attacker = s.units[static_cast<size_t>(aIdx)];
        attacker.attackCounter++;
        const auto& ab = s.type_of(attacker).ability;
        if (!ab) continue;
        int victimId = s.units[static_cast<size_t>(hits[static_cast<size_t>(h)].victimIdx)].id;
        if (ab->cause == Cause::OnDamageDealt) {
            fire_ability(s, dead, aIdx, victimId, log);
        } else if (ab->cause == Cause::OnThirdAttack && attacker.attackCounter >= 3) {
            attacker.attackCounter = 0;
            fire_ability(s, dead, aIdx, victimId, log);
        }
    }

    // compact the unit array, preserving ascending id order
    int w = 0;
    for (int i = 0; i < s.unitCount; ++i) {
        if (!dead[static_cast<size_t>(i)]) {
            if (w != i) s.units[static_cast<size_t>(w)] = s.units[static_cast<size_t>(i)];
            ++w;
        }
    }
    s.unitCount = static_cast<int16_t>(w);

    // Termination: a side with nothing left loses; both empty or the timer
    // expiring is a draw.
    int alive0 = s.live_units(0);
    int alive1 = s.live_units(1);
    if (alive0 == 0 || alive1 == 0) {
        int winner = (alive0 == 0 && alive1 == 0) ? -1 : (alive0 == 0 ? 1 : 0);
        s.terminal = Outcome{winner};
        log_event(log, now, EventKind::GameOver, winner);
    } else if (now >= s.maxTicks) {
        s.terminal = Outcome{-1};
        log_event(log, now, EventKind::GameOver, -1);
    }
}

void validate_state(const GameState& s) {
    if (s.tick > s.maxTicks) throw EngineError("tick exceeds maxTicks");

    std::array<int16_t, 64> expectGrid;
    expectGrid.fill(-1);
    std::array<int16_t, kMaxTypes> aliveCount{};
    int32_t carriedTotal = 0;
    int lastId = -1;
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        if (u.id <= lastId) throw EngineError("unit ids not ascending");
        lastId = u.id;
        if (!s.in_bounds(u.x, u.y)) throw EngineError("unit out of bounds");
        const UnitType& t = s.type_of(u);
        if (u.hp < 1 || u.hp > t.maxHp) throw EngineError("unit hp out of bounds");
        if (u.carried < 0 || u.carried > s.carryCapacity) throw EngineError("carried out of range");
        int c = s.cell(u.x, u.y);
        if (expectGrid[static_cast<size_t>(c)] != -1) throw EngineError("two units share a cell");
        expectGrid[static_cast<size_t>(c)] = u.id;
        aliveCount[static_cast<size_t>(u.type)]++;
        carriedTotal += u.carried;
    }
    for (int c = 0; c < s.width * s.height; ++c)
        if (s.grid[static_cast<size_t>(c)] != expectGrid[static_cast<size_t>(c)])
            throw EngineError("grid occupancy out of sync");
    for (int t = 0; t < s.typeCount(); ++t)
        if (aliveCount[static_cast<size_t>(t)] != s.aliveByType[static_cast<size_t>(t)])
            throw EngineError("alive-by-type counters out of sync");

    int32_t nodeRemaining = 0;
    for (int i = 0; i < s.nodeCount; ++i) {
        if (s.nodes[static_cast<size_t>(i)].remaining < 0) throw EngineError("negative node amount");
        nodeRemaining += s.nodes[static_cast<size_t>(i)].remaining;
    }

    // Conservation: everything mined is either still in the ground, in
    // transit, in a stockpile, spent on production, or destroyed with its
    // carrier; ability grants are the only injection.
    int64_t lhs = s.initialNodeResources;
    int64_t rhs = nodeRemaining + carriedTotal;
    for (int p = 0; p < kNumPlayers; ++p) {
        rhs += s.resources[static_cast<size_t>(p)] + s.spent[static_cast<size_t>(p)] +
               s.lostOnDeath[static_cast<size_t>(p)] - s.granted[static_cast<size_t>(p)];
        if (s.resources[static_cast<size_t>(p)] < 0) throw EngineError("negative stockpile");
    }
    if (lhs != rhs) throw EngineError("resource conservation violated");
}

GameResult run_game(const GameConfig& config, Agent& a0, Agent& a1, uint64_t seed,
                    const RunOptions& opts) {
    GameState s = new_game(config, seed);
    a0.start_game(mix64(seed, 1), 0);
    a1.start_game(mix64(seed, 2), 1);

    EventLog log;
    EventLog* logPtr = opts.collectLog ? &log : nullptr;
    const int period0 = std::max(1, a0.decision_period());
    const int period1 = std::max(1, a1.decision_period());
    const PlayerAction empty;

    auto ask = [&](Agent& agent, int player) -> PlayerAction {
        if (opts.decisionBudgetMs <= 0) return agent.choose_action(s, player);
        auto t0 = std::chrono::steady_clock::now();
        PlayerAction a = agent.choose_action(s, player);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        if (ms > opts.decisionBudgetMs) {
            log_event(logPtr, s.tick, EventKind::BudgetExceeded, player, -1,
                      static_cast<int32_t>(ms));
            return PlayerAction{};
        }
        return a;
    };

    while (!s.terminal) {
        PlayerAction pa0 = (s.tick % period0 == 0) ? ask(a0, 0) : empty;
        PlayerAction pa1 = (s.tick % period1 == 0) ? ask(a1, 1) : empty;
        step(s, pa0, pa1, logPtr);
        if (opts.validateEveryTick) validate_state(s);
    }

    GameResult r;
    r.outcome = *s.terminal;
    r.endTick = s.tick;
    r.eventLog = std::move(log);
    r.typeStats = s.typeStats;
    r.types = s.types;
    return r;
}

}  // namespace rtsgen
