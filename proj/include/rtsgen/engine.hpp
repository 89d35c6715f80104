#pragma once

// Deterministic tick-based mini-RTS on an 8x8 grid: durative simultaneous
// actions, a worker economy, melee/ranged combat, and cause/effect ability
// hooks for generated unit types. A game state is a flat value; cloning is a
// plain copy, which the search code leans on heavily.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsgen/rng.hpp"

namespace rtsgen {

inline constexpr int kMaxUnits = 64;  // live units are bounded by grid cells
inline constexpr int kMaxTypes = 12;
inline constexpr int kMaxNodes = 8;
inline constexpr int kNumPlayers = 2;

class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ability trigger and payload, attached to generated unit types.
enum class Cause : int {
    OnDeath = 1,
    OnDamageTaken = 2,
    OnDamageDealt = 3,
    OnThirdAttack = 4,
};

enum class Effect : int {
    ReturnResources = 1,
    CounterOrRepeatAttack = 2,
    Heal = 3,
    SpeedChange = 4,
};

struct Ability {
    Cause cause = Cause::OnDeath;
    Effect effect = Effect::ReturnResources;
};

struct UnitType {
    std::string name;
    int cost = 1;
    int maxHp = 1;
    int damage = 0;  // structures may have 0; attackers need >= 1
    int attackRange = 1;
    int moveTime = 1;
    int attackTime = 1;
    int produceTime = 1;
    bool isStructure = false;
    bool canHarvest = false;
    bool acceptsReturns = false;    // workers deliver resources here
    std::vector<int> produces;      // type ids this unit can produce
    std::optional<Ability> ability;
};

enum class CommandKind : uint8_t { Idle = 0, Move, Attack, Harvest, Return, Produce };

// 4-neighbourhood in canonical enumeration order.
enum class Dir : uint8_t { Up = 0, Right, Down, Left };
inline constexpr int kDirDx[4] = {0, 1, 0, -1};
inline constexpr int kDirDy[4] = {-1, 0, 1, 0};

struct Command {
    int unitId = -1;
    CommandKind kind = CommandKind::Idle;
    Dir dir = Dir::Up;  // Move, Produce
    int target = -1;    // Attack: unit id; Harvest: node index; Return: base id; Produce: type id
};

// One player's command set for a tick. Every action-free unit the player owns
// should receive exactly one command; commands for busy units are rejected.
struct PlayerAction {
    std::vector<Command> commands;
};

struct Unit {
    int16_t id = -1;
    int8_t type = 0;
    int8_t owner = 0;
    int8_t x = 0, y = 0;
    int16_t hp = 0;
    int16_t carried = 0;
    // in-flight durative action; kind == Idle means free
    CommandKind actionKind = CommandKind::Idle;
    Dir actionDir = Dir::Up;
    int16_t actionTarget = -1;
    int32_t actionDone = 0;  // tick at which the action resolves
    int16_t attackCounter = 0;  // landed attacks since the last third-attack trigger
    bool attackFaster = false;  // halved attack time (non-stacking, permanent)
    bool attackSlower = false;  // doubled attack time (non-stacking, permanent)
    int32_t bornTick = 0;

    bool busy() const { return actionKind != CommandKind::Idle; }
};

struct ResourceNode {
    int8_t x = 0, y = 0;
    int16_t remaining = 0;
};

struct Outcome {
    int winner = -1;  // player index, or -1 for a draw
    bool draw() const { return winner < 0; }
};

enum class EventKind : uint8_t {
    Spawn,
    Death,
    MoveDone,
    MoveBlocked,
    HarvestDone,
    HarvestFailed,
    ReturnDone,
    ReturnFailed,
    ProduceStarted,
    ProduceBlocked,
    AttackHit,
    AttackMissed,
    AbilityFired,
    ResourceGrant,
    ResourcesLost,
    CommandRejected,
    BudgetExceeded,
    GameOver,
};

const char* event_kind_name(EventKind k);

// Compact replay record; meaning of a/b/c depends on kind (unit ids first,
// payload last). Serialized as line-delimited JSON.
struct Event {
    int32_t tick = 0;
    EventKind kind = EventKind::Spawn;
    int32_t a = -1;
    int32_t b = -1;
    int32_t c = 0;

    bool operator==(const Event&) const = default;
};

using EventLog = std::vector<Event>;

std::string event_to_json_line(const Event& e);
std::string event_log_to_jsonl(const EventLog& log);
uint64_t event_log_hash(const EventLog& log);

// Per unit type counters collected over a game.
struct TypeStats {
    std::array<int32_t, kNumPlayers> produced{};  // completed productions per owner
    int64_t totalAliveTicks = 0;                  // summed over instances
    int32_t aliveUnionTicks = 0;                  // ticks with >= 1 instance alive
};

struct GameConfig {
    int width = 8, height = 8;
    int maxTicks = 3000;
    int startingResources = 5;
    int harvestTime = 20;
    int returnTime = 10;
    int carryCapacity = 1;

    std::vector<UnitType> unitTypes;

    struct Placement {
        int type = 0;
        int owner = 0;
        int x = 0, y = 0;
        int hp = -1;  // -1 means full health
    };
    std::vector<Placement> placements;

    struct NodePlacement {
        int x = 0, y = 0;
        int amount = 0;
    };
    std::vector<NodePlacement> resourceNodes;

    int generatedType = -1;  // index of the searched unit type, if present

    int typeId(const std::string& name) const;
};

// Built-in stat table and layout, modelled on the usual 8x8 competition
// setting. Everything here can be overridden through JSON (see docs/).
GameConfig default_config();

struct GameState {
    int32_t tick = 0;
    int32_t maxTicks = 3000;
    int8_t width = 8, height = 8;
    int16_t harvestTime = 20, returnTime = 10, carryCapacity = 1;

    int16_t unitCount = 0;
    int16_t nextUnitId = 0;
    std::array<Unit, kMaxUnits> units{};    // alive units, ascending id
    std::array<int16_t, 64> grid{};         // unit id per cell, -1 when empty

    int8_t nodeCount = 0;
    std::array<ResourceNode, kMaxNodes> nodes{};
    int32_t initialNodeResources = 0;  // node amounts plus starting stockpiles

    std::array<int32_t, kNumPlayers> resources{};     // unspent stockpile
    std::array<int32_t, kNumPlayers> spent{};         // net production spend
    std::array<int32_t, kNumPlayers> granted{};       // ability-injected resources
    std::array<int32_t, kNumPlayers> lostOnDeath{};   // cargo destroyed with its carrier

    std::optional<Outcome> terminal;

    std::array<TypeStats, kMaxTypes> typeStats{};
    std::array<int16_t, kMaxTypes> aliveByType{};

    std::shared_ptr<const std::vector<UnitType>> types;

    const UnitType& type_of(const Unit& u) const { return (*types)[static_cast<size_t>(u.type)]; }
    int typeCount() const { return static_cast<int>(types->size()); }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    int cell(int x, int y) const { return y * width + x; }
    int unit_id_at(int x, int y) const { return grid[static_cast<size_t>(cell(x, y))]; }
    int node_index_at(int x, int y) const;          // -1 when no live node there
    bool cell_free(int x, int y) const;

    const Unit* unit_by_id(int id) const;
    Unit* unit_by_id(int id);

    int live_units(int player) const;               // units plus buildings
    int effective_attack_time(const Unit& u) const;

    uint64_t fingerprint() const;                   // stable structural hash
};

GameState new_game(const GameConfig& config, uint64_t seed);

struct UnitOptions {
    int unitId = -1;
    std::vector<Command> commands;
};

// Canonical per-unit command enumeration: Idle, moves, attacks, harvest,
// return, produce. Order is part of the determinism contract.
void unit_commands(const GameState& s, const Unit& u, std::vector<Command>& out);
std::vector<UnitOptions> legal_actions(const GameState& s, int player);
bool command_legal(const GameState& s, int player, const Command& cmd);

struct StepDiagnostics {
    struct Rejected {
        int unitId;
        std::string reason;
    };
    std::vector<Rejected> rejected;
};

// Advances exactly one tick. New commands are attached to free units, then
// actions completing at the new tick resolve in a fixed phase order:
// moves, harvests, returns, productions, attacks (with ability hooks).
void step(GameState& s, const PlayerAction& p0, const PlayerAction& p1,
          EventLog* log = nullptr, StepDiagnostics* diag = nullptr);

// Throws EngineError if a structural invariant is broken (occupancy, hp
// bounds, resource conservation, tick bounds).
void validate_state(const GameState& s);

class Agent {
public:
    virtual ~Agent() = default;
    virtual void start_game(uint64_t seed, int player) { (void)seed, (void)player; }
    virtual PlayerAction choose_action(const GameState& s, int player) = 0;
    virtual int decision_period() const { return 10; }
};

struct RunOptions {
    bool collectLog = true;
    bool validateEveryTick = false;
    int decisionBudgetMs = 0;  // 0 disables the wall-clock cap (keeps runs deterministic)
};

struct GameResult {
    Outcome outcome;
    int32_t endTick = 0;
    EventLog eventLog;
    std::array<TypeStats, kMaxTypes> typeStats{};
    std::shared_ptr<const std::vector<UnitType>> types;

    const TypeStats& stats_for(int typeId) const { return typeStats[static_cast<size_t>(typeId)]; }
    int produced_by(int typeId, int player) const {
        return typeStats[static_cast<size_t>(typeId)].produced[static_cast<size_t>(player)];
    }
};

GameResult run_game(const GameConfig& config, Agent& a0, Agent& a1, uint64_t seed,
                    const RunOptions& opts = {});

}  // namespace rtsgen
