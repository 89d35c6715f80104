#pragma once

// Game-playing agents: a UCT searcher with configurable strength plus small
// scripted baselines for tests and fixtures.
//
// Simultaneous moves are approximated with alternating assignment plies: a
// tree decision gives one command to one currently-free unit (movable units
// first, then structures, ascending id, sides interleaved). Once every free
// unit on both sides has a command the joint action is applied and the
// simulation advances to the next decision tick.

#include <array>
#include <functional>
#include <vector>

#include "rtsgen/engine.hpp"

namespace rtsgen {

struct AgentConfig {
    int maxDepth = 5;          // assignment plies per tree path
    int maxIterations = 500;
    double explorationConstant = 1.4142135623730951;  // sqrt(2)
    int playoutHorizon = 100;  // ticks simulated past the tree before evaluating
    int decisionPeriod = 10;   // re-plan cadence; commands persist in between
    uint64_t seed = 0;
};

enum class SkillLevel { Strong = 0, Medium = 1, Weak = 2 };

const char* skill_name(SkillLevel s);
SkillLevel skill_from_name(const std::string& name);  // throws ConfigError
AgentConfig skill_preset(SkillLevel level);

// Which unit types each player may produce. Agents respect this when
// enumerating commands; the engine itself does not restrict production.
struct ProductionRights {
    std::array<uint32_t, kNumPlayers> mask{~0u, ~0u};

    static ProductionRights all() { return {}; }
    bool allowed(int player, int type) const {
        return (mask[static_cast<size_t>(player)] >> type) & 1u;
    }
    void forbid(int player, int type) {
        mask[static_cast<size_t>(player)] &= ~(1u << type);
    }
};

// Symmetric material heuristic in [-1, 1] from `player`'s perspective:
// normalized difference of sum(hp * cost) + stockpile + carried. Terminal
// states anchor at +/-1 (win/loss) or 0 (draw).
double evaluate_state(const GameState& s, int player);

// One full UCT decision. Deterministic given (state, cfg, rng state, rights).
PlayerAction choose_action(const GameState& s, int player, const AgentConfig& cfg, Rng& rng,
                           const ProductionRights& rights = ProductionRights::all());

class MctsAgent : public Agent {
public:
    explicit MctsAgent(const AgentConfig& cfg,
                       const ProductionRights& rights = ProductionRights::all())
        : cfg_(cfg), rights_(rights), rng_(cfg.seed) {}

    void start_game(uint64_t seed, int player) override {
        (void)player;
        rng_ = Rng(mix64(cfg_.seed, seed));
    }
    PlayerAction choose_action(const GameState& s, int player) override {
        return rtsgen::choose_action(s, player, cfg_, rng_, rights_);
    }
    int decision_period() const override { return cfg_.decisionPeriod; }

    const AgentConfig& config() const { return cfg_; }
    const ProductionRights& rights() const { return rights_; }

private:
    AgentConfig cfg_;
    ProductionRights rights_;
    Rng rng_;
};

// Issues no commands at all.
class NoopAgent : public Agent {
public:
    PlayerAction choose_action(const GameState&, int) override { return {}; }
};

// Every free unit attacks what it can reach, otherwise walks toward the
// nearest enemy; structures stay idle. Deterministic.
class RushAgent : public Agent {
public:
    PlayerAction choose_action(const GameState& s, int player) override;
};

// Queues the given type at every capable producer whenever affordable;
// everything else idles. Used to force production in fixtures.
class BuilderAgent : public Agent {
public:
    explicit BuilderAgent(int typeId) : typeId_(typeId) {}
    PlayerAction choose_action(const GameState& s, int player) override;

private:
    int typeId_;
};

// Uniform-random legal commands for every free unit; stress-test agent.
class RandomAgent : public Agent {
public:
    void start_game(uint64_t seed, int player) override { (void)player; rng_ = Rng(seed); }
    PlayerAction choose_action(const GameState& s, int player) override;

private:
    Rng rng_{0};
};

}  // namespace rtsgen
