#include "rtsgen/agents.hpp"

#include <algorithm>
#include <cmath>

namespace rtsgen {

const char* skill_name(SkillLevel s) {
    switch (s) {
        case SkillLevel::Strong: return "strong";
        case SkillLevel::Medium: return "medium";
        case SkillLevel::Weak: return "weak";
    }
    return "?";
}

SkillLevel skill_from_name(const std::string& name) {
    if (name == "strong") return SkillLevel::Strong;
    if (name == "medium") return SkillLevel::Medium;
    if (name == "weak") return SkillLevel::Weak;
    throw ConfigError("unknown skill level: " + name);
}

AgentConfig skill_preset(SkillLevel level) {
    AgentConfig cfg;
    switch (level) {
        case SkillLevel::Strong:
            cfg.maxDepth = 10;
            cfg.maxIterations = 1000;
            break;
        case SkillLevel::Medium:
            cfg.maxDepth = 5;
            cfg.maxIterations = 500;
            break;
        case SkillLevel::Weak:
            cfg.maxDepth = 2;
            cfg.maxIterations = 250;
            break;
    }
    return cfg;
}

double evaluate_state(const GameState& s, int player) {
    if (s.terminal) {
        if (s.terminal->draw()) return 0.0;
        return s.terminal->winner == player ? 1.0 : -1.0;
    }
    double material[2] = {static_cast<double>(s.resources[0]), static_cast<double>(s.resources[1])};
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        const UnitType& t = s.type_of(u);
        material[u.owner] += static_cast<double>(u.hp) * t.cost + u.carried;
    }
    double total = material[0] + material[1];
    if (total <= 0.0) return 0.0;
    double v = (material[0] - material[1]) / total;
    return player == 0 ? v : -v;
}

namespace {

struct Slot {
    int8_t player;
    int16_t unitId;
};

// Assignment order: each side lists movable units before structures,
// ascending id; sides are interleaved starting with `first`.
void build_pending(const GameState& s, int first, std::vector<Slot>& out) {
    out.clear();
    std::array<std::vector<int16_t>, 2> perSide;  // small, reused rarely; fine
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < s.unitCount; ++i) {
            const Unit& u = s.units[static_cast<size_t>(i)];
            if (u.busy()) continue;
            bool structure = s.type_of(u).isStructure;
            if ((pass == 0) == structure) continue;
            perSide[static_cast<size_t>(u.owner)].push_back(u.id);
        }
    }
    size_t i0 = 0, i1 = 0;
    const auto& a = perSide[static_cast<size_t>(first)];
    const auto& b = perSide[static_cast<size_t>(1 - first)];
    while (i0 < a.size() || i1 < b.size()) {
        if (i0 < a.size()) out.push_back({static_cast<int8_t>(first), a[i0++]});
        if (i1 < b.size()) out.push_back({static_cast<int8_t>(1 - first), b[i1++]});
    }
}

void rights_filtered_commands(const GameState& s, const Unit& u, const ProductionRights& rights,
                              std::vector<Command>& out) {
    unit_commands(s, u, out);
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](const Command& c) {
                                 return c.kind == CommandKind::Produce &&
                                        !rights.allowed(u.owner, c.target);
                             }),
              out.end());
}

struct Node {
    Command cmd;             // edge command leading into this node
    int32_t firstChild = -1;
    int32_t visits = 0;
    double valueSum = 0.0;   // accumulated from the root player's perspective
    int16_t childCount = -1;  // -1: children not built yet
    int16_t nextUntried = 0;
    bool terminal = false;
    float terminalValue = 0.0f;
};

struct Workspace {
    std::vector<Node> arena;
    std::vector<Slot> rootPending;
    std::vector<Slot> pending;
    std::vector<int32_t> path;
    std::vector<Command> scratch;
    GameState sim;
};

thread_local Workspace tls;

double terminal_value(const GameState& s, int rootPlayer) {
    if (s.terminal->draw()) return 0.0;
    return s.terminal->winner == rootPlayer ? 1.0 : -1.0;
}

// Steps empty ticks until the next decision boundary that has at least one
// free unit, or terminal.
void advance_to_decision(GameState& s, int period) {
    static const PlayerAction kEmpty;
    while (!s.terminal) {
        do {
            step(s, kEmpty, kEmpty, nullptr);
        } while (!s.terminal && s.tick % period != 0);
        if (s.terminal) return;
        for (int i = 0; i < s.unitCount; ++i)
            if (!s.units[static_cast<size_t>(i)].busy()) return;
    }
}

Command random_command(const GameState& s, const Unit& u, const ProductionRights& rights,
                       Rng& rng, std::vector<Command>& scratch) {
    rights_filtered_commands(s, u, rights, scratch);
    return scratch[rng.below(scratch.size())];
}

// Uniform-random self-play from `s` for `horizon` ticks, then the material
// heuristic. `pending[pos..]` still needs commands before the first step.
double playout(GameState& s, const std::vector<Slot>& pending, size_t pos, PlayerAction& buf0,
               PlayerAction& buf1, const AgentConfig& cfg, const ProductionRights& rights,
               int rootPlayer, Rng& rng, std::vector<Command>& scratch) {
    const int32_t anchor = s.tick;
    if (!s.terminal && pos < pending.size()) {
        for (; pos < pending.size(); ++pos) {
            const Unit* u = s.unit_by_id(pending[pos].unitId);
            if (!u || u->busy()) continue;
            Command c = random_command(s, *u, rights, rng, scratch);
            (pending[pos].player == 0 ? buf0 : buf1).commands.push_back(c);
        }
        step(s, buf0, buf1, nullptr);
        buf0.commands.clear();
        buf1.commands.clear();
    }
    static const PlayerAction kEmpty;
    while (!s.terminal && s.tick - anchor < cfg.playoutHorizon) {
        if (s.tick % cfg.decisionPeriod == 0) {
            for (int i = 0; i < s.unitCount; ++i) {
                const Unit& u = s.units[static_cast<size_t>(i)];
                if (u.busy()) continue;
                Command c = random_command(s, u, rights, rng, scratch);
                (u.owner == 0 ? buf0 : buf1).commands.push_back(c);
            }
            step(s, buf0, buf1, nullptr);
            buf0.commands.clear();
            buf1.commands.clear();
        } else {
            step(s, kEmpty, kEmpty, nullptr);
        }
    }
    if (s.terminal) return terminal_value(s, rootPlayer);
    return evaluate_state(s, rootPlayer);
}

}  // namespace

PlayerAction choose_action(const GameState& s, int player, const AgentConfig& cfg, Rng& rng,
                           const ProductionRights& rights) {
    if (s.terminal) throw EngineError("choose_action on a terminal state");

    Workspace& ws = tls;
    build_pending(s, player, ws.rootPending);

    bool haveOwn = false;
    for (const Slot& slot : ws.rootPending) haveOwn |= (slot.player == player);
    if (!haveOwn) return {};  // nothing to command this tick

    ws.arena.clear();
    ws.arena.push_back(Node{});  // root; its children decide rootPending[0]

    PlayerAction buf0, buf1;
    const int period = std::max(1, cfg.decisionPeriod);

    for (int iter = 0; iter < cfg.maxIterations; ++iter) {
        ws.sim = s;
        ws.pending = ws.rootPending;
        size_t pos = 0;
        buf0.commands.clear();
        buf1.commands.clear();
        ws.path.clear();
        ws.path.push_back(0);

        int32_t nodeIdx = 0;
        int plies = 0;
        double value = 0.0;

        // applies the edge command for pending[pos]; on a complete joint
        // assignment, steps the sim and advances to the next decision tick
        auto apply_edge = [&](const Command& cmd) {
            (ws.pending[pos].player == 0 ? buf0 : buf1).commands.push_back(cmd);
            ++pos;
            if (pos == ws.pending.size()) {
                step(ws.sim, buf0, buf1, nullptr);
                buf0.commands.clear();
                buf1.commands.clear();
                advance_to_decision(ws.sim, period);
                if (!ws.sim.terminal) build_pending(ws.sim, player, ws.pending);
                pos = 0;
            }
        };

        while (true) {
            Node& node = ws.arena[static_cast<size_t>(nodeIdx)];
            if (node.terminal) {
                value = node.terminalValue;
                break;
            }
            if (plies >= cfg.maxDepth) {
                value = playout(ws.sim, ws.pending, pos, buf0, buf1, cfg, rights, player, rng,
                                ws.scratch);
                break;
            }
            if (node.childCount < 0) {
                const Unit* u = ws.sim.unit_by_id(ws.pending[pos].unitId);
                rights_filtered_commands(ws.sim, *u, rights, ws.scratch);
                node.firstChild = static_cast<int32_t>(ws.arena.size());
                node.childCount = static_cast<int16_t>(ws.scratch.size());
                for (const Command& c : ws.scratch) {
                    Node child;
                    child.cmd = c;
                    ws.arena.push_back(child);
                }
            }
            // re-read: the arena may have reallocated
            Node& n = ws.arena[static_cast<size_t>(nodeIdx)];
            int32_t childIdx;
            if (n.nextUntried < n.childCount) {
                childIdx = n.firstChild + n.nextUntried;
                n.nextUntried++;
                apply_edge(ws.arena[static_cast<size_t>(childIdx)].cmd);
                ws.path.push_back(childIdx);
                ++plies;
                Node& child = ws.arena[static_cast<size_t>(childIdx)];
                if (ws.sim.terminal) {
                    child.terminal = true;
                    child.terminalValue = static_cast<float>(terminal_value(ws.sim, player));
                    value = child.terminalValue;
                } else {
                    value = playout(ws.sim, ws.pending, pos, buf0, buf1, cfg, rights, player, rng,
                                    ws.scratch);
                }
                break;
            }

            // UCB1 over expanded children, from the acting player's view
            const double persp = (ws.pending[pos].player == player) ? 1.0 : -1.0;
            const double logN = std::log(static_cast<double>(std::max<int32_t>(1, n.visits)));
            double bestScore = 0.0;
            childIdx = -1;
            for (int k = 0; k < n.childCount; ++k) {
                const Node& c = ws.arena[static_cast<size_t>(n.firstChild + k)];
                double score = persp * (c.valueSum / c.visits) +
                               cfg.explorationConstant * std::sqrt(logN / c.visits);
                if (childIdx < 0 || score > bestScore) {
                    bestScore = score;
                    childIdx = n.firstChild + k;
                }
            }
            apply_edge(ws.arena[static_cast<size_t>(childIdx)].cmd);
            ws.path.push_back(childIdx);
            ++plies;
            if (ws.sim.terminal && !ws.arena[static_cast<size_t>(childIdx)].terminal) {
                Node& child = ws.arena[static_cast<size_t>(childIdx)];
                child.terminal = true;
                child.terminalValue = static_cast<float>(terminal_value(ws.sim, player));
            }
            nodeIdx = childIdx;
        }

        for (int32_t idx : ws.path) {
            Node& n = ws.arena[static_cast<size_t>(idx)];
            n.visits++;
            n.valueSum += value;
        }
    }

    // Assemble the root player's joint action: follow max-visit children
    // through the first assignment round, then fill anything the tree never
    // reached with playout-policy commands.
    PlayerAction result;
    std::array<bool, kMaxUnits> assigned{};

    size_t pos = 0;
    int32_t nodeIdx = 0;
    while (pos < ws.rootPending.size()) {
        const Node& n = ws.arena[static_cast<size_t>(nodeIdx)];
        if (n.terminal || n.childCount <= 0) break;
        int32_t best = -1;
        int32_t bestVisits = 0;
        for (int k = 0; k < n.childCount; ++k) {
            const Node& c = ws.arena[static_cast<size_t>(n.firstChild + k)];
            if (best < 0 || c.visits > bestVisits) {
                best = n.firstChild + k;
                bestVisits = c.visits;
            }
        }
        if (best < 0 || bestVisits == 0) break;
        if (ws.rootPending[pos].player == player) {
            result.commands.push_back(ws.arena[static_cast<size_t>(best)].cmd);
            assigned[pos] = true;
        }
        ++pos;
        nodeIdx = best;
    }
    for (size_t i = 0; i < ws.rootPending.size(); ++i) {
        if (ws.rootPending[i].player != player || assigned[i]) continue;
        const Unit* u = s.unit_by_id(ws.rootPending[i].unitId);
        if (!u) continue;
        result.commands.push_back(random_command(s, *u, rights, rng, ws.scratch));
    }
    return result;
}

PlayerAction RushAgent::choose_action(const GameState& s, int player) {
    PlayerAction action;
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        if (u.owner != player || u.busy()) continue;
        const UnitType& t = s.type_of(u);
        if (t.isStructure || t.damage < 1) continue;

        const Unit* target = nullptr;
        int bestDist = 0;
        for (int j = 0; j < s.unitCount; ++j) {
            const Unit& v = s.units[static_cast<size_t>(j)];
            if (v.owner == player) continue;
            int d = std::max(std::abs(u.x - v.x), std::abs(u.y - v.y));
            if (!target || d < bestDist) {
                target = &v;
                bestDist = d;
            }
        }
        if (!target) continue;

        if (bestDist <= t.attackRange) {
            action.commands.push_back({u.id, CommandKind::Attack, Dir::Up, target->id});
            continue;
        }
        // walk toward the target, larger axis first
        int dx = target->x - u.x;
        int dy = target->y - u.y;
        Dir first = std::abs(dx) >= std::abs(dy) ? (dx > 0 ? Dir::Right : Dir::Left)
                                                 : (dy > 0 ? Dir::Down : Dir::Up);
        Dir second = std::abs(dx) >= std::abs(dy) ? (dy > 0 ? Dir::Down : (dy < 0 ? Dir::Up : first))
                                                  : (dx > 0 ? Dir::Right : (dx < 0 ? Dir::Left : first));
        for (Dir d : {first, second}) {
            int nx = u.x + kDirDx[static_cast<int>(d)];
            int ny = u.y + kDirDy[static_cast<int>(d)];
            if (s.cell_free(nx, ny)) {
                action.commands.push_back({u.id, CommandKind::Move, d, -1});
                break;
            }
        }
    }
    return action;
}

PlayerAction BuilderAgent::choose_action(const GameState& s, int player) {
    PlayerAction action;
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        if (u.owner != player || u.busy()) continue;
        const UnitType& t = s.type_of(u);
        bool canMake = false;
        for (int p : t.produces) canMake |= (p == typeId_);
        if (!canMake) continue;
        if (s.resources[static_cast<size_t>(player)] <
            (*s.types)[static_cast<size_t>(typeId_)].cost)
            continue;
        for (int d = 0; d < 4; ++d) {
            if (s.cell_free(u.x + kDirDx[d], u.y + kDirDy[d])) {
                action.commands.push_back(
                    {u.id, CommandKind::Produce, static_cast<Dir>(d), typeId_});
                break;
            }
        }
    }
    return action;
}

PlayerAction RandomAgent::choose_action(const GameState& s, int player) {
    PlayerAction action;
    std::vector<Command> scratch;
    for (int i = 0; i < s.unitCount; ++i) {
        const Unit& u = s.units[static_cast<size_t>(i)];
        if (u.owner != player || u.busy()) continue;
        unit_commands(s, u, scratch);
        action.commands.push_back(scratch[rng_.below(scratch.size())]);
    }
    return action;
}

}  // namespace rtsgen
