#ifndef REMRES_ATTACKS_HPP
#define REMRES_ATTACKS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "remres/event_history.hpp"
#include "remres/rng.hpp"

namespace remres {

enum class AttackKind { None, Degree, Icr, Combined, Random };

std::string_view attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(std::string_view name);

// The set of incapacitated nodes and the event index at which incapacitation
// takes effect.
struct RemovalPlan {
    AttackKind kind = AttackKind::None;
    double fraction = 0.0;
    std::size_t attack_index = 0;
    std::vector<NodeId> removed; // sorted ascending
    std::uint64_t seed = 0;      // rng seed used to draw the plan, for replay

    bool is_removed(NodeId i) const;
    std::vector<char> removed_mask(int n) const;

    nlohmann::json to_json(const Roster& roster) const;
    static RemovalPlan from_json(const nlohmann::json& j, const Roster& roster);
};

// Number of nodes removed at fraction k of n: max(1, round(k*n)) with
// half-up rounding. Throws if that would remove every node.
int target_count(double fraction, int n);

// Draws a removal plan for one replicate. Degree ranking uses total call
// volume over the full empirical history; ties and all random orderings come
// from the engine, so every replicate draws a fresh removal vector.
RemovalPlan plan_attack(AttackKind kind, double fraction,
                        const EventHistory& empirical, std::size_t attack_index,
                        rng::Engine& eng);

} // namespace remres

#endif
