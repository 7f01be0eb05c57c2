#include "remres/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "remres/csvio.hpp"
#include "remres/errors.hpp"

namespace remres {

std::string_view attack_kind_name(AttackKind kind)
{
    switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::Degree: return "degree";
    case AttackKind::Icr: return "icr";
    case AttackKind::Combined: return "combined";
    case AttackKind::Random: return "random";
    }
    throw ValidationError("unknown attack kind");
}

AttackKind attack_kind_from_name(std::string_view name)
{
    if (name == "none") return AttackKind::None;
    if (name == "degree") return AttackKind::Degree;
    if (name == "icr") return AttackKind::Icr;
    if (name == "combined") return AttackKind::Combined;
    if (name == "random") return AttackKind::Random;
    throw ValidationError("unknown attack kind '" + std::string(name) +
                          "' (expected none|degree|icr|combined|random)");
}

bool RemovalPlan::is_removed(NodeId i) const
{
    return std::binary_search(removed.begin(), removed.end(), i);
}

std::vector<char> RemovalPlan::removed_mask(int n) const
{
    std::vector<char> mask(static_cast<std::size_t>(n), 0);
    for (NodeId i : removed) {
        if (i < 0 || i >= n)
            throw ValidationError("removal plan references node outside roster");
        mask[static_cast<std::size_t>(i)] = 1;
    }
    return mask;
}

nlohmann::json RemovalPlan::to_json(const Roster& roster) const
{
    nlohmann::json labels = nlohmann::json::array();
    for (NodeId i : removed)
        labels.push_back(roster.label(i));
    return nlohmann::json{{"kind", attack_kind_name(kind)},
                          {"fraction", fraction},
                          {"attack_index", attack_index},
                          {"removed", std::move(labels)},
                          {"seed", seed}};
}

RemovalPlan RemovalPlan::from_json(const nlohmann::json& j, const Roster& roster)
{
    if (!j.is_object())
        throw ValidationError("removal plan must be a JSON object");
    RemovalPlan plan;
    plan.kind = attack_kind_from_name(j.at("kind").get<std::string>());
    plan.fraction = j.at("fraction").get<double>();
    plan.attack_index = j.at("attack_index").get<std::size_t>();
    if (j.contains("seed"))
        plan.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& label : j.at("removed"))
        plan.removed.push_back(roster.require(label.get<std::string>()));
    std::sort(plan.removed.begin(), plan.removed.end());
    const auto dup = std::adjacent_find(plan.removed.begin(), plan.removed.end());
    if (dup != plan.removed.end())
        throw ValidationError("removal plan lists node '" + roster.label(*dup) + "' twice");
    return plan;
}

int target_count(double fraction, int n)
{
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ValidationError("removal fraction must be in (0, 1]");
    if (n < 2)
        throw ValidationError("need at least 2 nodes to attack");
    // Half-up rounding with a small guard so exact halves stored inexactly
    // (0.15 * 10) still round up.
    int m = static_cast<int>(std::floor(fraction * n + 0.5 + 1e-9));
    m = std::max(1, m);
    if (m >= n)
        throw ValidationError("removal fraction " + csv::format_double(fraction) +
                              " would incapacitate all " + std::to_string(n) + " nodes");
    return m;
}

namespace {

std::vector<long long> call_volumes(const EventHistory& h)
{
    std::vector<long long> vol(static_cast<std::size_t>(h.roster().size()), 0);
    for (const Event& e : h.events()) {
        ++vol[static_cast<std::size_t>(e.sender)];
        ++vol[static_cast<std::size_t>(e.receiver)];
    }
    return vol;
}

std::vector<NodeId> all_nodes(int n)
{
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ids[static_cast<std::size_t>(i)] = i;
    return ids;
}

// Random permutation followed by a stable sort on descending volume: equal
// volumes keep their shuffled order, so ties break uniformly at random.
void order_by_volume_desc(std::vector<NodeId>& ids, const std::vector<long long>& vol,
                          rng::Engine& eng)
{
    rng::shuffle(ids, eng);
    std::stable_sort(ids.begin(), ids.end(), [&vol](NodeId a, NodeId b) {
        return vol[static_cast<std::size_t>(a)] > vol[static_cast<std::size_t>(b)];
    });
}

} // namespace

RemovalPlan plan_attack(AttackKind kind, double fraction, const EventHistory& empirical,
                        std::size_t attack_index, rng::Engine& eng)
{
    const Roster& roster = empirical.roster();
    const int n = roster.size();

    RemovalPlan plan;
    plan.kind = kind;
    plan.fraction = fraction;
    plan.attack_index = attack_index;
    if (kind == AttackKind::None)
        return plan;

    const int m = target_count(fraction, n);
    std::vector<NodeId> order;

    switch (kind) {
    case AttackKind::Degree: {
        order = all_nodes(n);
        order_by_volume_desc(order, call_volumes(empirical), eng);
        break;
    }
    case AttackKind::Icr: {
        std::vector<NodeId> icrs, rest;
        for (NodeId i = 0; i < n; ++i)
            (roster.is_icr(i) ? icrs : rest).push_back(i);
        rng::shuffle(icrs, eng);
        rng::shuffle(rest, eng);
        order = std::move(icrs);
        order.insert(order.end(), rest.begin(), rest.end());
        break;
    }
    case AttackKind::Combined: {
        const std::vector<long long> vol = call_volumes(empirical);
        std::vector<NodeId> icrs, rest;
        for (NodeId i = 0; i < n; ++i)
            (roster.is_icr(i) ? icrs : rest).push_back(i);
        rng::shuffle(icrs, eng);
        order_by_volume_desc(rest, vol, eng);
        order = std::move(icrs);
        order.insert(order.end(), rest.begin(), rest.end());
        break;
    }
    case AttackKind::Random: {
        order = all_nodes(n);
        rng::shuffle(order, eng);
        break;
    }
    case AttackKind::None:
        break; // handled above
    }

    plan.removed.assign(order.begin(), order.begin() + m);
    std::sort(plan.removed.begin(), plan.removed.end());
    return plan;
}

} // namespace remres
