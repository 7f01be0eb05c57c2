#include "remres/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "remres/errors.hpp"

namespace remres {

const std::vector<std::string> kMetricNames = {
    "theil",     "connectedness", "centralization", "density",     "isolates",
    "call_loss", "reach_frac",    "reach_count",    "reserve_use", "reserve_balance"};

std::optional<double> metric_value(const MetricVector& m, const std::string& name)
{
    if (name == "theil") return m.theil;
    if (name == "connectedness") return m.connectedness;
    if (name == "centralization") return m.centralization;
    if (name == "density") return m.density;
    if (name == "isolates") return m.isolate_fraction;
    if (name == "call_loss") return m.call_loss;
    if (name == "reach_frac") return m.reach_fraction_mean;
    if (name == "reach_count") return m.reach_count_mean;
    if (name == "reserve_use") return m.reserve_use;
    if (name == "reserve_balance") return m.reserve_balance;
    throw ValidationError("unknown metric '" + name + "'");
}

double theil_index(std::span<const double> volumes)
{
    if (volumes.empty())
        throw ValidationError("Theil index needs at least one volume");
    double sum = 0.0;
    for (double x : volumes) {
        if (x < 0.0 || !std::isfinite(x))
            throw ValidationError("Theil index needs finite nonnegative volumes");
        sum += x;
    }
    if (sum <= 0.0)
        throw ValidationError("Theil index undefined for all-zero volumes");
    const double mu = sum / static_cast<double>(volumes.size());
    double t = 0.0;
    for (double x : volumes) {
        if (x > 0.0) {
            const double r = x / mu;
            t += r * std::log(r);
        }
    }
    return t / static_cast<double>(volumes.size());
}

namespace {

// Connected components of the underlying undirected graph of nonzero ties.
std::vector<int> undirected_components(const WeightedDigraph& g)
{
    const int n = g.n();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> stack;
    int next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] != -1)
            continue;
        comp[static_cast<std::size_t>(s)] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v = 0; v < n; ++v) {
                if (comp[static_cast<std::size_t>(v)] == -1 &&
                    (g.count(u, v) > 0 || g.count(v, u) > 0)) {
                    comp[static_cast<std::size_t>(v)] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

} // namespace

double krackhardt_connectedness(const WeightedDigraph& g)
{
    const int n = g.n();
    if (n < 2)
        throw ValidationError("connectedness needs at least 2 nodes");
    const std::vector<int> comp = undirected_components(g);
    const int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
    std::vector<long long> sizes(static_cast<std::size_t>(ncomp), 0);
    for (int c : comp)
        ++sizes[static_cast<std::size_t>(c)];
    long long joined = 0;
    for (long long s : sizes)
        joined += s * (s - 1) / 2;
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    return static_cast<double>(joined) / static_cast<double>(pairs);
}

double degree_centralization(const WeightedDigraph& g)
{
    const int n = g.n();
    if (n < 3)
        throw ValidationError("degree centralization needs at least 3 nodes");
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (g.count(i, j) > 0 || g.count(j, i) > 0) {
                ++deg[static_cast<std::size_t>(i)];
                ++deg[static_cast<std::size_t>(j)];
            }
    const int dmax = *std::max_element(deg.begin(), deg.end());
    long long gap = 0;
    for (int d : deg)
        gap += dmax - d;
    return static_cast<double>(gap) /
           (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

double graph_density(const WeightedDigraph& g)
{
    const int n = g.n();
    if (n < 2)
        throw ValidationError("density needs at least 2 nodes");
    long long ties = 0;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j && g.count(i, j) > 0)
                ++ties;
    return static_cast<double>(ties) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

double isolate_fraction(const WeightedDigraph& g)
{
    const int n = g.n();
    if (n < 1)
        throw ValidationError("isolate fraction needs a nonempty roster");
    int isolates = 0;
    for (NodeId i = 0; i < n; ++i) {
        bool touched = false;
        for (NodeId j = 0; j < n && !touched; ++j)
            touched = g.count(i, j) > 0 || g.count(j, i) > 0;
        if (!touched)
            ++isolates;
    }
    return static_cast<double>(isolates) / static_cast<double>(n);
}

namespace {

IndexWindow post_window(const EventHistory& h, const RemovalPlan& plan)
{
    if (plan.attack_index > h.size())
        throw ValidationError("attack index " + std::to_string(plan.attack_index) +
                              " past history size " + std::to_string(h.size()));
    return {plan.attack_index, h.size()};
}

} // namespace

double call_loss_fraction(const EventHistory& h, const RemovalPlan& plan)
{
    const IndexWindow w = post_window(h, plan);
    if (w.begin == w.end)
        throw ValidationError("call loss undefined: empty post-attack window");
    const std::vector<char> mask = plan.removed_mask(h.roster().size());
    std::size_t lost = 0;
    for (std::size_t k = w.begin; k < w.end; ++k)
        if (mask[static_cast<std::size_t>(h.events()[k].receiver)])
            ++lost;
    return static_cast<double>(lost) / static_cast<double>(w.end - w.begin);
}

std::vector<LossBucket> call_loss_curve(const EventHistory& h, const RemovalPlan& plan,
                                        std::size_t bucket_size)
{
    if (bucket_size == 0)
        throw ValidationError("bucket size must be positive");
    const IndexWindow w = post_window(h, plan);
    const std::vector<char> mask = plan.removed_mask(h.roster().size());
    std::vector<LossBucket> curve;
    for (std::size_t k = w.begin; k < w.end; ++k) {
        const std::size_t offset = k - w.begin;
        if (offset % bucket_size == 0)
            curve.push_back({offset, 0, 0});
        LossBucket& b = curve.back();
        ++b.events;
        if (mask[static_cast<std::size_t>(h.events()[k].receiver)])
            ++b.lost;
    }
    return curve;
}

std::vector<char> forward_reach_matrix(const EventHistory& h, const RemovalPlan& plan)
{
    const int n = h.roster().size();
    const IndexWindow w = post_window(h, plan);
    const std::vector<char> removed = plan.removed_mask(n);
    const int living = n - static_cast<int>(plan.removed.size());
    if (living < 2)
        throw ValidationError("forward reachability needs at least 2 living nodes");

    // sources[x] holds the living nodes with a time-respecting chain from one
    // of their own sends to a call received by x, as a bitmask over nodes.
    const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
    std::vector<std::uint64_t> sources(static_cast<std::size_t>(n) * words, 0);
    const auto row = [&](NodeId x) { return sources.begin() + static_cast<std::size_t>(x) * words; };

    for (std::size_t k = w.begin; k < w.end; ++k) {
        const Event& e = h.events()[k];
        auto src = row(e.sender);
        auto dst = row(e.receiver);
        for (std::size_t wd = 0; wd < words; ++wd)
            dst[wd] |= src[wd];
        if (!removed[static_cast<std::size_t>(e.sender)])
            dst[static_cast<std::size_t>(e.sender) / 64] |=
                std::uint64_t{1} << (static_cast<std::size_t>(e.sender) % 64);
    }

    // reach(u) = {x : u in sources[x]}, restricted to living targets, u excluded.
    std::vector<char> reach(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (NodeId x = 0; x < n; ++x) {
        if (removed[static_cast<std::size_t>(x)])
            continue;
        auto src = row(x);
        for (NodeId u = 0; u < n; ++u)
            if (u != x && (src[static_cast<std::size_t>(u) / 64] >>
                           (static_cast<std::size_t>(u) % 64)) & 1)
                reach[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(x)] = 1;
    }
    return reach;
}

ReachStats forward_reachability(const EventHistory& h, const RemovalPlan& plan)
{
    const int n = h.roster().size();
    const std::vector<char> reach = forward_reach_matrix(h, plan);
    const std::vector<char> removed = plan.removed_mask(n);
    const int living = n - static_cast<int>(plan.removed.size());

    double frac_sum = 0.0;
    double count_sum = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        if (removed[static_cast<std::size_t>(u)])
            continue;
        long long c = 0;
        for (NodeId v = 0; v < n; ++v)
            c += reach[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(v)];
        count_sum += static_cast<double>(c);
        frac_sum += static_cast<double>(c) / static_cast<double>(living - 1);
    }
    return {frac_sum / static_cast<double>(living), count_sum / static_cast<double>(living)};
}

namespace {

struct ActivitySplit {
    std::vector<char> sent_before; // any send in the prefix window
    std::vector<char> sent_after;  // any send in the post-attack window
};

ActivitySplit split_activity(const EventHistory& full, const RemovalPlan& plan)
{
    const int n = full.roster().size();
    ActivitySplit a{std::vector<char>(static_cast<std::size_t>(n), 0),
                    std::vector<char>(static_cast<std::size_t>(n), 0)};
    const IndexWindow w = post_window(full, plan);
    for (std::size_t k = 0; k < full.size(); ++k) {
        const NodeId s = full.events()[k].sender;
        (k < w.begin ? a.sent_before : a.sent_after)[static_cast<std::size_t>(s)] = 1;
    }
    return a;
}

} // namespace

std::optional<double> reserve_use(const EventHistory& full, const RemovalPlan& plan)
{
    const int n = full.roster().size();
    const std::vector<char> removed = plan.removed_mask(n);
    const ActivitySplit a = split_activity(full, plan);
    int reserves = 0;
    int activated = 0;
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        if (removed[s] || a.sent_before[s])
            continue;
        ++reserves;
        if (a.sent_after[s])
            ++activated;
    }
    if (reserves == 0)
        return std::nullopt;
    return static_cast<double>(activated) / static_cast<double>(reserves);
}

std::optional<double> reserve_balance(const EventHistory& full, const RemovalPlan& plan)
{
    const int n = full.roster().size();
    const std::vector<char> removed = plan.removed_mask(n);
    const ActivitySplit a = split_activity(full, plan);
    int n_inactive = 0, s_inactive = 0; // silent in prefix; of those, send later
    int n_active = 0, s_active = 0;     // sent in prefix; of those, go silent
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        if (removed[s])
            continue;
        if (a.sent_before[s]) {
            ++n_active;
            if (!a.sent_after[s])
                ++s_active;
        } else {
            ++n_inactive;
            if (a.sent_after[s])
                ++s_inactive;
        }
    }
    if (n_inactive == 0 || n_active == 0)
        return std::nullopt;
    return static_cast<double>(s_inactive) / static_cast<double>(n_inactive) -
           static_cast<double>(s_active) / static_cast<double>(n_active);
}

MetricVector compute_metrics(const EventHistory& full, const RemovalPlan& plan)
{
    const IndexWindow w = post_window(full, plan);
    if (w.begin == w.end)
        throw ValidationError("metrics undefined: empty post-attack window");
    const WeightedDigraph g = aggregate_network(full, w);
    const int n = g.n();

    std::vector<double> volumes(static_cast<std::size_t>(n), 0.0);
    for (NodeId i = 0; i < n; ++i)
        volumes[static_cast<std::size_t>(i)] = static_cast<double>(g.volume(i));

    MetricVector m;
    m.theil = theil_index(volumes);
    m.connectedness = krackhardt_connectedness(g);
    if (n >= 3)
        m.centralization = degree_centralization(g);
    m.density = graph_density(g);
    m.isolate_fraction = isolate_fraction(g);
    m.call_loss = call_loss_fraction(full, plan);
    const ReachStats reach = forward_reachability(full, plan);
    m.reach_fraction_mean = reach.fraction_mean;
    m.reach_count_mean = reach.count_mean;
    m.reserve_use = reserve_use(full, plan);
    m.reserve_balance = reserve_balance(full, plan);
    return m;
}

} // namespace remres
