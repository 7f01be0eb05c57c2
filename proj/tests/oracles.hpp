#ifndef REMRES_TESTS_ORACLES_HPP
#define REMRES_TESTS_ORACLES_HPP

// From-scratch reference implementations the tests compare the library
// against. Everything here trades speed for obviousness: plain scans over
// the raw event vector, boolean closure by Floyd-Warshall, explicit
// depth-first chain enumeration. None of it shares code with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "remres/event_history.hpp"
#include "remres/model.hpp"

namespace oracle {

using remres::Event;
using remres::NodeId;
using remres::StatisticSpec;
using remres::StatKind;

// One dyadic statistic evaluated directly off the raw history. Diagonal is 0
// by convention, matching the library's matrices.
inline double statistic(const std::vector<Event>& past, int n,
                        const StatisticSpec& spec, NodeId i, NodeId j)
{
    if (i == j)
        return 0.0;
    (void)n;
    switch (spec.kind) {
    case StatKind::Intercept:
        return 1.0;
    case StatKind::CovSnd:
        return spec.covariate.at(static_cast<std::size_t>(i));
    case StatKind::CovRec:
        return spec.covariate.at(static_cast<std::size_t>(j));
    case StatKind::PShiftAbBa: {
        if (past.empty())
            return 0.0;
        const Event& e = past.back();
        return (i == e.receiver && j == e.sender) ? 1.0 : 0.0;
    }
    case StatKind::PShiftAbBy: {
        if (past.empty())
            return 0.0;
        const Event& e = past.back();
        return (i == e.receiver && j != e.sender && j != e.receiver) ? 1.0 : 0.0;
    }
    case StatKind::PShiftAbXa: {
        if (past.empty())
            return 0.0;
        const Event& e = past.back();
        return (i != e.sender && i != e.receiver && j == e.sender) ? 1.0 : 0.0;
    }
    case StatKind::PShiftAbXb: {
        if (past.empty())
            return 0.0;
        const Event& e = past.back();
        return (i != e.sender && i != e.receiver && j == e.receiver) ? 1.0 : 0.0;
    }
    case StatKind::PShiftAbAy: {
        if (past.empty())
            return 0.0;
        const Event& e = past.back();
        return (i == e.sender && j != e.sender && j != e.receiver) ? 1.0 : 0.0;
    }
    case StatKind::RecencySend: {
        // Distinct receivers of i's calls, most recent first, by walking the
        // history backwards.
        std::vector<NodeId> seen;
        for (auto it = past.rbegin(); it != past.rend(); ++it) {
            if (it->sender != i)
                continue;
            if (std::find(seen.begin(), seen.end(), it->receiver) == seen.end())
                seen.push_back(it->receiver);
        }
        for (std::size_t r = 0; r < seen.size(); ++r)
            if (seen[r] == j)
                return 1.0 / static_cast<double>(r + 1);
        return 0.0;
    }
    case StatKind::RecencyReceive: {
        // Distinct senders of calls received by i, most recent first.
        std::vector<NodeId> seen;
        for (auto it = past.rbegin(); it != past.rend(); ++it) {
            if (it->receiver != i)
                continue;
            if (std::find(seen.begin(), seen.end(), it->sender) == seen.end())
                seen.push_back(it->sender);
        }
        for (std::size_t r = 0; r < seen.size(); ++r)
            if (seen[r] == j)
                return 1.0 / static_cast<double>(r + 1);
        return 0.0;
    }
    case StatKind::Inertia: {
        long long to_j = 0;
        long long total = 0;
        for (const Event& e : past) {
            if (e.sender != i)
                continue;
            ++total;
            if (e.receiver == j)
                ++to_j;
        }
        return total == 0 ? 0.0 : static_cast<double>(to_j) / static_cast<double>(total);
    }
    case StatKind::TotalDegreeRec: {
        if (past.empty())
            return 0.0;
        long long deg = 0;
        for (const Event& e : past)
            if (e.sender == j || e.receiver == j)
                ++deg;
        return static_cast<double>(deg) / (2.0 * static_cast<double>(past.size()));
    }
    }
    return 0.0;
}

// Exhaustive time-respecting reachability by depth-first chain walking:
// from each living u, follow every event sent by u, then every strictly
// later event whose sender is the previous receiver, recording each living
// node the chain lands on. Removed nodes may relay (the chain condition only
// matches receiver to next sender) but are never sources or counted targets.
// Returns row-major n*n, entry (u,v) = 1 iff u reaches v.
inline std::vector<char> forward_reach(const std::vector<Event>& events, int n,
                                       const std::vector<char>& removed)
{
    const std::size_t m = events.size();
    std::vector<char> reach(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (NodeId u = 0; u < n; ++u) {
        if (removed[static_cast<std::size_t>(u)])
            continue;
        // seen[x][k]: chain already continued from node x at event cursor k
        std::vector<char> seen(static_cast<std::size_t>(n) * (m + 1), 0);
        std::vector<std::pair<NodeId, std::size_t>> stack;
        stack.emplace_back(u, 0);
        while (!stack.empty()) {
            const auto [x, from] = stack.back();
            stack.pop_back();
            for (std::size_t k = from; k < m; ++k) {
                if (events[k].sender != x)
                    continue;
                const NodeId r = events[k].receiver;
                if (r != u && !removed[static_cast<std::size_t>(r)])
                    reach[static_cast<std::size_t>(u) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(r)] = 1;
                char& mark = seen[static_cast<std::size_t>(r) * (m + 1) + (k + 1)];
                if (!mark) {
                    mark = 1;
                    stack.emplace_back(r, k + 1);
                }
            }
        }
    }
    return reach;
}

// Static directed reachability on the aggregated graph (event order
// ignored): boolean transitive closure over "sent at least once" ties.
inline std::vector<char> static_directed_reach(const std::vector<Event>& events, int n,
                                               const std::vector<char>& removed)
{
    std::vector<char> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (const Event& e : events)
        adj[static_cast<std::size_t>(e.sender) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(e.receiver)] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (adj[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(k)] &&
                    adj[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(j)])
                    adj[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = 1;
    std::vector<char> reach(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v && !removed[static_cast<std::size_t>(u)] &&
                !removed[static_cast<std::size_t>(v)] &&
                adj[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)])
                reach[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = 1;
    return reach;
}

// Per-node total (in + out) call counts over a slice of events.
inline std::vector<double> volumes(const std::vector<Event>& events, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (const Event& e : events) {
        v[static_cast<std::size_t>(e.sender)] += 1.0;
        v[static_cast<std::size_t>(e.receiver)] += 1.0;
    }
    return v;
}

inline double theil(const std::vector<double>& xs)
{
    double mu = 0.0;
    for (double x : xs)
        mu += x;
    mu /= static_cast<double>(xs.size());
    double t = 0.0;
    for (double x : xs)
        if (x > 0.0)
            t += (x / mu) * std::log(x / mu);
    return t / static_cast<double>(xs.size());
}

// Dichotomized directed adjacency from a slice of events.
inline std::vector<char> adjacency(const std::vector<Event>& events, int n)
{
    std::vector<char> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (const Event& e : events)
        adj[static_cast<std::size_t>(e.sender) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(e.receiver)] = 1;
    return adj;
}

inline double connectedness(const std::vector<char>& adj, int n)
{
    // Undirected closure by Floyd-Warshall, then count joined pairs.
    std::vector<char> c(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (adj[static_cast<std::size_t>(i) * n + j] ||
                           adj[static_cast<std::size_t>(j) * n + i]))
                c[static_cast<std::size_t>(i) * n + j] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && c[static_cast<std::size_t>(i) * n + k] &&
                    c[static_cast<std::size_t>(k) * n + j])
                    c[static_cast<std::size_t>(i) * n + j] = 1;
    long long joined = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (c[static_cast<std::size_t>(i) * n + j])
                ++joined;
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    return static_cast<double>(joined) / static_cast<double>(pairs);
}

inline double centralization(const std::vector<char>& adj, int n)
{
    // Total degree on the dichotomized symmetrized graph.
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (adj[static_cast<std::size_t>(i) * n + j] ||
                           adj[static_cast<std::size_t>(j) * n + i]))
                ++deg[static_cast<std::size_t>(i)];
    const int dmax = *std::max_element(deg.begin(), deg.end());
    double sum = 0.0;
    for (int d : deg)
        sum += static_cast<double>(dmax - d);
    return sum / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

inline double density(const std::vector<char>& adj, int n)
{
    long long ties = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && adj[static_cast<std::size_t>(i) * n + j])
                ++ties;
    return static_cast<double>(ties) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double isolate_fraction(const std::vector<Event>& events, int n)
{
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    for (const Event& e : events) {
        touched[static_cast<std::size_t>(e.sender)] = 1;
        touched[static_cast<std::size_t>(e.receiver)] = 1;
    }
    int isolates = 0;
    for (int i = 0; i < n; ++i)
        if (!touched[static_cast<std::size_t>(i)])
            ++isolates;
    return static_cast<double>(isolates) / static_cast<double>(n);
}

} // namespace oracle

#endif
