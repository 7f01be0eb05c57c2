#ifndef REMRES_METRICS_HPP
#define REMRES_METRICS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "remres/attacks.hpp"
#include "remres/event_history.hpp"

namespace remres {

// One replicate's outcome battery, all computed on the post-attack window.
// Missing entries (empty reserve pool, n < 3 for centralization) propagate
// as absent values, never as zeros.
struct MetricVector {
    double theil = 0.0;
    double connectedness = 0.0;
    std::optional<double> centralization;
    double density = 0.0;
    double isolate_fraction = 0.0;
    double call_loss = 0.0;
    double reach_fraction_mean = 0.0;
    double reach_count_mean = 0.0;
    std::optional<double> reserve_use;
    std::optional<double> reserve_balance;
};

// Column order of the results CSV.
extern const std::vector<std::string> kMetricNames;
std::optional<double> metric_value(const MetricVector& m, const std::string& name);

// Theil inequality index of per-node volume: (1/N) sum (x/mu) ln(x/mu),
// with 0 ln 0 = 0. Throws on an all-zero vector.
double theil_index(std::span<const double> volumes);

// Fraction of unordered node pairs joined by a semipath.
double krackhardt_connectedness(const WeightedDigraph& g);

// Freeman total-degree centralization of the dichotomized, symmetrized
// graph: sum_i (d_max - d_i) / ((n-1)(n-2)). Requires n >= 3.
double degree_centralization(const WeightedDigraph& g);

double graph_density(const WeightedDigraph& g);

// Fraction of roster nodes with no sent or received calls in the window.
double isolate_fraction(const WeightedDigraph& g);

// Fraction of post-attack calls whose receiver is incapacitated.
double call_loss_fraction(const EventHistory& h, const RemovalPlan& plan);

struct LossBucket {
    std::size_t first_index = 0; // offset into the post-attack window
    std::size_t events = 0;
    std::size_t lost = 0;
};

// Post-attack call loss bucketed into fixed-size windows of events.
std::vector<LossBucket> call_loss_curve(const EventHistory& h, const RemovalPlan& plan,
                                        std::size_t bucket_size = 50);

struct ReachStats {
    double fraction_mean = 0.0;
    double count_mean = 0.0;
};

// Time-respecting forward reachability over post-attack events: node v is in
// reach(u) iff a chain of events with strictly increasing indices starts at
// a send by u and hands off receiver-to-sender until v receives. Sources and
// targets are restricted to living nodes.
ReachStats forward_reachability(const EventHistory& h, const RemovalPlan& plan);

// The underlying reach relation: row-major n*n, entry (u,v) nonzero iff
// living u reaches living v != u through such a chain.
std::vector<char> forward_reach_matrix(const EventHistory& h, const RemovalPlan& plan);

// Fraction of reserves (living nodes silent before the attack) that send in
// the post-attack window. Absent when there are no reserves.
std::optional<double> reserve_use(const EventHistory& full, const RemovalPlan& plan);

// s_i/n_i - s_a/n_a: activation of previously inactive nodes minus
// deactivation of previously active ones, both among living nodes. Absent
// when either group is empty.
std::optional<double> reserve_balance(const EventHistory& full, const RemovalPlan& plan);

// The whole battery for one simulated history, measured on events at and
// after the attack index.
MetricVector compute_metrics(const EventHistory& full, const RemovalPlan& plan);

} // namespace remres

#endif
