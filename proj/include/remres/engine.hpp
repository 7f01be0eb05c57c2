#ifndef REMRES_ENGINE_HPP
#define REMRES_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "remres/event_history.hpp"
#include "remres/model.hpp"
#include "remres/rng.hpp"

namespace remres {

// Incrementally maintained sufficient-statistic caches over a growing event
// history. Confined to one replicate; never shared across threads.
class SimState {
public:
    SimState(std::shared_ptr<const Roster> roster,
             const std::vector<Event>& prefix,
             std::vector<NodeId> removed = {});

    void append(const Event& e);

    int n() const { return n_; }
    const Roster& roster() const { return *roster_; }
    std::shared_ptr<const Roster> roster_ptr() const { return roster_; }
    const std::vector<Event>& history() const { return history_; }
    std::size_t event_count() const { return history_.size(); }

    bool has_last() const { return !history_.empty(); }
    const Event& last() const { return history_.back(); }

    long long dyad_count(NodeId i, NodeId j) const
    {
        return dyad_counts_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
    }
    long long out_count(NodeId i) const { return out_counts_[static_cast<std::size_t>(i)]; }
    long long in_count(NodeId i) const { return in_counts_[static_cast<std::size_t>(i)]; }

    // Distinct past receivers of i's calls, most recent first.
    const std::vector<NodeId>& recent_receivers(NodeId i) const
    {
        return recv_lists_[static_cast<std::size_t>(i)];
    }
    // Distinct past senders of calls received by i, most recent first.
    const std::vector<NodeId>& recent_senders(NodeId i) const
    {
        return send_lists_[static_cast<std::size_t>(i)];
    }

    bool is_removed(NodeId i) const { return removed_mask_[static_cast<std::size_t>(i)] != 0; }
    const std::vector<NodeId>& removed() const { return removed_; }
    int living_count() const { return n_ - static_cast<int>(removed_.size()); }

private:
    std::shared_ptr<const Roster> roster_;
    int n_;
    std::vector<Event> history_;
    std::vector<long long> dyad_counts_; // n*n, row-major
    std::vector<long long> out_counts_;
    std::vector<long long> in_counts_;
    std::vector<std::vector<NodeId>> recv_lists_;
    std::vector<std::vector<NodeId>> send_lists_;
    std::vector<NodeId> removed_;
    std::vector<char> removed_mask_;
};

// n x n nonnegative rates, zero diagonal, zero rows for incapacitated
// senders.
struct RateMatrix {
    int n = 0;
    std::vector<double> lambda; // row-major
    double total = 0.0;

    double at(NodeId i, NodeId j) const
    {
        return lambda[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
    }
};

// Counters surfaced to callers that want to report on a run.
struct EngineDiag {
    std::uint64_t exponent_clamps = 0;
};

// One statistic evaluated for every ordered dyad, on the history strictly
// before the next event. Row-major n*n, diagonal zero.
std::vector<double> dyad_statistics(const SimState& state, const StatisticSpec& spec);

// Adds scale * u_spec into eta (row-major n*n). Shared by dyad_statistics
// and the rate assembly loop.
void accumulate_statistic(const SimState& state, const StatisticSpec& spec,
                          double scale, std::vector<double>& eta);

RateMatrix event_rates(const SimState& state, const ModelSpec& model,
                       EngineDiag* diag = nullptr);

// Allocation-free variant for the simulation loop; eta is scratch.
void event_rates_into(const SimState& state, const ModelSpec& model,
                      RateMatrix& out, std::vector<double>& eta,
                      EngineDiag* diag = nullptr);

// Draws dyad (i,j) with probability lambda(i,j) / total. Throws
// SimulationError on an all-zero matrix ("network dead").
Event sample_next_event(const RateMatrix& rates, rng::Engine& eng);

// Continues the prefix by n_events sampled events under the model, with the
// removed nodes structurally unable to send (their receiver side stays
// open: calling the dead is allowed). Deterministic in (model, prefix,
// removed, seed).
EventHistory simulate_sequence(const ModelSpec& model, const EventHistory& prefix,
                               std::size_t n_events, std::vector<NodeId> removed,
                               rng::Engine& eng, EngineDiag* diag = nullptr);

// Sum over events at index >= from_index of log lambda(e) - log sum of
// allowed rates, each evaluated on the pre-event state.
double ordinal_log_likelihood(const ModelSpec& model, const EventHistory& h,
                              std::vector<NodeId> removed, std::size_t from_index);

} // namespace remres

#endif
