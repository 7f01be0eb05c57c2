#ifndef REMRES_EVENT_HISTORY_HPP
#define REMRES_EVENT_HISTORY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace remres {

// Dense node index, 0..n-1 within one network. Labels live on the Roster.
using NodeId = std::int32_t;

// The node list for one network. Indices are dense and bijective with labels.
// The roster is authoritative for n: nodes that never communicate still exist
// (candidate reserves and isolates).
class Roster {
public:
    Roster(std::string network_name, bool specialist,
           std::vector<std::string> labels, std::vector<char> icr_flags);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(NodeId i) const { return labels_.at(static_cast<std::size_t>(i)); }
    bool is_icr(NodeId i) const { return icr_flags_.at(static_cast<std::size_t>(i)) != 0; }
    int icr_count() const;
    std::optional<NodeId> find(std::string_view label) const;
    NodeId require(std::string_view label) const; // throws ValidationError if unknown

    const std::string& network_name() const { return name_; }
    bool specialist() const { return specialist_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::string name_;
    bool specialist_;
    std::vector<std::string> labels_;
    std::vector<char> icr_flags_;
    std::unordered_map<std::string, NodeId> index_;
};

struct Event {
    NodeId sender;
    NodeId receiver;

    bool operator==(const Event&) const = default;
};

// Half-open interval of event indices.
struct IndexWindow {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// An ordered dyadic event sequence over a fixed roster. Ordinal time only:
// the event index is the clock. Immutable after construction; safe to share
// read-only across replicate workers.
class EventHistory {
public:
    EventHistory(std::shared_ptr<const Roster> roster, std::vector<Event> events);

    const Roster& roster() const { return *roster_; }
    std::shared_ptr<const Roster> roster_ptr() const { return roster_; }
    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

private:
    std::shared_ptr<const Roster> roster_;
    std::vector<Event> events_;
};

// Time-aggregated call-count matrix over a window of event indices.
class WeightedDigraph {
public:
    WeightedDigraph(int n, IndexWindow window);

    int n() const { return n_; }
    const IndexWindow& window() const { return window_; }
    long long count(NodeId i, NodeId j) const { return counts_[idx(i, j)]; }
    long long& count(NodeId i, NodeId j) { return counts_[idx(i, j)]; }
    long long total() const;
    // in + out call volume of one node
    long long volume(NodeId i) const;

private:
    std::size_t idx(NodeId i, NodeId j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_;
    IndexWindow window_;
    std::vector<long long> counts_;
};

// --- ingestion -------------------------------------------------------------

// Roster CSV `label,icr` with header. Metadata (network name, specialist
// flag) normally arrives via the JSON sidecar; see load_roster.
Roster parse_roster(std::string_view csv_text,
                    std::string network_name = "", bool specialist = false);

// Reads roster CSV plus its sidecar `<path minus .csv>.meta.json`
// containing {"name": ..., "specialist": ...}.
std::shared_ptr<const Roster> load_roster(const std::string& path);

std::string roster_sidecar_path(const std::string& roster_path);

// Event log CSV with header `index,sender,receiver[,time]`; the time column
// is accepted and ignored. With a roster, labels are cross-checked; without
// one, a roster is inferred from first appearance order.
EventHistory parse_event_log(std::string_view csv_text,
                             std::shared_ptr<const Roster> roster = nullptr);

EventHistory load_event_log(const std::string& path,
                            std::shared_ptr<const Roster> roster = nullptr);

std::string serialize_event_log(const EventHistory& h);

// --- windows ---------------------------------------------------------------

WeightedDigraph aggregate_network(const EventHistory& h, IndexWindow window);

// Number of events kept as the fixed prefix: floor(n_events * fraction),
// guarded against representation error. Throws unless both the prefix and
// the continuation end up nonempty.
std::size_t prefix_cut(std::size_t n_events, double fraction);

// First half of the history plus the attack index (= floor(|events| / 2)).
std::pair<EventHistory, std::size_t> split_prefix(const EventHistory& h);

} // namespace remres

#endif
