#include "remres/event_history.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "remres/csvio.hpp"
#include "remres/errors.hpp"

namespace remres {

// --- Roster ----------------------------------------------------------------

Roster::Roster(std::string network_name, bool specialist,
               std::vector<std::string> labels, std::vector<char> icr_flags)
    : name_(std::move(network_name))
    , specialist_(specialist)
    , labels_(std::move(labels))
    , icr_flags_(std::move(icr_flags))
{
    if (labels_.size() < 2)
        throw ValidationError("roster needs at least 2 nodes, got " +
                              std::to_string(labels_.size()));
    if (icr_flags_.size() != labels_.size())
        throw ValidationError("roster ICR flag count does not match label count");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto& label = labels_[i];
        if (label.empty())
            throw ValidationError("empty node label at roster position " + std::to_string(i));
        if (label.find_first_of(",\r\n") != std::string::npos)
            throw ValidationError("node label contains a delimiter: '" + label + "'");
        if (!index_.emplace(label, static_cast<NodeId>(i)).second)
            throw ValidationError("duplicate label '" + label + "' in roster");
    }
}

int Roster::icr_count() const
{
    return static_cast<int>(std::count(icr_flags_.begin(), icr_flags_.end(), char(1)));
}

std::optional<NodeId> Roster::find(std::string_view label) const
{
    auto it = index_.find(std::string(label));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

NodeId Roster::require(std::string_view label) const
{
    auto id = find(label);
    if (!id)
        throw ValidationError("unknown node label '" + std::string(label) + "' in network '" +
                              name_ + "'");
    return *id;
}

// --- EventHistory ----------------------------------------------------------

EventHistory::EventHistory(std::shared_ptr<const Roster> roster, std::vector<Event> events)
    : roster_(std::move(roster))
    , events_(std::move(events))
{
    if (!roster_)
        throw ValidationError("event history needs a roster");
    const int n = roster_->size();
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const Event& e = events_[k];
        if (e.sender < 0 || e.sender >= n || e.receiver < 0 || e.receiver >= n)
            throw ValidationError("event " + std::to_string(k) + " references a node outside the roster");
        if (e.sender == e.receiver)
            throw ValidationError("self-loop at event " + std::to_string(k));
    }
}

// --- WeightedDigraph -------------------------------------------------------

WeightedDigraph::WeightedDigraph(int n, IndexWindow window)
    : n_(n)
    , window_(window)
    , counts_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0)
{
}

long long WeightedDigraph::total() const
{
    long long t = 0;
    for (long long c : counts_)
        t += c;
    return t;
}

long long WeightedDigraph::volume(NodeId i) const
{
    long long v = 0;
    for (NodeId j = 0; j < n_; ++j) {
        v += count(i, j);
        v += count(j, i);
    }
    return v;
}

// --- parsing ---------------------------------------------------------------

namespace {

std::string lower(std::string s)
{
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

namespace {

// Drop `#` provenance/comment lines so written artifacts read back cleanly.
std::vector<std::string> content_lines(std::string_view csv_text)
{
    std::vector<std::string> lines;
    for (auto& line : csv::split_lines(csv_text)) {
        if (!line.empty() && line[0] == '#')
            continue;
        lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace

Roster parse_roster(std::string_view csv_text, std::string network_name, bool specialist)
{
    const auto lines = content_lines(csv_text);
    if (lines.empty())
        throw ValidationError("empty roster file");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 2 || lower(header[0]) != "label" || lower(header[1]) != "icr")
        throw ValidationError("roster header must be 'label,icr'");

    std::vector<std::string> labels;
    std::vector<char> icr;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].empty())
            continue;
        const auto fields = csv::split_line(lines[k]);
        if (fields.size() != 2)
            throw ValidationError("roster line " + std::to_string(k + 1) + ": expected 2 fields");
        if (fields[1] != "0" && fields[1] != "1")
            throw ValidationError("roster line " + std::to_string(k + 1) +
                                  ": icr must be 0 or 1, got '" + fields[1] + "'");
        labels.push_back(fields[0]);
        icr.push_back(fields[1] == "1" ? 1 : 0);
    }
    return Roster(std::move(network_name), specialist, std::move(labels), std::move(icr));
}

std::string roster_sidecar_path(const std::string& roster_path)
{
    const std::string suffix = ".csv";
    if (roster_path.size() > suffix.size() &&
        roster_path.compare(roster_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return roster_path.substr(0, roster_path.size() - suffix.size()) + ".meta.json";
    return roster_path + ".meta.json";
}

std::shared_ptr<const Roster> load_roster(const std::string& path)
{
    const std::string csv_text = csv::read_file(path);
    const std::string meta_path = roster_sidecar_path(path);
    std::string name;
    bool specialist = false;
    try {
        const auto meta = nlohmann::json::parse(csv::read_file(meta_path));
        name = meta.at("name").get<std::string>();
        specialist = meta.at("specialist").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad roster metadata " + meta_path + ": " + e.what());
    }
    return std::make_shared<Roster>(parse_roster(csv_text, name, specialist));
}

EventHistory parse_event_log(std::string_view csv_text, std::shared_ptr<const Roster> roster)
{
    const auto lines = content_lines(csv_text);
    if (lines.empty())
        throw ValidationError("empty event log");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 3 || lower(header[0]) != "index" || lower(header[1]) != "sender" ||
        lower(header[2]) != "receiver")
        throw ValidationError("event log header must be 'index,sender,receiver[,time]'");
    if (lines.size() < 2)
        throw ValidationError("event log has no events");

    struct RawEvent {
        std::string sender, receiver;
    };
    std::vector<RawEvent> raw;
    raw.reserve(lines.size() - 1);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].empty())
            continue;
        const auto fields = csv::split_line(lines[k]);
        if (fields.size() < 3 || fields.size() > 4)
            throw ValidationError("event line " + std::to_string(k + 1) + ": expected 3 or 4 fields");
        const long long idx = csv::parse_int(fields[0]);
        if (idx != static_cast<long long>(raw.size()))
            throw ValidationError("event line " + std::to_string(k + 1) + ": index " +
                                  std::to_string(idx) + " is not consecutive (expected " +
                                  std::to_string(raw.size()) + ")");
        if (fields[1] == fields[2])
            throw ValidationError("self-loop at event index " + std::to_string(idx) + " (" +
                                  fields[1] + " -> " + fields[2] + ")");
        raw.push_back({fields[1], fields[2]});
    }
    if (raw.empty())
        throw ValidationError("event log has no events");

    if (!roster) {
        // Discover labels in first-appearance order.
        std::vector<std::string> labels;
        std::unordered_map<std::string, NodeId> seen;
        for (const auto& e : raw) {
            for (const std::string* s : {&e.sender, &e.receiver}) {
                if (seen.emplace(*s, static_cast<NodeId>(labels.size())).second)
                    labels.push_back(*s);
            }
        }
        roster = std::make_shared<Roster>("", false, std::move(labels),
                                          std::vector<char>(seen.size(), 0));
    }

    std::vector<Event> events;
    events.reserve(raw.size());
    for (const auto& e : raw)
        events.push_back({roster->require(e.sender), roster->require(e.receiver)});
    return EventHistory(std::move(roster), std::move(events));
}

EventHistory load_event_log(const std::string& path, std::shared_ptr<const Roster> roster)
{
    return parse_event_log(csv::read_file(path), std::move(roster));
}

std::string serialize_event_log(const EventHistory& h)
{
    std::ostringstream os;
    os << "index,sender,receiver\n";
    const Roster& roster = h.roster();
    for (std::size_t k = 0; k < h.events().size(); ++k) {
        const Event& e = h.events()[k];
        os << k << ',' << roster.label(e.sender) << ',' << roster.label(e.receiver) << '\n';
    }
    return os.str();
}

// --- windows ---------------------------------------------------------------

WeightedDigraph aggregate_network(const EventHistory& h, IndexWindow window)
{
    if (window.begin > window.end)
        throw ValidationError("inverted aggregation window [" + std::to_string(window.begin) +
                              ", " + std::to_string(window.end) + ")");
    if (window.end > h.size())
        throw ValidationError("aggregation window end " + std::to_string(window.end) +
                              " past history size " + std::to_string(h.size()));
    WeightedDigraph g(h.roster().size(), window);
    for (std::size_t k = window.begin; k < window.end; ++k) {
        const Event& e = h.events()[k];
        ++g.count(e.sender, e.receiver);
    }
    return g;
}

std::size_t prefix_cut(std::size_t n_events, double fraction)
{
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw ValidationError("prefix fraction must lie in (0, 1)");
    const auto cut = static_cast<std::size_t>(
        std::floor(static_cast<double>(n_events) * fraction + 1e-9));
    if (cut == 0 || cut >= n_events)
        throw ValidationError("prefix of " + std::to_string(cut) + " of " +
                              std::to_string(n_events) +
                              " events leaves no room for a continuation");
    return cut;
}

std::pair<EventHistory, std::size_t> split_prefix(const EventHistory& h)
{
    if (h.size() < 2)
        throw ValidationError("history too short to split: " + std::to_string(h.size()) +
                              " events");
    const std::size_t attack_index = h.size() / 2;
    std::vector<Event> prefix(h.events().begin(),
                              h.events().begin() + static_cast<std::ptrdiff_t>(attack_index));
    return {EventHistory(h.roster_ptr(), std::move(prefix)), attack_index};
}

} // namespace remres
