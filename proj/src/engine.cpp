#include "remres/engine.hpp"

#include <algorithm>
#include <cmath>

#include "remres/errors.hpp"

namespace remres {

namespace {

// Bound on theta . u before exponentiation. Statistics live in [0,1], so
// this only ever fires on pathological coefficient sets.
constexpr double kMaxExponent = 700.0;

std::vector<NodeId> checked_removed(std::vector<NodeId> removed, int n)
{
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    for (NodeId i : removed)
        if (i < 0 || i >= n)
            throw ValidationError("removed node index " + std::to_string(i) +
                                  " outside roster of size " + std::to_string(n));
    return removed;
}

// Move value to the front of a small most-recent-first list of distinct ids.
void touch_front(std::vector<NodeId>& list, NodeId value)
{
    auto it = std::find(list.begin(), list.end(), value);
    if (it != list.end())
        list.erase(it);
    list.insert(list.begin(), value);
}

} // namespace

// --- SimState --------------------------------------------------------------

SimState::SimState(std::shared_ptr<const Roster> roster, const std::vector<Event>& prefix,
                   std::vector<NodeId> removed)
    : roster_(std::move(roster))
    , n_(roster_->size())
    , dyad_counts_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0)
    , out_counts_(static_cast<std::size_t>(n_), 0)
    , in_counts_(static_cast<std::size_t>(n_), 0)
    , recv_lists_(static_cast<std::size_t>(n_))
    , send_lists_(static_cast<std::size_t>(n_))
    , removed_(checked_removed(std::move(removed), n_))
    , removed_mask_(static_cast<std::size_t>(n_), 0)
{
    for (NodeId i : removed_)
        removed_mask_[static_cast<std::size_t>(i)] = 1;
    history_.reserve(prefix.size());
    for (const Event& e : prefix)
        append(e);
}

void SimState::append(const Event& e)
{
    if (e.sender == e.receiver || e.sender < 0 || e.sender >= n_ || e.receiver < 0 ||
        e.receiver >= n_)
        throw ValidationError("invalid event appended to simulation state");
    history_.push_back(e);
    ++dyad_counts_[static_cast<std::size_t>(e.sender) * n_ + static_cast<std::size_t>(e.receiver)];
    ++out_counts_[static_cast<std::size_t>(e.sender)];
    ++in_counts_[static_cast<std::size_t>(e.receiver)];
    touch_front(recv_lists_[static_cast<std::size_t>(e.sender)], e.receiver);
    touch_front(send_lists_[static_cast<std::size_t>(e.receiver)], e.sender);
}

// --- statistics ------------------------------------------------------------

void accumulate_statistic(const SimState& state, const StatisticSpec& spec, double scale,
                          std::vector<double>& eta)
{
    const int n = state.n();
    const auto cell = [n](NodeId i, NodeId j) {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(j);
    };

    switch (spec.kind) {
    case StatKind::Intercept:
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                if (i != j)
                    eta[cell(i, j)] += scale;
        break;

    case StatKind::CovSnd:
        if (spec.covariate.size() != static_cast<std::size_t>(n))
            throw ValidationError("covariate length mismatch in CovSnd");
        for (NodeId i = 0; i < n; ++i) {
            const double v = scale * spec.covariate[static_cast<std::size_t>(i)];
            for (NodeId j = 0; j < n; ++j)
                if (i != j)
                    eta[cell(i, j)] += v;
        }
        break;

    case StatKind::CovRec:
        if (spec.covariate.size() != static_cast<std::size_t>(n))
            throw ValidationError("covariate length mismatch in CovRec");
        for (NodeId j = 0; j < n; ++j) {
            const double v = scale * spec.covariate[static_cast<std::size_t>(j)];
            for (NodeId i = 0; i < n; ++i)
                if (i != j)
                    eta[cell(i, j)] += v;
        }
        break;

    case StatKind::PShiftAbBa:
        if (state.has_last())
            eta[cell(state.last().receiver, state.last().sender)] += scale;
        break;

    case StatKind::PShiftAbBy:
        if (state.has_last()) {
            const auto [a, b] = state.last();
            for (NodeId y = 0; y < n; ++y)
                if (y != a && y != b)
                    eta[cell(b, y)] += scale;
        }
        break;

    case StatKind::PShiftAbXa:
        if (state.has_last()) {
            const auto [a, b] = state.last();
            for (NodeId x = 0; x < n; ++x)
                if (x != a && x != b)
                    eta[cell(x, a)] += scale;
        }
        break;

    case StatKind::PShiftAbXb:
        if (state.has_last()) {
            const auto [a, b] = state.last();
            for (NodeId x = 0; x < n; ++x)
                if (x != a && x != b)
                    eta[cell(x, b)] += scale;
        }
        break;

    case StatKind::PShiftAbAy:
        if (state.has_last()) {
            const auto [a, b] = state.last();
            for (NodeId y = 0; y < n; ++y)
                if (y != a && y != b)
                    eta[cell(a, y)] += scale;
        }
        break;

    case StatKind::RecencySend:
        for (NodeId i = 0; i < n; ++i) {
            const auto& receivers = state.recent_receivers(i);
            for (std::size_t r = 0; r < receivers.size(); ++r)
                eta[cell(i, receivers[r])] += scale / static_cast<double>(r + 1);
        }
        break;

    case StatKind::RecencyReceive:
        for (NodeId i = 0; i < n; ++i) {
            const auto& senders = state.recent_senders(i);
            for (std::size_t r = 0; r < senders.size(); ++r)
                eta[cell(i, senders[r])] += scale / static_cast<double>(r + 1);
        }
        break;

    case StatKind::Inertia:
        for (NodeId i = 0; i < n; ++i) {
            const long long sent = state.out_count(i);
            if (sent == 0)
                continue;
            const double inv = scale / static_cast<double>(sent);
            for (NodeId j = 0; j < n; ++j)
                if (i != j)
                    eta[cell(i, j)] += inv * static_cast<double>(state.dyad_count(i, j));
        }
        break;

    case StatKind::TotalDegreeRec: {
        const long long m = static_cast<long long>(state.event_count());
        if (m == 0)
            break;
        const double denom = 2.0 * static_cast<double>(m);
        for (NodeId j = 0; j < n; ++j) {
            const double v =
                scale * static_cast<double>(state.in_count(j) + state.out_count(j)) / denom;
            for (NodeId i = 0; i < n; ++i)
                if (i != j)
                    eta[cell(i, j)] += v;
        }
        break;
    }
    }
}

std::vector<double> dyad_statistics(const SimState& state, const StatisticSpec& spec)
{
    std::vector<double> u(static_cast<std::size_t>(state.n()) * static_cast<std::size_t>(state.n()),
                          0.0);
    accumulate_statistic(state, spec, 1.0, u);
    return u;
}

// --- rates -----------------------------------------------------------------

void event_rates_into(const SimState& state, const ModelSpec& model, RateMatrix& out,
                      std::vector<double>& eta, EngineDiag* diag)
{
    const int n = state.n();
    const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    eta.assign(cells, 0.0);
    for (std::size_t k = 0; k < model.stats.size(); ++k)
        accumulate_statistic(state, model.stats[k], model.theta[k], eta);

    out.n = n;
    out.lambda.assign(cells, 0.0);
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        if (state.is_removed(i))
            continue; // sender hazard numerically zero
        for (NodeId j = 0; j < n; ++j) {
            if (i == j)
                continue;
            double x = eta[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
            if (!std::isfinite(x))
                throw SimulationError("non-finite statistic value for dyad (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            if (x > kMaxExponent || x < -kMaxExponent) {
                x = std::clamp(x, -kMaxExponent, kMaxExponent);
                if (diag)
                    ++diag->exponent_clamps;
            }
            const double lam = std::exp(x);
            out.lambda[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = lam;
            total += lam;
        }
    }
    out.total = total;
}

RateMatrix event_rates(const SimState& state, const ModelSpec& model, EngineDiag* diag)
{
    model.validate(state.n());
    RateMatrix out;
    std::vector<double> eta;
    event_rates_into(state, model, out, eta, diag);
    return out;
}

// --- sampling --------------------------------------------------------------

Event sample_next_event(const RateMatrix& rates, rng::Engine& eng)
{
    if (!(rates.total > 0.0))
        throw SimulationError("network dead: no dyad has a positive rate");
    const double u = rng::uniform01(eng) * rates.total;
    double cum = 0.0;
    std::size_t last_positive = 0;
    bool seen_positive = false;
    const std::size_t cells = rates.lambda.size();
    for (std::size_t c = 0; c < cells; ++c) {
        const double lam = rates.lambda[c];
        if (lam <= 0.0)
            continue;
        seen_positive = true;
        last_positive = c;
        cum += lam;
        if (u < cum)
            return {static_cast<NodeId>(c / rates.n), static_cast<NodeId>(c % rates.n)};
    }
    if (!seen_positive)
        throw SimulationError("network dead: no dyad has a positive rate");
    // u == total up to rounding; attribute the draw to the last positive cell.
    return {static_cast<NodeId>(last_positive / rates.n),
            static_cast<NodeId>(last_positive % rates.n)};
}

EventHistory simulate_sequence(const ModelSpec& model, const EventHistory& prefix,
                               std::size_t n_events, std::vector<NodeId> removed,
                               rng::Engine& eng, EngineDiag* diag)
{
    const Roster& roster = prefix.roster();
    model.validate(roster.size());
    SimState state(prefix.roster_ptr(), prefix.events(), std::move(removed));
    if (state.living_count() < 1)
        throw ValidationError("no living sender remains after removal");
    if (roster.size() < 2)
        throw ValidationError("need at least 2 nodes to simulate");

    RateMatrix rates;
    std::vector<double> eta;
    for (std::size_t step = 0; step < n_events; ++step) {
        event_rates_into(state, model, rates, eta, diag);
        state.append(sample_next_event(rates, eng));
    }
    return EventHistory(prefix.roster_ptr(), state.history());
}

// --- likelihood ------------------------------------------------------------

double ordinal_log_likelihood(const ModelSpec& model, const EventHistory& h,
                              std::vector<NodeId> removed, std::size_t from_index)
{
    if (from_index > h.size())
        throw ValidationError("likelihood from_index " + std::to_string(from_index) +
                              " past history size " + std::to_string(h.size()));
    model.validate(h.roster().size());
    SimState state(h.roster_ptr(), {}, std::move(removed));

    RateMatrix rates;
    std::vector<double> eta;
    double ll = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const Event& e = h.events()[k];
        if (k >= from_index) {
            event_rates_into(state, model, rates, eta);
            const double lam = rates.at(e.sender, e.receiver);
            if (!(lam > 0.0))
                throw SimulationError("event " + std::to_string(k) +
                                      " has zero rate under the model");
            ll += std::log(lam) - std::log(rates.total);
        }
        state.append(e);
    }
    return ll;
}

} // namespace remres
