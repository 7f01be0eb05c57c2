#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"

#include "remres/errors.hpp"
#include "remres/metrics.hpp"
#include "remres/rng.hpp"

#include "oracles.hpp"
#include "testutil.hpp"

using namespace remres;
using testutil::make_history;
using testutil::make_roster;

namespace {

RemovalPlan plan_of(std::vector<NodeId> removed, std::size_t attack_index = 0)
{
    RemovalPlan p;
    p.kind = removed.empty() ? AttackKind::None : AttackKind::Random;
    p.attack_index = attack_index;
    p.removed = std::move(removed);
    return p;
}

WeightedDigraph graph_of(std::shared_ptr<const Roster> roster,
                         std::initializer_list<std::pair<int, int>> events)
{
    const EventHistory h = make_history(std::move(roster), events);
    return aggregate_network(h, {0, h.size()});
}

std::vector<Event> random_events(int n, std::size_t m, rng::Engine& eng)
{
    std::vector<Event> events;
    for (std::size_t k = 0; k < m; ++k) {
        const auto s = static_cast<NodeId>(rng::uniform_below(eng, static_cast<std::uint64_t>(n)));
        auto r = static_cast<NodeId>(rng::uniform_below(eng, static_cast<std::uint64_t>(n - 1)));
        if (r >= s)
            ++r;
        events.push_back({s, r});
    }
    return events;
}

} // namespace

TEST_CASE("theil_index: frozen reference values")
{
    const std::vector<double> even = {1, 1, 1, 1};
    CHECK(theil_index(even) == 0.0);
    const std::vector<double> hub = {4, 0, 0, 0};
    CHECK(theil_index(hub) == doctest::Approx(1.3862943611198906).epsilon(1e-14)); // ln 4
    const std::vector<double> mild = {2, 1, 1};
    CHECK(theil_index(mild) == doctest::Approx(0.058891517828191735).epsilon(1e-14));
    const std::vector<double> mixed = {5, 3, 2, 2, 1};
    CHECK(theil_index(mixed) == doctest::Approx(0.1303051050044568).epsilon(1e-14));
}

TEST_CASE("theil_index: scale invariance and input guards")
{
    rng::Engine eng(31);
    std::vector<double> xs(7);
    for (double& x : xs)
        x = rng::uniform01(eng) * 10.0;
    for (double c : {0.5, 3.0, 1e6})
    {
        std::vector<double> scaled = xs;
        for (double& x : scaled)
            x *= c;
        CHECK(theil_index(scaled) == doctest::Approx(theil_index(xs)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(theil_index(std::vector<double>{0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(theil_index(std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(theil_index(std::vector<double>{1, -1}), ValidationError);
}

TEST_CASE("krackhardt_connectedness: component arithmetic")
{
    auto r3 = make_roster(3);
    CHECK(krackhardt_connectedness(graph_of(r3, {{0, 1}, {1, 2}})) == 1.0);
    CHECK(krackhardt_connectedness(graph_of(r3, {{0, 1}})) ==
          doctest::Approx(1.0 / 3.0)); // one edge among 3 nodes
    const WeightedDigraph empty(3, {0, 0});
    CHECK(krackhardt_connectedness(empty) == 0.0);

    // Components {A,B,C} and {D,E} over n=5: (3 + 1) of 10 pairs.
    auto r5 = make_roster(5);
    CHECK(krackhardt_connectedness(graph_of(r5, {{0, 1}, {2, 1}, {3, 4}})) ==
          doctest::Approx(0.4));
}

TEST_CASE("degree_centralization: star 1, cycle 0, 4-path 1/3")
{
    auto r4 = make_roster(4);
    CHECK(degree_centralization(graph_of(r4, {{0, 1}, {0, 2}, {0, 3}})) == 1.0);
    CHECK(degree_centralization(graph_of(r4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})) == 0.0);
    CHECK(degree_centralization(graph_of(r4, {{0, 1}, {1, 2}, {2, 3}})) ==
          doctest::Approx(1.0 / 3.0));
    // Mutual ties dichotomize to one undirected edge.
    CHECK(degree_centralization(graph_of(r4, {{0, 1}, {1, 0}, {0, 2}, {0, 3}})) == 1.0);
    const WeightedDigraph two(2, {0, 0});
    CHECK_THROWS_AS(degree_centralization(two), ValidationError);
}

TEST_CASE("graph_density counts realized ordered dyads")
{
    auto r3 = make_roster(3);
    CHECK(graph_density(graph_of(r3, {{0, 1}, {1, 2}})) == doctest::Approx(1.0 / 3.0));
    CHECK(graph_density(graph_of(r3, {{0, 1}, {0, 1}, {0, 1}})) ==
          doctest::Approx(1.0 / 6.0)); // repeats collapse
    const WeightedDigraph empty(3, {0, 0});
    CHECK(graph_density(empty) == 0.0);
}

TEST_CASE("isolate_fraction covers the whole roster")
{
    auto r4 = make_roster(4);
    // Events A->B only: C and D isolated.
    CHECK(isolate_fraction(graph_of(r4, {{0, 1}})) == 0.5);
    CHECK(isolate_fraction(graph_of(r4, {{0, 1}, {2, 3}})) == 0.0);
    const WeightedDigraph empty(4, {0, 0});
    CHECK(isolate_fraction(empty) == 1.0);
}

TEST_CASE("call_loss_fraction: calls to the dead over the post window")
{
    auto roster = make_roster(4);
    // Post window starts at index 1; 2 of the 4 post events hit removed D.
    const EventHistory h =
        make_history(roster, {{0, 3}, {0, 3}, {1, 0}, {2, 3}, {1, 2}});
    CHECK(call_loss_fraction(h, plan_of({3}, 1)) == 0.5);
    CHECK(call_loss_fraction(h, plan_of({}, 1)) == 0.0); // control
    CHECK_THROWS_AS(call_loss_fraction(h, plan_of({3}, 5)), ValidationError);
}

TEST_CASE("call_loss_curve buckets reconcile with the scalar")
{
    auto roster = make_roster(3);
    rng::Engine eng(8);
    const EventHistory h(roster, random_events(3, 120, eng));
    const RemovalPlan plan = plan_of({2}, 0);
    const auto curve = call_loss_curve(h, plan, 50);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].events == 50);
    CHECK(curve[1].events == 50);
    CHECK(curve[2].events == 20);
    CHECK(curve[0].first_index == 0);
    CHECK(curve[2].first_index == 100);
    std::size_t lost = 0, events = 0;
    for (const auto& b : curve) {
        lost += b.lost;
        events += b.events;
    }
    CHECK(events == 120);
    CHECK(static_cast<double>(lost) / static_cast<double>(events) ==
          doctest::Approx(call_loss_fraction(h, plan)).epsilon(1e-15));
}

TEST_CASE("forward reachability: A->B then C->A leaves B out of C's reach")
{
    auto roster = make_roster(3);
    const EventHistory h = make_history(roster, {{0, 1}, {2, 0}});
    const RemovalPlan plan = plan_of({});
    const auto reach = forward_reach_matrix(h, plan);
    CHECK(reach[0 * 3 + 1] == 1); // A reaches B
    CHECK(reach[2 * 3 + 0] == 1); // C reaches A
    CHECK(reach[2 * 3 + 1] == 0); // C cannot reach B: A->B happened first
    CHECK(reach[1 * 3 + 0] == 0);
    CHECK(reach[1 * 3 + 2] == 0);
    CHECK(reach[0 * 3 + 2] == 0);
    const ReachStats s = forward_reachability(h, plan);
    CHECK(s.fraction_mean == 1.0 / 3.0);
    CHECK(s.count_mean == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // The static picture disagrees: on the aggregated graph C does reach B.
    const auto static_reach =
        oracle::static_directed_reach(h.events(), 3, {0, 0, 0});
    CHECK(static_reach[2 * 3 + 1] == 1);
}

TEST_CASE("forward reachability: single event, and chains through later events")
{
    auto r2 = make_roster(2);
    const EventHistory h2 = make_history(r2, {{0, 1}});
    CHECK(forward_reachability(h2, plan_of({})).fraction_mean == 0.5);

    // A->B, B->C, C->D: A reaches everyone downstream.
    auto r4 = make_roster(4);
    const EventHistory chain = make_history(r4, {{0, 1}, {1, 2}, {2, 3}});
    const auto reach = forward_reach_matrix(chain, plan_of({}));
    CHECK(reach[0 * 4 + 1] == 1);
    CHECK(reach[0 * 4 + 2] == 1);
    CHECK(reach[0 * 4 + 3] == 1);
    CHECK(reach[2 * 4 + 3] == 1);
    CHECK(reach[3 * 4 + 0] == 0);
}

TEST_CASE("forward reachability needs two living nodes")
{
    auto roster = make_roster(3);
    const EventHistory h = make_history(roster, {{0, 1}});
    CHECK_THROWS_AS(forward_reachability(h, plan_of({1, 2})), ValidationError);
}

TEST_CASE("forward reachability equals exhaustive chain enumeration on random cases")
{
    rng::Engine eng(606);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 2 + static_cast<int>(rng::uniform_below(eng, 5));
        const auto m = static_cast<std::size_t>(rng::uniform_below(eng, 13));
        const auto events = random_events(n, m, eng);
        // Random removals, keeping at least 2 living.
        std::vector<NodeId> removed;
        for (NodeId i = 0; i < n; ++i)
            if (static_cast<int>(removed.size()) < n - 2 && rng::uniform01(eng) < 0.3)
                removed.push_back(i);
        auto roster = make_roster(n);
        const EventHistory h(roster, events);
        const RemovalPlan plan = plan_of(removed);
        const auto got = forward_reach_matrix(h, plan);
        const auto want = oracle::forward_reach(events, n, plan.removed_mask(n));
        CHECK(got == want);
    }
}

TEST_CASE("forward reach sets only grow as events append")
{
    rng::Engine eng(17);
    const int n = 5;
    auto roster = make_roster(n);
    std::vector<Event> events = random_events(n, 20, eng);
    std::vector<char> prev(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t m = 1; m <= events.size(); ++m) {
        const EventHistory h(roster,
                             std::vector<Event>(events.begin(),
                                                events.begin() + static_cast<std::ptrdiff_t>(m)));
        const auto cur = forward_reach_matrix(h, plan_of({}));
        for (std::size_t k = 0; k < cur.size(); ++k)
            CHECK(cur[k] >= prev[k]);
        prev = cur;
    }
}

TEST_CASE("forward fraction never exceeds the static directed analog")
{
    rng::Engine eng(91);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 3 + static_cast<int>(rng::uniform_below(eng, 4));
        const auto events = random_events(n, 15, eng);
        auto roster = make_roster(n);
        const EventHistory h(roster, events);
        const auto fwd = forward_reach_matrix(h, plan_of({}));
        const auto stat = oracle::static_directed_reach(
            events, n, std::vector<char>(static_cast<std::size_t>(n), 0));
        for (std::size_t k = 0; k < fwd.size(); ++k)
            CHECK(fwd[k] <= stat[k]); // time-respecting chains are a subset
    }
}

TEST_CASE("reserve_use: silent-before nodes that speak up after")
{
    auto roster = make_roster(5);
    // Prefix senders {A, B}; attack removes B; post senders {A, C, D}.
    const EventHistory h = make_history(
        roster, {{0, 2}, {1, 0}, {0, 4}, {2, 0}, {3, 4}});
    const RemovalPlan plan = plan_of({1}, 2);
    // Reserves = living and silent in prefix = {C, D, E}; C and D activate.
    CHECK(reserve_use(h, plan) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // Balance: s_i/n_i - s_a/n_a = 2/3 - 0/1.
    CHECK(reserve_balance(h, plan) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("reserve measures go missing when a pool is empty")
{
    auto roster = make_roster(2);
    const EventHistory h = make_history(roster, {{0, 1}, {1, 0}, {0, 1}});
    // Everyone sent in the prefix: no reserves, no inactive pool.
    const RemovalPlan plan = plan_of({}, 2);
    CHECK(!reserve_use(h, plan).has_value());
    CHECK(!reserve_balance(h, plan).has_value());

    // Attack at index 0: nobody active before, so the active pool is empty.
    const RemovalPlan at0 = plan_of({}, 0);
    CHECK(reserve_use(h, at0).has_value());
    CHECK(!reserve_balance(h, at0).has_value());
}

TEST_CASE("reserve balance hits its range endpoints")
{
    auto roster = make_roster(4);
    // Prefix: A sends. Post: C and D send, A never again.
    const EventHistory all_switch =
        make_history(roster, {{0, 1}, {2, 0}, {3, 1}, {2, 1}});
    const RemovalPlan plan = plan_of({}, 1);
    // s_i/n_i = 2/3, s_a/n_a = 1/1 -> -1/3
    CHECK(reserve_balance(all_switch, plan) ==
          doctest::Approx(2.0 / 3.0 - 1.0).epsilon(1e-15));

    // Prefix: A sends. Post: everyone else sends and A keeps sending.
    const EventHistory all_on =
        make_history(roster, {{0, 1}, {1, 0}, {2, 0}, {3, 0}, {0, 2}});
    CHECK(reserve_balance(all_on, plan_of({}, 1)) == 1.0);
}

TEST_CASE("compute_metrics measures the post window only")
{
    auto roster = make_roster(4);
    // Heavy pre-attack traffic that must not leak into the metrics.
    std::vector<Event> events;
    for (int k = 0; k < 30; ++k)
        events.push_back({0, 1});
    events.push_back({2, 3}); // the whole post window
    const EventHistory h(roster, events);
    const RemovalPlan plan = plan_of({1}, 30);
    const MetricVector m = compute_metrics(h, plan);
    CHECK(m.density == doctest::Approx(1.0 / 12.0));
    CHECK(m.isolate_fraction == 0.5); // A and B silent post-attack
    CHECK(m.call_loss == 0.0);
    CHECK(m.connectedness == doctest::Approx(1.0 / 6.0));
    REQUIRE(m.centralization.has_value());
    // C-D edge: degrees 1,1,0,0 -> sum(1-d) = 2 over (n-1)(n-2) = 6.
    CHECK(*m.centralization == doctest::Approx(1.0 / 3.0));
    CHECK(m.reach_fraction_mean == doctest::Approx((1.0 / 2.0) / 3.0));

    CHECK_THROWS_AS(compute_metrics(h, plan_of({}, 31)), ValidationError);
}

TEST_CASE("compute_metrics leaves centralization absent on 2-node rosters")
{
    auto roster = make_roster(2);
    const EventHistory h = make_history(roster, {{0, 1}, {1, 0}});
    const MetricVector m = compute_metrics(h, plan_of({}, 0));
    CHECK(!m.centralization.has_value());
    CHECK(m.density == 1.0);
}

TEST_CASE("metric battery agrees with brute-force oracles on random histories")
{
    rng::Engine eng(4242);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 3 + static_cast<int>(rng::uniform_below(eng, 4));
        const auto m_events = 1 + rng::uniform_below(eng, 20);
        const auto events = random_events(n, m_events, eng);
        auto roster = make_roster(n);
        const EventHistory h(roster, events);
        const WeightedDigraph g = aggregate_network(h, {0, h.size()});

        std::vector<double> vols(static_cast<std::size_t>(n));
        for (NodeId i = 0; i < n; ++i)
            vols[static_cast<std::size_t>(i)] = static_cast<double>(g.volume(i));
        const auto adj = oracle::adjacency(events, n);

        CHECK(theil_index(vols) ==
              doctest::Approx(oracle::theil(oracle::volumes(events, n))).epsilon(1e-12));
        CHECK(krackhardt_connectedness(g) ==
              doctest::Approx(oracle::connectedness(adj, n)).epsilon(1e-12));
        CHECK(degree_centralization(g) ==
              doctest::Approx(oracle::centralization(adj, n)).epsilon(1e-12));
        CHECK(graph_density(g) == doctest::Approx(oracle::density(adj, n)).epsilon(1e-12));
        CHECK(isolate_fraction(g) ==
              doctest::Approx(oracle::isolate_fraction(events, n)).epsilon(1e-12));
    }
}

TEST_CASE("metric_value maps names to fields, optionals included")
{
    MetricVector m;
    m.theil = 0.25;
    m.centralization = std::nullopt;
    m.reserve_use = 0.75;
    CHECK(metric_value(m, "theil") == 0.25);
    CHECK(!metric_value(m, "centralization").has_value());
    CHECK(metric_value(m, "reserve_use") == 0.75);
    CHECK_THROWS_AS(metric_value(m, "modularity"), ValidationError);
    CHECK(kMetricNames.size() == 10);
}
