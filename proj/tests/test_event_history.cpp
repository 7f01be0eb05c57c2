#include <string>
#include <vector>

#include "doctest.h"

#include "remres/errors.hpp"
#include "remres/event_history.hpp"

#include "testutil.hpp"

using namespace remres;

TEST_CASE("roster parsing: labels, ICR flags, validation")
{
    const Roster r = parse_roster("label,icr\nA,1\nB,0\nC,1\n", "net", true);
    CHECK(r.size() == 3);
    CHECK(r.network_name() == "net");
    CHECK(r.specialist());
    CHECK(r.is_icr(0));
    CHECK(!r.is_icr(1));
    CHECK(r.icr_count() == 2);
    CHECK(r.require("B") == 1);
    CHECK(!r.find("Z").has_value());
    CHECK_THROWS_AS(r.require("Z"), ValidationError);

    CHECK_THROWS_AS(parse_roster("label,icr\nA,1\nA,0\n"), ValidationError); // duplicate
    CHECK_THROWS_AS(parse_roster("label,icr\nA,2\nB,0\n"), ValidationError); // bad flag
    CHECK_THROWS_AS(parse_roster("name,icr\nA,1\nB,0\n"), ValidationError);  // bad header
    CHECK_THROWS_AS(parse_roster("label,icr\nA,1\n"), ValidationError);      // n < 2
    CHECK_THROWS_AS(parse_roster(""), ValidationError);
}

TEST_CASE("roster parsing skips # comment lines")
{
    const Roster r = parse_roster("# provenance\nlabel,icr\n# mid\nA,0\nB,1\n");
    CHECK(r.size() == 2);
    CHECK(r.is_icr(1));
}

TEST_CASE("event log parsing against a roster")
{
    auto roster = testutil::make_roster(3);
    const EventHistory h =
        parse_event_log("index,sender,receiver\n0,A,B\n1,C,A\n", roster);
    REQUIRE(h.size() == 2);
    CHECK(h.events()[0] == Event{0, 1});
    CHECK(h.events()[1] == Event{2, 0});

    // Optional time column is accepted and ignored.
    const EventHistory ht =
        parse_event_log("index,sender,receiver,time\n0,A,B,12.5\n", roster);
    CHECK(ht.size() == 1);

    CHECK_THROWS_AS(parse_event_log("index,sender,receiver\n0,A,Z\n", roster),
                    ValidationError); // unknown label
    CHECK_THROWS_AS(parse_event_log("index,sender,receiver\n0,A,A\n", roster),
                    ValidationError); // self loop
    CHECK_THROWS_AS(parse_event_log("index,sender,receiver\n1,A,B\n", roster),
                    ValidationError); // non-consecutive index
    CHECK_THROWS_AS(parse_event_log("index,sender,receiver\n", roster),
                    ValidationError); // no events
}

TEST_CASE("event log parsing without a roster discovers labels in appearance order")
{
    const EventHistory h = parse_event_log("index,sender,receiver\n0,x,y\n1,z,x\n");
    CHECK(h.roster().size() == 3);
    CHECK(h.roster().label(0) == "x");
    CHECK(h.roster().label(1) == "y");
    CHECK(h.roster().label(2) == "z");
}

TEST_CASE("serialize_event_log round-trips through parse_event_log")
{
    auto roster = testutil::make_roster(4);
    const EventHistory h =
        testutil::make_history(roster, {{0, 1}, {2, 3}, {3, 0}, {1, 2}});
    const EventHistory back = parse_event_log(serialize_event_log(h), roster);
    CHECK(back.events() == h.events());
}

TEST_CASE("event history rejects out-of-roster nodes and self loops")
{
    auto roster = testutil::make_roster(2);
    CHECK_THROWS_AS(EventHistory(roster, {{0, 2}}), ValidationError);
    CHECK_THROWS_AS(EventHistory(roster, {{1, 1}}), ValidationError);
    CHECK_THROWS_AS(EventHistory(nullptr, {}), ValidationError);
}

TEST_CASE("aggregate_network counts calls inside the window only")
{
    auto roster = testutil::make_roster(3);
    const EventHistory h =
        testutil::make_history(roster, {{0, 1}, {0, 1}, {1, 2}, {2, 0}});
    const WeightedDigraph g = aggregate_network(h, {1, 4});
    CHECK(g.count(0, 1) == 1); // event 0 excluded
    CHECK(g.count(1, 2) == 1);
    CHECK(g.count(2, 0) == 1);
    CHECK(g.total() == 3);
    CHECK(g.volume(0) == 2); // one send, one receive inside the window
    CHECK(g.volume(2) == 2);
    CHECK_THROWS_AS(aggregate_network(h, {3, 2}), ValidationError);
    CHECK_THROWS_AS(aggregate_network(h, {0, 5}), ValidationError);
}

TEST_CASE("prefix_cut: floor(n * fraction) with guards")
{
    CHECK(prefix_cut(1146, 0.5) == 573);
    CHECK(prefix_cut(10, 0.5) == 5);
    CHECK(prefix_cut(11, 0.5) == 5);
    CHECK(prefix_cut(10, 0.3) == 3);
    CHECK(prefix_cut(3, 0.34) == 1);
    CHECK_THROWS_AS(prefix_cut(10, 0.0), ValidationError);
    CHECK_THROWS_AS(prefix_cut(10, 1.0), ValidationError);
    CHECK_THROWS_AS(prefix_cut(10, 0.05), ValidationError); // empty prefix
    CHECK_THROWS_AS(prefix_cut(1, 0.5), ValidationError);   // no continuation
    CHECK_THROWS_AS(prefix_cut(0, 0.5), ValidationError);
}

TEST_CASE("split_prefix halves the history at floor(n/2)")
{
    auto roster = testutil::make_roster(3);
    const EventHistory h =
        testutil::make_history(roster, {{0, 1}, {1, 2}, {2, 0}, {0, 2}, {1, 0}});
    const auto [prefix, attack_index] = split_prefix(h);
    CHECK(attack_index == 2);
    CHECK(prefix.size() == 2);
    CHECK(prefix.events()[1] == Event{1, 2});
}
