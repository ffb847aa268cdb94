#include "fipsim/scenario.hpp"

#include <doctest.h>

using namespace fipsim;

TEST_CASE("scenario files parse and serialize stably") {
    std::string text =
        "# comment\n"
        "mode scripted\n"
        "stages 100\n"
        "horizon 50\n"
        "slot R l=0\n"
        "  delta 33 -> 7 steps 10\n"
        "  phik 7 -> 3 steps 3\n"
        "slot D n=1\n"
        "  phi 37 -> 0 steps 12\n";
    Scenario sc = Scenario::parse(text);
    CHECK(sc.mode == Scenario::Mode::Scripted);
    CHECK(sc.stages == 100);
    CHECK(sc.horizon == Nat(50));
    REQUIRE(sc.bindings.count(1));
    REQUIRE(sc.bindings.count(2));
    CHECK(sc.bindings[1].delta->entries.at(33) == std::pair<Nat, Nat>(7, 10));
    CHECK(sc.bindings[2].phi->entries.at(37) == std::pair<Nat, Nat>(0, 12));

    // canonical form re-parses to the same scenario
    Scenario again = Scenario::parse(sc.serialize());
    CHECK(again.serialize() == sc.serialize());
}

TEST_CASE("scenario validation rejects bad configurations") {
    CHECK_THROWS_AS(Scenario::parse("stages 5\n"), ConstructionError);
    CHECK_THROWS_AS(Scenario::parse("mode scripted\n"), ConstructionError);
    CHECK_THROWS_AS(Scenario::parse("mode scripted\nstages 5\nslot R l=0\nslot R l=0\n"),
                    ConstructionError);
    CHECK_THROWS_AS(Scenario::parse("mode enumeration\nstages 5\nslot D n=0\n"),
                    ConstructionError);
    // binding outside the stage budget
    CHECK_THROWS_AS(Scenario::parse("mode scripted\nstages 3\nslot R l=2\n"), ConstructionError);
    // entry on the wrong slot kind
    CHECK_THROWS_AS(Scenario::parse("mode scripted\nstages 9\nslot D n=0\n  delta 1 -> 2 steps 3\n"),
                    ConstructionError);
    // malformed entry
    CHECK_THROWS_AS(Scenario::parse("mode scripted\nstages 9\nslot D n=0\n  phi 1 2 3\n"),
                    ConstructionError);
    // duplicate table input
    CHECK_THROWS_AS(
        Scenario::parse(
            "mode scripted\nstages 9\nslot D n=0\n  phi 1 -> 2 steps 3\n  phi 1 -> 4 steps 5\n"),
        ConstructionError);
}

TEST_CASE("default horizon tracks the stage budget") {
    Scenario sc = Scenario::parse("mode scripted\nstages 64\n");
    CHECK(sc.effective_horizon() == 32);
    sc = Scenario::parse("mode scripted\nstages 400\n");
    CHECK(sc.effective_horizon() == 50);
}
