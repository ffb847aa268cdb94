#include "fipsim/engine.hpp"

#include "fipsim/verifier.hpp"

#include <doctest.h>

using namespace fipsim;

namespace {

Scenario empty_scenario(Nat stages) {
    Scenario sc;
    sc.mode = Scenario::Mode::Scripted;
    sc.stages = stages;
    return sc;
}

} // namespace

TEST_CASE("a zero-stage budget yields an empty trace") {
    Engine engine(empty_scenario(0));
    RunResult r = engine.run();
    CHECK(r.snapshot.event_count == 0);
    CHECK(r.snapshot.a_entry_stage.empty());
    CHECK(make_record(empty_scenario(0), r).events.empty());
}

TEST_CASE("empty scenario: the filler privatizes every non-column point") {
    Engine engine(empty_scenario(10));
    RunResult r = engine.run();
    CHECK(r.snapshot.a_entry_stage.empty());
    for (Nat m = 0; m <= 9; ++m) {
        const TargetSpace& space = r.snapshot.targets.at(m);
        for (Nat z = 0; z <= 9; ++z) {
            ColumnTag tag = classify(z);
            bool own_column = tag.kind == ColumnTag::Kind::Trap && tag.m == m;
            REQUIRE(!own_column); // no column element sits this low
            CHECK(space.theta.lookup(z) == z);
            CHECK(space.lambda.lookup(z) == z);
        }
    }
}

TEST_CASE("two runs of one scenario yield byte-identical traces") {
    std::string text =
        "mode scripted\nstages 40\nslot R l=0\n  delta 33 -> 7 steps 10\n  phik 7 -> 3 steps 3\n";
    Scenario sc = Scenario::parse(text);
    RunResult a = Engine(sc).run();
    RunResult b = Engine(sc).run();
    CHECK(a.trace_text == b.trace_text);
    CHECK(!a.trace_text.empty());
}

TEST_CASE("a terminal action initializes exactly the visited lower slots") {
    // phi_0(1) = 1 halts in 5 steps: converges at stage 6, value nonzero
    std::string text = "mode scripted\nstages 12\nslot D n=0\n  phi 1 -> 1 steps 5\n";
    Scenario sc = Scenario::parse(text);
    RunResult r = Engine(sc).run();
    RunRecord record = make_record(sc, r);

    std::vector<Nat> initialized;
    Nat at_stage = 0;
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Initialize) {
            initialized.push_back(ev.arg(0));
            at_stage = ev.stage;
        }
    }
    CHECK(at_stage == 6);
    // Q_1..Q_5 were visited at earlier stages and re-run afterwards; Q_6 was
    // still pristine when D_0 acted at stage 6
    CHECK(initialized == std::vector<Nat>{1, 2, 3, 4, 5});

    // the slot acted exactly once and A holds nothing (answer was nonzero)
    CHECK(r.snapshot.a_entry_stage.empty());
    CHECK(r.snapshot.reqs.at(0).satisfied);
}

TEST_CASE("the replayed trace reproduces the final snapshot") {
    std::string text =
        "mode scripted\nstages 60\n"
        "slot R l=0\n  delta 33 -> 7 steps 10\n  phik 7 -> 3 steps 3\n"
        "slot D n=1\n  phi 37 -> 0 steps 12\n";
    Scenario sc = Scenario::parse(text);
    RunResult r = Engine(sc).run();
    RunRecord record = make_record(sc, r);
    std::string why;
    CHECK_MESSAGE(snapshots_equal(r.snapshot, record.final_state, &why), why);
}

TEST_CASE("fresh picks increase strictly and exceed their stage") {
    std::string text =
        "mode scripted\nstages 80\n"
        "slot R l=0\n  delta 33 -> 7 steps 10\n  phik 7 -> 3 steps 3\n"
        "slot D n=2\n  phi 37 -> 0 steps 20\n";
    Scenario sc = Scenario::parse(text);
    RunRecord record = make_record(sc, Engine(sc).run());
    Nat prev = 0;
    bool first = true;
    for (const auto& ev : record.events) {
        Nat picked = 0;
        switch (ev.kind) {
        case EventKind::PickWitness: picked = ev.arg(0); break;
        case EventKind::PickBait: picked = ev.arg(1); break;
        case EventKind::PickTrap: picked = ev.arg(0); break;
        case EventKind::FillerCompanionTheta:
        case EventKind::FillerCompanionLambda: picked = ev.arg(2); break;
        default: continue;
        }
        CHECK(picked > ev.stage);
        if (!first) CHECK(picked > prev);
        prev = picked;
        first = false;
    }
    CHECK(!first); // the run made at least one fresh pick
}

TEST_CASE("enumeration mode runs the machine numbering deterministically") {
    Scenario sc;
    sc.mode = Scenario::Mode::Enumeration;
    sc.stages = 30;
    RunResult a = Engine(sc).run();
    RunResult b = Engine(sc).run();
    CHECK(a.trace_text == b.trace_text);
    // program 0 is the empty program, the identity; D_0's witness is 1 and
    // phi_0(1) = 1 != 0, so D_0 declares satisfied without enumerating
    CHECK(a.snapshot.reqs.at(0).satisfied);
}
