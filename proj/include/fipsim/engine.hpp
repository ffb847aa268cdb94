#pragma once

#include "fipsim/requirements.hpp"
#include "fipsim/scenario.hpp"
#include "fipsim/targets.hpp"
#include "fipsim/trace.hpp"

#include <map>
#include <string>
#include <vector>

namespace fipsim {

// Final state of a run.
struct Snapshot {
    Nat stages_run = 0;
    Nat high_water = 0;
    Nat event_count = 0;
    std::map<Nat, Nat> a_entry_stage;       // A with entry stages
    std::map<Nat, TargetSpace> targets;     // by m
    FreezeRegistry freezes;
    std::map<Nat, RequirementState> reqs;   // by priority
};

struct RunResult {
    Snapshot snapshot;
    std::string trace_text; // header + one event per line
    Nat satisfied_count = 0;
};

// The stage protocol: at stage s visit Q_0..Q_s in priority order, applying
// each routine's update block atomically, then run the totality filler for
// all (m, z) <= s in lexicographic order. Deterministic; two runs of one
// scenario produce identical traces byte for byte.
class Engine {
public:
    explicit Engine(Scenario scenario);

    // Runs one stage. Callers normally use run().
    void step();

    // Runs stages 0 .. stages-1 and returns the final state plus the trace.
    RunResult run();

    const Snapshot& state() const { return state_; }
    const std::string& trace_text() const { return trace_; }

private:
    void visit(Nat p);
    void apply_updates(const RequirementState& actor, const std::vector<Update>& updates);
    void filler_for(Nat m, Nat z, std::vector<Nat>& still_deferred);
    void run_filler();
    TargetSpace& ensure_target(Nat m);
    RequirementState& ensure_requirement(Nat p);
    const SlotOracles& oracles_for(Nat p);
    void emit(const Author& author, EventKind kind, Nat a0 = 0, Nat a1 = 0, Nat a2 = 0);

    Scenario scenario_;
    Snapshot state_;
    FreshAllocator alloc_;
    Nat stage_ = 0;
    Nat seq_ = 0;
    std::string trace_;
    std::map<Nat, SlotOracles> oracle_cache_;
    std::map<Nat, std::vector<Nat>> filler_deferred_; // m -> pending z, ascending
    Nat dense_bound_ = 0;
};

// Writes/reads the state dump file ("# fipsim-state 1").
std::string write_state_text(const Snapshot& snapshot);

} // namespace fipsim
