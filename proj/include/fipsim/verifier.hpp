#pragma once

#include "fipsim/engine.hpp"
#include "fipsim/scenario.hpp"
#include "fipsim/trace.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fipsim {

// Outcome of one verifier check.
struct Verdict {
    enum class Result { Pass, Fail, Indeterminate, NotApplicable };
    std::string check;
    Result result = Result::Pass;
    std::string detail;                // witness summary on failure
    std::map<std::string, Nat> stats;  // reported quantities (fibre cardinality, digests...)

    bool ok() const {
        return result == Result::Pass || result == Result::NotApplicable;
    }
};

std::string_view result_name(Verdict::Result r);

// One run of a requirement: from construction start or an initialization up
// to the next initialization or the terminal action.
struct ReqRun {
    enum class Terminal { None, DTerminal, Collision, TrapExit };

    Nat priority = 0;
    Nat ordinal = 0;
    Nat first_seq = 0;
    bool any_events = false;
    bool initialized_after = false;

    std::optional<Nat> witness;     // D
    std::optional<Nat> phi_answer;  // D

    std::vector<Nat> baits;         // R
    std::vector<Nat> bait_seqs;
    std::vector<Nat> xvals;
    std::vector<Nat> yvals;         // all recorded Phi answers, in order
    std::optional<Nat> trap;
    Nat passive_loops = 0;          // drop-y count
    std::map<Nat, Nat> ties;        // bait -> theta value authored by this run

    Terminal terminal = Terminal::None;
    std::optional<Nat> trap_exit_c;
    std::optional<Nat> trap_exit_in_a;
    std::vector<Nat> enumerated;    // block elements in event order
    std::vector<Nat> enumerate_seqs;
    std::vector<Nat> enumerate_visits; // visit ordinal of each enumerate
    Nat terminal_stage = 0;
};

// A completed run plus everything the checks need: the parsed trace, the
// replayed final state, and per-requirement run segmentation.
struct RunRecord {
    Scenario scenario;
    std::string trace_text;              // full file bytes (header + events)
    std::vector<TraceEvent> events;
    Snapshot final_state;                // reconstructed by replay
    std::map<Nat, std::vector<ReqRun>> runs; // by priority

    // anomalies tolerated during replay, consumed by the negative checks
    std::vector<std::string> duplicate_defines;

    // event lines only (header stripped); the byte-exact oracle target
    std::string_view event_text() const;
};

// Parses and replays a trace. Structural damage (bad lines, seq gaps) throws
// ConstructionError; semantic violations (double defines) are recorded so the
// checks can report them.
RunRecord make_record(const Scenario& scenario, std::string trace_text);

// Convenience: record straight from an engine run (re-parses the trace so the
// verifier path is identical to the file path).
RunRecord make_record(const Scenario& scenario, const RunResult& result);

// Compares a replayed state against an engine snapshot.
bool snapshots_equal(const Snapshot& a, const Snapshot& b, std::string* why);

// Settledness of a run for parameter m below a horizon: all scripted oracle
// entries converged, every in-scope requirement satisfied or provably parked,
// and Theta_m/Lambda_m defined on [0, H].
struct Settledness {
    bool settled = false;
    std::string reason;
};
Settledness settled_for(const RunRecord& record, Nat m, Nat horizon);

// The checks.
Verdict check_write_once(const RunRecord& record);
Verdict check_sigma_dichotomy(const RunRecord& record, Nat horizon);
Verdict check_block_atomicity(const RunRecord& record);
Verdict check_equivalence(const RunRecord& record, Nat m, Nat horizon);
Verdict check_injury_bound(const RunRecord& record);
Verdict check_fibre_growth(const RunRecord& record, Nat l);
Verdict check_defeat_witness(const RunRecord& record, Nat l);
Verdict check_freeze_respect(const RunRecord& record);
Verdict check_stage_convention(const RunRecord& record);
Verdict check_tie_order(const RunRecord& record);
Verdict check_visit_order(const RunRecord& record);
Verdict check_column_provenance(const RunRecord& record);
Verdict check_anchor_uniqueness(const RunRecord& record);
Verdict check_oracle_digest(const RunRecord& record);

// Registry used by the CLI: named checks with scenario-derived parameters
// (horizon, bound slots). "all" runs every entry.
std::vector<std::string> check_names();
std::vector<Verdict> run_checks(const RunRecord& record, const std::vector<std::string>& names);

} // namespace fipsim
