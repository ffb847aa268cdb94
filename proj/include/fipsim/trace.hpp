#pragma once

#include "fipsim/ids.hpp"
#include "fipsim/nat.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fipsim {

// Trace line grammar (one event per line, byte-exact across runs):
//
//   <seq> <stage> <author> <kind>[ <field>=<value>]...
//
// seq is a global counter starting at 0; stage identifies the stage in which
// the event was applied; author is "engine", "filler", "D:n=<n>" or
// "R:l=<l>,m=<m>,k=<k>"; field names and their order are fixed per kind and
// all values are decimal naturals.
//
// Kinds and payloads:
//   stage s                      engine, start-of-stage marker
//   visit p                      requirement, one per visit of an unsatisfied slot
//   pick-witness x               D picks a fresh neutral witness
//   oracle-phi in out            D records a converged phi answer
//   pick-bait v a                R picks and will freeze bait a_v
//   pick-trap b                  R picks the trap point
//   oracle-delta v in out        R records Delta(a_v) = x_v
//   oracle-phik v in out         R records Phi(x_v) = y_v
//   state-change to              local state moved
//   set-counter v                R counter assignment (start of run, passive loop)
//   drop-y                       R forgets the temporary y_v (passive loop)
//   trap-exit v c in_a           R resolved the State-4 wait: c = Lambda(y_v)
//   enumerate x                  x enters A
//   define-theta m z val         module-authored Theta_m(z) = val
//   define-lambda m z val        module-authored Lambda_m(z) = val
//   freeze m z                   bait frozen for m
//   unfreeze m z                 bait unfrozen
//   satisfied                    terminal action declared
//   init-lower p                 actor at priority p initializes lower slots
//   initialize p                 engine, slot at priority p is reset
//   filler-private m z           filler: Theta_m(z) = z and Lambda_m(z) = z
//   filler-companion-theta m z y filler: Theta_m(z) = y and Lambda_m(y) = z
//   filler-companion-lambda m z x filler: Lambda_m(z) = x and Theta_m(x) = z
enum class EventKind : std::uint8_t {
    Stage,
    Visit,
    PickWitness,
    OraclePhi,
    PickBait,
    PickTrap,
    OracleDelta,
    OraclePhiK,
    StateChange,
    SetCounter,
    DropY,
    TrapExit,
    Enumerate,
    DefineTheta,
    DefineLambda,
    Freeze,
    Unfreeze,
    Satisfied,
    InitLower,
    Initialize,
    FillerPrivate,
    FillerCompanionTheta,
    FillerCompanionLambda,
};

std::string_view kind_name(EventKind kind);
// Field names for a kind, terminated by nullptr; at most 3 fields.
const char* const* kind_fields(EventKind kind);
int kind_arity(EventKind kind);

struct TraceEvent {
    Nat seq = 0;
    Nat stage = 0;
    Author author;
    EventKind kind = EventKind::Stage;
    std::array<Nat, 3> args{};

    Nat arg(int idx) const { return args[static_cast<std::size_t>(idx)]; }
};

// Appends the formatted line (with trailing newline) to out.
void format_event(const TraceEvent& ev, std::string& out);
std::string format_event(const TraceEvent& ev);

// Parses one line; throws ConstructionError with a description on malformed
// input.
TraceEvent parse_event(std::string_view line);

// Trace files carry the scenario they were produced from in a comment header:
//
//   # fipsim-trace 1
//   # scenario {
//   # <scenario line>
//   # ...
//   # }
//   <event lines>
struct TraceFile {
    std::string scenario_text;
    std::vector<TraceEvent> events;
};

std::string trace_file_header(const std::string& scenario_text);
TraceFile parse_trace_text(std::string_view text);

// FNV-1a over the raw bytes; used as the trace digest.
std::uint64_t fnv1a64(std::string_view bytes);

} // namespace fipsim
