#pragma once

#include "fipsim/coding.hpp"
#include "fipsim/ids.hpp"
#include "fipsim/oracle.hpp"
#include "fipsim/targets.hpp"
#include "fipsim/trace.hpp"

#include <map>
#include <optional>
#include <vector>

namespace fipsim {

// One primitive update emitted by a routine. Updates reuse the trace event
// vocabulary: the engine applies each in order, stamping author/stage/seq.
struct Update {
    EventKind kind;
    std::array<Nat, 3> args{};

    static Update of(EventKind k, Nat a0 = 0, Nat a1 = 0, Nat a2 = 0) {
        return Update{k, {a0, a1, a2}};
    }
};

// Local data of a D_n run: the current witness, if chosen.
struct DLocal {
    int state = 1; // 1 waiting, 2 terminal reached
    std::optional<Nat> witness;
};

// Local data of an R_l run.
struct RLocal {
    int state = 1;                 // 1 start, 2 wait-Delta, 3 wait-Phi, 4 trap wait
    Nat v = 0;                     // bait counter, set to 1 on entering State 2
    std::optional<Nat> trap;       // b*
    std::vector<Nat> baits;        // a_1 .. a_{|baits|}
    std::vector<Nat> xvals;        // x_r for baits with converged Delta
    std::optional<Nat> yv;         // current Phi value, State 4 only
    Nat tied = 0;                  // baits[0..tied) carry Theta(a) = b*
};

struct RequirementState {
    RequirementId id;
    bool satisfied = false;
    DLocal d;
    RLocal r;

    // State 1 with empty local data and not satisfied.
    bool pristine() const {
        if (satisfied) return false;
        if (id.is_d()) return d.state == 1 && !d.witness;
        return r.state == 1 && r.baits.empty() && !r.trap;
    }
};

// Oracles bound to one slot.
struct SlotOracles {
    PartialFn phi = PartialFn::divergent();   // D
    PartialFn delta = PartialFn::divergent(); // R
    PartialFn phik = PartialFn::divergent();  // R
};

// Read-only view of the engine state a routine may consult.
struct EngineView {
    Nat stage = 0;
    const std::map<Nat, Nat>* a_entry_stage = nullptr; // A_s with entry stages
    const TargetSpace* space = nullptr;                // the routine's own m (R only)
    const FreezeRegistry* freezes = nullptr;
};

// Runs one visit of the requirement: chains state transitions within the
// stage until a waiting clause or the terminal action, mutating the local
// data and returning the primitive updates in application order. Fresh picks
// go through alloc immediately so later picks in the same visit see them.
std::vector<Update> visit_requirement(RequirementState& req, const SlotOracles& oracles,
                                      const EngineView& view, FreshAllocator& alloc);

// Resets the requirement to State 1 with empty local data, clearing the
// satisfied flag. Returns the (m, z) cells this requirement must unfreeze,
// ascending; the caller applies and records them.
std::vector<std::pair<Nat, Nat>> initialize_requirement(RequirementState& req,
                                                        const FreezeRegistry& freezes);

} // namespace fipsim
