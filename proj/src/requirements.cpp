#include "fipsim/requirements.hpp"

namespace fipsim {

namespace {

constexpr int kMaxTransitions = 16; // a visit must reach a wait or a terminal

void emit(std::vector<Update>& out, EventKind k, Nat a0 = 0, Nat a1 = 0, Nat a2 = 0) {
    out.push_back(Update::of(k, a0, a1, a2));
}

std::vector<Update> visit_d(RequirementState& req, const SlotOracles& oracles,
                            const EngineView& view, FreshAllocator& alloc) {
    std::vector<Update> out;
    DLocal& d = req.d;
    if (d.state != 1) {
        throw ConstructionError(req.id.str() + ": visited in unexpected state " +
                                std::to_string(d.state));
    }
    if (!d.witness) {
        Nat x = alloc.fresh_in_column(view.stage, ColumnTag::neutral());
        d.witness = x;
        emit(out, EventKind::PickWitness, x);
    }
    auto y = approx_eval(oracles.phi, *d.witness, view.stage);
    if (!y) return out; // wait
    emit(out, EventKind::OraclePhi, *d.witness, *y);
    emit(out, EventKind::StateChange, 2);
    d.state = 2;
    if (*y == 0) {
        emit(out, EventKind::Enumerate, *d.witness);
    }
    emit(out, EventKind::Satisfied);
    req.satisfied = true;
    emit(out, EventKind::InitLower, req.id.priority);
    return out;
}

std::vector<Update> visit_r(RequirementState& req, const SlotOracles& oracles,
                            const EngineView& view, FreshAllocator& alloc) {
    std::vector<Update> out;
    RLocal& r = req.r;
    const Nat m = req.id.m;
    const Nat k = req.id.k;
    const Nat s = view.stage;
    const ColumnTag column = ColumnTag::trap(m, k);

    for (int guard = 0;; ++guard) {
        if (guard >= kMaxTransitions) {
            throw ConstructionError(req.id.str() + ": routine did not reach a waiting clause");
        }
        switch (r.state) {
        case 1: {
            r.v = 1;
            emit(out, EventKind::SetCounter, 1);
            emit(out, EventKind::StateChange, 2);
            r.state = 2;
            continue;
        }
        case 2: {
            if ((r.baits.size() != r.v && r.baits.size() + 1 != r.v) ||
                r.xvals.size() + 1 != r.v) {
                throw ConstructionError(req.id.str() + ": inconsistent local data in State 2");
            }
            if (r.baits.size() < r.v) {
                Nat a = alloc.fresh_in_column(s, column);
                r.baits.push_back(a);
                emit(out, EventKind::PickBait, r.v, a);
                emit(out, EventKind::Freeze, m, a);
                if (r.v == 1 && !r.trap) {
                    Nat b = alloc.fresh_in_column(s, column);
                    r.trap = b;
                    emit(out, EventKind::PickTrap, b);
                    emit(out, EventKind::DefineLambda, m, b, r.baits[0]);
                }
            }
            Nat a = r.baits[static_cast<std::size_t>(r.v - 1)];
            auto x = approx_eval(oracles.delta, a, s);
            if (!x) return out; // wait for Delta
            r.xvals.push_back(*x);
            emit(out, EventKind::OracleDelta, r.v, a, *x);
            emit(out, EventKind::StateChange, 3);
            r.state = 3;
            // collision test and tie step run now, within the same stage
            if (r.xvals.size() != r.v) {
                throw ConstructionError(req.id.str() + ": xvals out of step with counter");
            }
            Nat xv = r.xvals.back();
            bool collision = false;
            for (std::size_t u = 0; u + 1 < r.xvals.size(); ++u) {
                if (r.xvals[u] == xv) {
                    collision = true;
                    break;
                }
            }
            if (collision) {
                emit(out, EventKind::Unfreeze, m, a); // a_v stays untied
                // enumerate the already tied anchor block C^-; every earlier
                // bait passed the noncollision branch, so baits[0..tied) is
                // exactly {a_r : r < v, Theta(a_r) = b*}
                if (r.tied + 1 != r.v) {
                    throw ConstructionError(req.id.str() + ": tied block out of step");
                }
                for (Nat idx = 0; idx < r.tied; ++idx) {
                    emit(out, EventKind::Enumerate, r.baits[static_cast<std::size_t>(idx)]);
                }
                emit(out, EventKind::Satisfied);
                req.satisfied = true;
                emit(out, EventKind::InitLower, req.id.priority);
                return out;
            }
            emit(out, EventKind::DefineTheta, m, a, *r.trap); // tie before unfreezing
            r.tied += 1;
            emit(out, EventKind::Unfreeze, m, a);
            continue;
        }
        case 3: {
            if (r.xvals.size() != r.v || r.baits.size() != r.v) {
                throw ConstructionError(req.id.str() + ": inconsistent local data in State 3");
            }
            Nat xv = r.xvals.back();
            auto y = approx_eval(oracles.phik, xv, s);
            if (!y) return out; // wait for Phi
            r.yv = *y;
            emit(out, EventKind::OraclePhiK, r.v, xv, *y);
            emit(out, EventKind::StateChange, 4);
            r.state = 4;
            continue;
        }
        case 4: {
            if (!r.yv || !r.trap) {
                throw ConstructionError(req.id.str() + ": State 4 without y_v or trap");
            }
            if (*r.yv == *r.trap) {
                // passive loop: drop y_v, bump the counter, back to State 2
                emit(out, EventKind::DropY);
                r.yv = std::nullopt;
                r.v += 1;
                emit(out, EventKind::SetCounter, r.v);
                emit(out, EventKind::StateChange, 2);
                r.state = 2;
                continue;
            }
            Nat yv = *r.yv;
            if (view.freezes->is_frozen(m, yv)) return out;   // wait
            auto c = view.space->lambda.lookup(yv);
            if (!c) return out;                               // wait for the filler
            bool in_a = view.a_entry_stage->count(*c) != 0;
            emit(out, EventKind::TrapExit, r.v, *c, in_a ? 1 : 0);
            if (!in_a) {
                // enumerate the current tied anchor block C = baits[0..tied)
                if (r.tied != r.v) {
                    throw ConstructionError(req.id.str() + ": tied block out of step");
                }
                for (Nat idx = 0; idx < r.tied; ++idx) {
                    emit(out, EventKind::Enumerate, r.baits[static_cast<std::size_t>(idx)]);
                }
            }
            emit(out, EventKind::Satisfied);
            req.satisfied = true;
            emit(out, EventKind::InitLower, req.id.priority);
            return out;
        }
        default:
            throw ConstructionError(req.id.str() + ": corrupt local state");
        }
    }
}

} // namespace

std::vector<Update> visit_requirement(RequirementState& req, const SlotOracles& oracles,
                                      const EngineView& view, FreshAllocator& alloc) {
    if (req.satisfied) {
        throw ConstructionError(req.id.str() + ": satisfied requirements are not visited");
    }
    if (req.id.is_d()) return visit_d(req, oracles, view, alloc);
    return visit_r(req, oracles, view, alloc);
}

std::vector<std::pair<Nat, Nat>> initialize_requirement(RequirementState& req,
                                                        const FreezeRegistry& freezes) {
    std::vector<std::pair<Nat, Nat>> cells = freezes.held_by(req.id);
    req.satisfied = false;
    req.d = DLocal{};
    req.r = RLocal{};
    return cells;
}

} // namespace fipsim
