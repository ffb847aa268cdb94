#include "fipsim/engine.hpp"

namespace fipsim {

Engine::Engine(Scenario scenario) : scenario_(std::move(scenario)) {
    if (scenario_.stages >= 0xfffffffeull) {
        throw ConstructionError("stage budget exceeds the supported range");
    }
    dense_bound_ = scenario_.stages + 1;
    trace_ = trace_file_header(scenario_.serialize());
}

void Engine::emit(const Author& author, EventKind kind, Nat a0, Nat a1, Nat a2) {
    alloc_.note(a0);
    alloc_.note(a1);
    alloc_.note(a2);
    TraceEvent ev;
    ev.seq = seq_++;
    ev.stage = stage_;
    ev.author = author;
    ev.kind = kind;
    ev.args = {a0, a1, a2};
    format_event(ev, trace_);
}

TargetSpace& Engine::ensure_target(Nat m) {
    auto it = state_.targets.find(m);
    if (it == state_.targets.end()) {
        it = state_.targets.emplace(m, TargetSpace(m, dense_bound_)).first;
    }
    return it->second;
}

RequirementState& Engine::ensure_requirement(Nat p) {
    auto it = state_.reqs.find(p);
    if (it == state_.reqs.end()) {
        RequirementState rs;
        rs.id = RequirementId::from_priority(p);
        it = state_.reqs.emplace(p, std::move(rs)).first;
    }
    return it->second;
}

const SlotOracles& Engine::oracles_for(Nat p) {
    auto it = oracle_cache_.find(p);
    if (it != oracle_cache_.end()) return it->second;
    SlotOracles so;
    RequirementId id = RequirementId::from_priority(p);
    if (scenario_.mode == Scenario::Mode::Enumeration) {
        if (id.is_d()) {
            so.phi = PartialFn::machine(decode_program(id.n));
        } else {
            so.delta = PartialFn::machine(decode_program(id.j));
            so.phik = PartialFn::machine(decode_program(id.k));
        }
    } else {
        auto bit = scenario_.bindings.find(p);
        if (bit != scenario_.bindings.end()) {
            const SlotBinding& b = bit->second;
            if (b.phi) so.phi = PartialFn::scripted(*b.phi);
            if (b.delta) so.delta = PartialFn::scripted(*b.delta);
            if (b.phik) so.phik = PartialFn::scripted(*b.phik);
        }
    }
    return oracle_cache_.emplace(p, std::move(so)).first->second;
}

void Engine::apply_updates(const RequirementState& actor, const std::vector<Update>& updates) {
    const Author author = Author::requirement(actor.id);
    for (const Update& u : updates) {
        switch (u.kind) {
        case EventKind::Enumerate: {
            Nat x = u.args[0];
            state_.a_entry_stage.emplace(x, stage_); // set semantics: first entry stage wins
            emit(author, u.kind, x);
            break;
        }
        case EventKind::DefineTheta: {
            ensure_target(u.args[0]).theta.define(u.args[1], u.args[2], stage_, author);
            emit(author, u.kind, u.args[0], u.args[1], u.args[2]);
            break;
        }
        case EventKind::DefineLambda: {
            ensure_target(u.args[0]).lambda.define(u.args[1], u.args[2], stage_, author);
            emit(author, u.kind, u.args[0], u.args[1], u.args[2]);
            break;
        }
        case EventKind::Freeze:
            state_.freezes.freeze(u.args[0], u.args[1], actor.id);
            emit(author, u.kind, u.args[0], u.args[1]);
            break;
        case EventKind::Unfreeze:
            state_.freezes.unfreeze(u.args[0], u.args[1], actor.id);
            emit(author, u.kind, u.args[0], u.args[1]);
            break;
        case EventKind::InitLower: {
            emit(author, u.kind, actor.id.priority);
            for (Nat q = actor.id.priority + 1; q <= stage_; ++q) {
                auto it = state_.reqs.find(q);
                if (it == state_.reqs.end() || it->second.pristine()) continue;
                RequirementState& target = it->second;
                emit(Author::engine(), EventKind::Initialize, q);
                auto cells = initialize_requirement(target, state_.freezes);
                for (const auto& [fm, fz] : cells) {
                    state_.freezes.unfreeze(fm, fz, target.id);
                    emit(Author::requirement(target.id), EventKind::Unfreeze, fm, fz);
                }
            }
            break;
        }
        default:
            // local-data bookkeeping: pick-*, oracle-*, state-change, set-counter,
            // drop-y, trap-exit, satisfied. Recorded, no global mutation.
            emit(author, u.kind, u.args[0], u.args[1], u.args[2]);
            break;
        }
    }
}

void Engine::visit(Nat p) {
    RequirementState& req = ensure_requirement(p);
    if (req.satisfied) return;
    emit(Author::requirement(req.id), EventKind::Visit, p);
    EngineView view;
    view.stage = stage_;
    view.a_entry_stage = &state_.a_entry_stage;
    view.space = req.id.is_r() ? &ensure_target(req.id.m) : nullptr;
    view.freezes = &state_.freezes;
    auto updates = visit_requirement(req, oracles_for(p), view, alloc_);
    apply_updates(req, updates);
}

void Engine::filler_for(Nat m, Nat z, std::vector<Nat>& still_deferred) {
    ColumnTag tag = classify(z);
    if (tag.kind == ColumnTag::Kind::Trap && tag.m == m) {
        if (state_.freezes.is_frozen(m, z)) {
            still_deferred.push_back(z);
            return;
        }
        TargetSpace& space = ensure_target(m);
        if (!space.theta.defined(z)) {
            Nat y = alloc_.fresh_in_column(stage_, tag);
            space.theta.define(z, y, stage_, Author::filler());
            space.lambda.define(y, z, stage_, Author::filler());
            emit(Author::filler(), EventKind::FillerCompanionTheta, m, z, y);
        }
        if (!space.lambda.defined(z)) {
            Nat x = alloc_.fresh_in_column(stage_, tag);
            space.lambda.define(z, x, stage_, Author::filler());
            space.theta.define(x, z, stage_, Author::filler());
            emit(Author::filler(), EventKind::FillerCompanionLambda, m, z, x);
        }
        return;
    }
    // z outside every column of this m: privatize when both halves are open.
    TargetSpace& space = ensure_target(m);
    if (!space.theta.defined(z) && !space.lambda.defined(z)) {
        space.theta.define(z, z, stage_, Author::filler());
        space.lambda.define(z, z, stage_, Author::filler());
        emit(Author::filler(), EventKind::FillerPrivate, m, z);
    }
}

void Engine::run_filler() {
    // Lexicographic sweep over (m, z) with m, z <= stage. Pairs that can never
    // act again are dropped from future sweeps; that changes no event, only
    // the scan cost.
    for (Nat m = 0; m <= stage_; ++m) {
        std::vector<Nat> pending;
        auto dit = filler_deferred_.find(m);
        if (dit != filler_deferred_.end()) {
            pending = std::move(dit->second);
            filler_deferred_.erase(dit);
        }
        std::vector<Nat> still;
        if (m == stage_) {
            // new parameter: the whole range 0..stage is fresh
            for (Nat z = 0; z <= stage_; ++z) filler_for(m, z, still);
        } else {
            for (Nat z : pending) filler_for(m, z, still);
            filler_for(m, stage_, still);
        }
        if (!still.empty()) filler_deferred_[m] = std::move(still);
    }
}

void Engine::step() {
    alloc_.note(stage_);
    emit(Author::engine(), EventKind::Stage, stage_);
    for (Nat p = 0; p <= stage_; ++p) {
        visit(p);
    }
    run_filler();
    ++stage_;
}

RunResult Engine::run() {
    while (stage_ < scenario_.stages) {
        step();
    }
    state_.stages_run = scenario_.stages;
    state_.high_water = alloc_.high_water;
    state_.event_count = seq_;
    RunResult result;
    result.snapshot = std::move(state_);
    for (const auto& [p, req] : result.snapshot.reqs) {
        (void)p;
        if (req.satisfied) ++result.satisfied_count;
    }
    result.trace_text = std::move(trace_);
    return result;
}

std::string write_state_text(const Snapshot& snapshot) {
    std::string out = "# fipsim-state 1\n";
    out += "stage " + std::to_string(snapshot.stages_run) + "\n";
    out += "high-water " + std::to_string(snapshot.high_water) + "\n";
    for (const auto& [x, s] : snapshot.a_entry_stage) {
        out += "a " + std::to_string(x) + " " + std::to_string(s) + "\n";
    }
    for (const auto& [p, req] : snapshot.reqs) {
        out += "req " + std::to_string(p) + " " + req.id.str() + " state=" +
               std::to_string(req.id.is_d() ? req.d.state : req.r.state) + " satisfied=" +
               (req.satisfied ? "1" : "0") + "\n";
    }
    for (const auto& [m, space] : snapshot.targets) {
        // merged row per key: z theta tbirth tauthor lambda lbirth lauthor
        std::map<Nat, std::array<std::string, 6>> rows;
        space.theta.for_each([&](Nat z, Nat val, const Birth& b) {
            auto& row = rows[z];
            row[0] = std::to_string(val);
            row[1] = std::to_string(b.stage);
            row[2] = b.author.str();
        });
        space.lambda.for_each([&](Nat z, Nat val, const Birth& b) {
            auto& row = rows[z];
            row[3] = std::to_string(val);
            row[4] = std::to_string(b.stage);
            row[5] = b.author.str();
        });
        for (auto& [z, row] : rows) {
            out += "table " + std::to_string(m) + " " + std::to_string(z);
            for (auto& cell : row) {
                out += " ";
                out += cell.empty() ? "-" : cell;
            }
            out += "\n";
        }
    }
    return out;
}

} // namespace fipsim
