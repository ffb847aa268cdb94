#include "fipsim/verifier.hpp"

#include "fipsim/coding.hpp"
#include "fipsim/replay_oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace fipsim {

std::string_view result_name(Verdict::Result r) {
    switch (r) {
    case Verdict::Result::Pass: return "pass";
    case Verdict::Result::Fail: return "fail";
    case Verdict::Result::Indeterminate: return "indeterminate";
    default: return "not-applicable";
    }
}

std::string_view RunRecord::event_text() const {
    std::string_view text = trace_text;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != '#') break;
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) return std::string_view{};
        pos = nl + 1;
    }
    return text.substr(pos);
}

namespace {

struct Replayer {
    explicit Replayer(const Scenario& sc) : scenario(sc) {
        dense_bound = sc.stages + 1;
        state.stages_run = sc.stages;
    }

    const Scenario& scenario;
    Nat dense_bound;
    Snapshot state;
    std::map<Nat, std::vector<ReqRun>> runs;
    std::vector<std::string> duplicate_defines;
    Nat visit_ordinal = 0;

    TargetSpace& target(Nat m) {
        auto it = state.targets.find(m);
        if (it == state.targets.end()) {
            it = state.targets.emplace(m, TargetSpace(m, dense_bound)).first;
        }
        return it->second;
    }

    RequirementState& req(Nat p) {
        auto it = state.reqs.find(p);
        if (it == state.reqs.end()) {
            RequirementState rs;
            rs.id = RequirementId::from_priority(p);
            it = state.reqs.emplace(p, std::move(rs)).first;
        }
        return it->second;
    }

    ReqRun& run(Nat p, Nat seq) {
        auto& vec = runs[p];
        if (vec.empty()) {
            ReqRun r;
            r.priority = p;
            r.ordinal = 0;
            r.first_seq = seq;
            vec.push_back(r);
        }
        return vec.back();
    }

    void define(WriteOnceMap& map, const char* which, Nat m, Nat key, Nat val, Nat stage,
                const Author& author, Nat seq) {
        if (map.defined(key)) {
            auto first = map.birth(key);
            std::ostringstream os;
            os << which << " m=" << m << " key=" << key << " redefined at seq=" << seq
               << " (first defined at stage " << (first ? first->stage : 0) << ")";
            duplicate_defines.push_back(os.str());
            return;
        }
        map.define(key, val, stage, author);
    }

    void apply(const TraceEvent& ev) {
        switch (ev.kind) {
        case EventKind::Stage:
            break;
        case EventKind::Visit:
            ++visit_ordinal;
            req(ev.author.req.priority);
            run(ev.author.req.priority, ev.seq).any_events = true;
            break;
        case EventKind::PickWitness: {
            Nat p = ev.author.req.priority;
            req(p).d.witness = ev.arg(0);
            run(p, ev.seq).witness = ev.arg(0);
            break;
        }
        case EventKind::OraclePhi: {
            Nat p = ev.author.req.priority;
            run(p, ev.seq).phi_answer = ev.arg(1);
            break;
        }
        case EventKind::PickBait: {
            Nat p = ev.author.req.priority;
            req(p).r.baits.push_back(ev.arg(1));
            auto& r = run(p, ev.seq);
            r.baits.push_back(ev.arg(1));
            r.bait_seqs.push_back(ev.seq);
            break;
        }
        case EventKind::PickTrap: {
            Nat p = ev.author.req.priority;
            req(p).r.trap = ev.arg(0);
            run(p, ev.seq).trap = ev.arg(0);
            break;
        }
        case EventKind::OracleDelta: {
            Nat p = ev.author.req.priority;
            req(p).r.xvals.push_back(ev.arg(2));
            run(p, ev.seq).xvals.push_back(ev.arg(2));
            break;
        }
        case EventKind::OraclePhiK: {
            Nat p = ev.author.req.priority;
            req(p).r.yv = ev.arg(2);
            run(p, ev.seq).yvals.push_back(ev.arg(2));
            break;
        }
        case EventKind::StateChange: {
            Nat p = ev.author.req.priority;
            auto& rq = req(p);
            if (rq.id.is_d()) rq.d.state = static_cast<int>(ev.arg(0));
            else rq.r.state = static_cast<int>(ev.arg(0));
            break;
        }
        case EventKind::SetCounter:
            req(ev.author.req.priority).r.v = ev.arg(0);
            break;
        case EventKind::DropY: {
            Nat p = ev.author.req.priority;
            req(p).r.yv = std::nullopt;
            run(p, ev.seq).passive_loops += 1;
            break;
        }
        case EventKind::TrapExit: {
            Nat p = ev.author.req.priority;
            auto& r = run(p, ev.seq);
            r.trap_exit_c = ev.arg(1);
            r.trap_exit_in_a = ev.arg(2);
            r.terminal = ReqRun::Terminal::TrapExit;
            r.terminal_stage = ev.stage;
            break;
        }
        case EventKind::Enumerate: {
            state.a_entry_stage.emplace(ev.arg(0), ev.stage);
            if (ev.author.is_requirement()) {
                Nat p = ev.author.req.priority;
                auto& r = run(p, ev.seq);
                r.enumerated.push_back(ev.arg(0));
                r.enumerate_seqs.push_back(ev.seq);
                r.enumerate_visits.push_back(visit_ordinal);
            }
            break;
        }
        case EventKind::DefineTheta: {
            define(target(ev.arg(0)).theta, "theta", ev.arg(0), ev.arg(1), ev.arg(2), ev.stage,
                   ev.author, ev.seq);
            if (ev.author.is_requirement()) {
                run(ev.author.req.priority, ev.seq).ties[ev.arg(1)] = ev.arg(2);
            }
            break;
        }
        case EventKind::DefineLambda:
            define(target(ev.arg(0)).lambda, "lambda", ev.arg(0), ev.arg(1), ev.arg(2), ev.stage,
                   ev.author, ev.seq);
            break;
        case EventKind::Freeze:
            if (!state.freezes.is_frozen(ev.arg(0), ev.arg(1))) {
                state.freezes.freeze(ev.arg(0), ev.arg(1), ev.author.req);
            }
            break;
        case EventKind::Unfreeze: {
            auto owner = state.freezes.owner(ev.arg(0), ev.arg(1));
            if (owner) state.freezes.unfreeze(ev.arg(0), ev.arg(1), *owner);
            break;
        }
        case EventKind::Satisfied: {
            Nat p = ev.author.req.priority;
            req(p).satisfied = true;
            auto& r = run(p, ev.seq);
            if (r.terminal == ReqRun::Terminal::None) {
                r.terminal = ev.author.req.is_d() ? ReqRun::Terminal::DTerminal
                                                  : ReqRun::Terminal::Collision;
            }
            r.terminal_stage = ev.stage;
            break;
        }
        case EventKind::InitLower:
            break;
        case EventKind::Initialize: {
            Nat q = ev.arg(0);
            auto& rq = req(q);
            rq.satisfied = false;
            rq.d = DLocal{};
            rq.r = RLocal{};
            auto& vec = runs[q];
            if (!vec.empty()) vec.back().initialized_after = true;
            ReqRun fresh;
            fresh.priority = q;
            fresh.ordinal = vec.size();
            fresh.first_seq = ev.seq;
            vec.push_back(fresh);
            break;
        }
        case EventKind::FillerPrivate: {
            auto& sp = target(ev.arg(0));
            define(sp.theta, "theta", ev.arg(0), ev.arg(1), ev.arg(1), ev.stage, ev.author, ev.seq);
            define(sp.lambda, "lambda", ev.arg(0), ev.arg(1), ev.arg(1), ev.stage, ev.author,
                   ev.seq);
            break;
        }
        case EventKind::FillerCompanionTheta: {
            auto& sp = target(ev.arg(0));
            define(sp.theta, "theta", ev.arg(0), ev.arg(1), ev.arg(2), ev.stage, ev.author, ev.seq);
            define(sp.lambda, "lambda", ev.arg(0), ev.arg(2), ev.arg(1), ev.stage, ev.author,
                   ev.seq);
            break;
        }
        case EventKind::FillerCompanionLambda: {
            auto& sp = target(ev.arg(0));
            define(sp.lambda, "lambda", ev.arg(0), ev.arg(1), ev.arg(2), ev.stage, ev.author,
                   ev.seq);
            define(sp.theta, "theta", ev.arg(0), ev.arg(2), ev.arg(1), ev.stage, ev.author, ev.seq);
            break;
        }
        }
        for (int a = 0; a < kind_arity(ev.kind); ++a) {
            if (ev.arg(a) > state.high_water) state.high_water = ev.arg(a);
        }
        if (ev.stage > state.high_water) state.high_water = ev.stage;
    }
};

} // namespace

RunRecord make_record(const Scenario& scenario, std::string trace_text) {
    RunRecord record;
    record.scenario = scenario;
    record.trace_text = std::move(trace_text);
    TraceFile tf = parse_trace_text(record.trace_text);
    record.events = std::move(tf.events);
    Replayer rp(scenario);
    for (const auto& ev : record.events) {
        rp.apply(ev);
    }
    rp.state.event_count = record.events.size();
    record.final_state = std::move(rp.state);
    record.runs = std::move(rp.runs);
    record.duplicate_defines = std::move(rp.duplicate_defines);
    return record;
}

RunRecord make_record(const Scenario& scenario, const RunResult& result) {
    return make_record(scenario, result.trace_text);
}

namespace {

std::vector<std::tuple<Nat, Nat, Nat, Nat>> map_rows(const WriteOnceMap& map) {
    std::vector<std::tuple<Nat, Nat, Nat, Nat>> rows;
    map.for_each([&](Nat k, Nat v, const Birth& b) {
        rows.emplace_back(k, v, b.stage, pack_author(b.author));
    });
    return rows;
}

} // namespace

bool snapshots_equal(const Snapshot& a, const Snapshot& b, std::string* why) {
    auto complain = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (a.a_entry_stage != b.a_entry_stage) return complain("A sets differ");
    if (a.high_water != b.high_water) {
        return complain("high-water marks differ: " + std::to_string(a.high_water) + " vs " +
                        std::to_string(b.high_water));
    }
    if (a.targets.size() != b.targets.size()) return complain("target-space counts differ");
    for (const auto& [m, sa] : a.targets) {
        auto it = b.targets.find(m);
        if (it == b.targets.end()) return complain("missing target space m=" + std::to_string(m));
        if (map_rows(sa.theta) != map_rows(it->second.theta)) {
            return complain("theta tables differ at m=" + std::to_string(m));
        }
        if (map_rows(sa.lambda) != map_rows(it->second.lambda)) {
            return complain("lambda tables differ at m=" + std::to_string(m));
        }
    }
    std::vector<std::tuple<Nat, Nat, Nat>> fa, fb;
    a.freezes.for_each([&](Nat m, Nat z, const RequirementId& o) { fa.emplace_back(m, z, o.priority); });
    b.freezes.for_each([&](Nat m, Nat z, const RequirementId& o) { fb.emplace_back(m, z, o.priority); });
    if (fa != fb) return complain("freeze registries differ");
    if (a.reqs.size() != b.reqs.size()) return complain("requirement counts differ");
    for (const auto& [p, ra] : a.reqs) {
        auto it = b.reqs.find(p);
        if (it == b.reqs.end()) return complain("missing requirement p=" + std::to_string(p));
        const auto& rb = it->second;
        bool same = ra.satisfied == rb.satisfied;
        if (ra.id.is_d()) {
            same = same && ra.d.state == rb.d.state && ra.d.witness == rb.d.witness;
        } else {
            same = same && ra.r.state == rb.r.state && ra.r.v == rb.r.v &&
                   ra.r.trap == rb.r.trap && ra.r.baits == rb.r.baits &&
                   ra.r.xvals == rb.r.xvals && ra.r.yv == rb.r.yv;
        }
        if (!same) return complain("requirement state differs at p=" + std::to_string(p));
    }
    return true;
}

// ---------------------------------------------------------------------------
// Settledness

Settledness settled_for(const RunRecord& record, Nat m, Nat horizon) {
    const Scenario& sc = record.scenario;
    if (sc.mode == Scenario::Mode::Enumeration) {
        return {false, "enumeration mode has no convergence certificate"};
    }
    if (sc.stages == 0) return {false, "no stages were run"};
    Nat last_stage = sc.stages - 1;
    auto entry_converged = [&](Nat x, const std::pair<Nat, Nat>& yz) {
        Nat sigma0 = std::max(x, std::max(yz.first, yz.second)) + 1;
        return sigma0 <= last_stage;
    };
    for (const auto& [p, binding] : sc.bindings) {
        const std::optional<ScriptedFn>* tables[] = {&binding.phi, &binding.delta, &binding.phik};
        for (const auto* t : tables) {
            if (!*t) continue;
            for (const auto& [x, yz] : (*t)->entries) {
                if (!entry_converged(x, yz)) {
                    return {false, "oracle entry for input " + std::to_string(x) +
                                       " of slot p=" + std::to_string(p) +
                                       " has not converged within the stage budget"};
                }
            }
        }
    }
    auto table_has = [](const std::optional<ScriptedFn>& t, Nat x) {
        return t && t->entries.count(x) != 0;
    };
    for (const auto& [p, req] : record.final_state.reqs) {
        if (req.satisfied || req.pristine()) continue;
        auto bit = sc.bindings.find(p);
        const SlotBinding* b = bit == sc.bindings.end() ? nullptr : &bit->second;
        if (req.id.is_d()) {
            if (req.d.state == 1 && req.d.witness &&
                (!b || !table_has(b->phi, *req.d.witness))) {
                continue; // parked on a divergent oracle
            }
            return {false, req.id.str() + " is not settled"};
        }
        if (req.r.state == 2 && !req.r.baits.empty() &&
            (!b || !table_has(b->delta, req.r.baits.back()))) {
            continue;
        }
        if (req.r.state == 3 && !req.r.xvals.empty() &&
            (!b || !table_has(b->phik, req.r.xvals.back()))) {
            continue;
        }
        return {false, req.id.str() + " is not settled (state " +
                           std::to_string(req.r.state) + ")"};
    }
    auto it = record.final_state.targets.find(m);
    if (it == record.final_state.targets.end()) {
        return {false, "no coding maps exist for m=" + std::to_string(m)};
    }
    for (Nat z = 0; z <= horizon; ++z) {
        if (!it->second.theta.defined(z) || !it->second.lambda.defined(z)) {
            return {false, "Theta/Lambda undefined at z=" + std::to_string(z) +
                               " for m=" + std::to_string(m)};
        }
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// Checks

namespace {

Verdict make_verdict(const std::string& name, Verdict::Result r, std::string detail = "") {
    Verdict v;
    v.check = name;
    v.result = r;
    v.detail = std::move(detail);
    return v;
}

const ReqRun* last_active_run(const RunRecord& record, Nat p) {
    auto it = record.runs.find(p);
    if (it == record.runs.end() || it->second.empty()) return nullptr;
    // last run with any substance; trailing empty run records appear after a
    // final initialization
    for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
        if (rit->any_events || !rit->baits.empty() || rit->witness) return &*rit;
    }
    return &it->second.back();
}

std::vector<Nat> bound_r_slots(const Scenario& sc) {
    std::vector<Nat> ls;
    for (const auto& [p, b] : sc.bindings) {
        (void)b;
        if (p % 2 == 1) ls.push_back((p - 1) / 2);
    }
    return ls;
}

} // namespace

Verdict check_write_once(const RunRecord& record) {
    if (record.duplicate_defines.empty()) {
        return make_verdict("write-once", Verdict::Result::Pass);
    }
    Verdict v = make_verdict("write-once", Verdict::Result::Fail,
                             record.duplicate_defines.front());
    v.stats["violations"] = record.duplicate_defines.size();
    return v;
}

Verdict check_sigma_dichotomy(const RunRecord& record, Nat horizon) {
    // module-authored theta definitions per (m, z), with the authoring run
    std::map<std::pair<Nat, Nat>, std::vector<const ReqRun*>> ties;
    for (const auto& [p, runs] : record.runs) {
        (void)p;
        for (const auto& run : runs) {
            for (const auto& [z, val] : run.ties) {
                (void)val;
                RequirementId id = RequirementId::from_priority(run.priority);
                ties[{id.m, z}].push_back(&run);
            }
        }
    }
    Nat examined = 0;
    for (const auto& [m, space] : record.final_state.targets) {
        for (Nat x = 0; x <= horizon; ++x) {
            auto sigma = space.sigma(x);
            if (!sigma) continue;
            ++examined;
            auto tie_it = ties.find({m, x});
            if (tie_it == ties.end()) {
                if (*sigma != x) {
                    return make_verdict(
                        "sigma-dichotomy", Verdict::Result::Fail,
                        "untied point x=" + std::to_string(x) + " (m=" + std::to_string(m) +
                            ") has sigma=" + std::to_string(*sigma));
                }
            } else if (tie_it->second.size() > 1) {
                return make_verdict("sigma-dichotomy", Verdict::Result::Fail,
                                    "x=" + std::to_string(x) + " tied by more than one run");
            } else {
                const ReqRun* run = tie_it->second.front();
                if (run->baits.empty() || *sigma != run->baits.front()) {
                    return make_verdict(
                        "sigma-dichotomy", Verdict::Result::Fail,
                        "tied point x=" + std::to_string(x) + " has sigma=" +
                            std::to_string(*sigma) + " instead of its run's anchor");
                }
            }
        }
    }
    Verdict v = make_verdict("sigma-dichotomy", Verdict::Result::Pass);
    v.stats["points"] = examined;
    return v;
}

Verdict check_block_atomicity(const RunRecord& record) {
    for (const auto& [p, runs] : record.runs) {
        for (const auto& run : runs) {
            if (run.enumerated.empty()) continue;
            RequirementId id = RequirementId::from_priority(p);
            if (id.is_d() && run.enumerated.size() > 1) {
                return make_verdict("block-atomicity", Verdict::Result::Fail,
                                    id.str() + " enumerated more than one element");
            }
            for (std::size_t i = 1; i < run.enumerate_seqs.size(); ++i) {
                if (run.enumerate_visits[i] != run.enumerate_visits[0] ||
                    run.enumerate_seqs[i] != run.enumerate_seqs[i - 1] + 1) {
                    return make_verdict(
                        "block-atomicity", Verdict::Result::Fail,
                        id.str() + " split its anchor block across events seq=" +
                            std::to_string(run.enumerate_seqs[i - 1]) + " and seq=" +
                            std::to_string(run.enumerate_seqs[i]));
                }
            }
        }
    }
    return make_verdict("block-atomicity", Verdict::Result::Pass);
}

Verdict check_equivalence(const RunRecord& record, Nat m, Nat horizon) {
    std::string name = "equivalence";
    if (record.scenario.mode == Scenario::Mode::Enumeration) {
        // machine-backed oracles carry no convergence certificate, so a
        // finite window can never be declared settled
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "no settledness certificate in enumeration mode");
    }
    auto settled = settled_for(record, m, horizon);
    if (!settled.settled) {
        return make_verdict(name, Verdict::Result::Indeterminate, settled.reason);
    }
    const auto& space = record.final_state.targets.at(m);
    const auto& a = record.final_state.a_entry_stage;
    for (Nat x = 0; x <= horizon; ++x) {
        auto sigma = space.sigma(x);
        if (!sigma) {
            return make_verdict(name, Verdict::Result::Indeterminate,
                                "sigma undefined at x=" + std::to_string(x));
        }
        bool lhs = a.count(x) != 0;
        bool rhs = a.count(*sigma) != 0;
        if (lhs != rhs) {
            return make_verdict(name, Verdict::Result::Fail,
                                "x=" + std::to_string(x) + ": x in A is " +
                                    (lhs ? "true" : "false") + " but sigma(x)=" +
                                    std::to_string(*sigma) + " in A is " +
                                    (rhs ? "true" : "false"));
        }
    }
    Verdict v = make_verdict(name, Verdict::Result::Pass);
    v.stats["m"] = m;
    v.stats["horizon"] = horizon;
    return v;
}

Verdict check_injury_bound(const RunRecord& record) {
    std::map<Nat, Nat> inits;      // target priority -> count
    std::map<Nat, Nat> terminals;  // actor priority -> satisfied count
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Initialize) inits[ev.arg(0)] += 1;
        if (ev.kind == EventKind::Satisfied) terminals[ev.author.req.priority] += 1;
    }
    for (const auto& [q, count] : inits) {
        Nat higher = 0;
        for (const auto& [p, t] : terminals) {
            if (p < q) higher += t;
        }
        if (count > higher) {
            return make_verdict("injury-bound", Verdict::Result::Fail,
                                "Q_" + std::to_string(q) + " initialized " +
                                    std::to_string(count) + " times but higher priorities acted " +
                                    std::to_string(higher) + " times");
        }
    }
    return make_verdict("injury-bound", Verdict::Result::Pass);
}

Verdict check_fibre_growth(const RunRecord& record, Nat l) {
    std::string name = "fibre-growth";
    const ReqRun* run = last_active_run(record, 2 * l + 1);
    if (!run || !run->trap) {
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "R:l=" + std::to_string(l) + " never chose a trap");
    }
    if (run->passive_loops < 2) {
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "R:l=" + std::to_string(l) + " looped passively " +
                                std::to_string(run->passive_loops) + " time(s)");
    }
    std::set<Nat> fibre;
    Nat hits = 0;
    for (std::size_t i = 0; i < run->yvals.size(); ++i) {
        if (run->yvals[i] == *run->trap) {
            ++hits;
            fibre.insert(run->xvals[i]);
        }
    }
    std::set<Nat> distinct(run->xvals.begin(), run->xvals.end());
    if (distinct.size() != run->xvals.size()) {
        return make_verdict(name, Verdict::Result::Fail, "fibre inputs are not pairwise distinct");
    }
    Verdict v = make_verdict(name, Verdict::Result::Pass);
    v.stats["cardinality"] = hits;
    v.stats["loops"] = run->passive_loops;
    v.detail = "fibre of the trap point has " + std::to_string(hits) +
               " pairwise distinct inputs";
    return v;
}

Verdict check_defeat_witness(const RunRecord& record, Nat l) {
    std::string name = "defeat-witness";
    const ReqRun* run = last_active_run(record, 2 * l + 1);
    if (!run) {
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "R:l=" + std::to_string(l) + " never ran");
    }
    const auto& a = record.final_state.a_entry_stage;
    RequirementId id = RequirementId::from_priority(2 * l + 1);
    if (run->terminal == ReqRun::Terminal::Collision) {
        // two baits received the same Delta value; the earlier one was
        // enumerated with the block, the collision witness stayed out
        if (run->xvals.size() < 2) {
            return make_verdict(name, Verdict::Result::Fail, "collision with fewer than two baits");
        }
        Nat xv = run->xvals.back();
        std::size_t u = run->xvals.size();
        for (std::size_t i = 0; i + 1 < run->xvals.size(); ++i) {
            if (run->xvals[i] == xv) {
                u = i;
                break;
            }
        }
        if (u == run->xvals.size()) {
            return make_verdict(name, Verdict::Result::Fail, "no colliding earlier bait found");
        }
        Nat au = run->baits[u];
        Nat av = run->baits.back();
        bool ok = a.count(au) != 0 && a.count(av) == 0;
        if (!ok) {
            return make_verdict(name, Verdict::Result::Fail,
                                "collision witness placement wrong: a_u=" + std::to_string(au) +
                                    " a_v=" + std::to_string(av));
        }
        Verdict v = make_verdict(name, Verdict::Result::Pass,
                                 "collision: equal reduction values " + std::to_string(xv) +
                                     " with a_u in A and a_v outside A");
        v.stats["branch"] = 0;
        return v;
    }
    if (run->terminal != ReqRun::Terminal::TrapExit) {
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "R:l=" + std::to_string(l) + " performed no State-4 terminal action");
    }
    Nat xv = run->xvals.back();
    Nat yv = run->yvals.back();
    Nat av = run->baits.back();
    // W_i as the Delta-consistent closure: x_v in W_i iff its bait entered A
    bool x_in_w = a.count(av) != 0;
    auto it = record.final_state.targets.find(id.m);
    if (it == record.final_state.targets.end()) {
        return make_verdict(name, Verdict::Result::Fail, "no coding maps for the slot's m");
    }
    auto b_mem = it->second.b_member(yv, a);
    if (!b_mem) {
        return make_verdict(name, Verdict::Result::Fail,
                            "B-membership of y_v=" + std::to_string(yv) + " undefined");
    }
    bool first = x_in_w && !*b_mem;
    bool second = !x_in_w && *b_mem;
    if (first == second) {
        return make_verdict(name, Verdict::Result::Fail,
                            "trap witness satisfies neither or both disjuncts (x_v=" +
                                std::to_string(xv) + ", y_v=" + std::to_string(yv) + ")");
    }
    Verdict v = make_verdict(name, Verdict::Result::Pass,
                             first ? "x_v in W_i and y_v outside B_m"
                                   : "x_v outside W_i and y_v in B_m");
    v.stats["branch"] = first ? 1 : 2;
    return v;
}

Verdict check_freeze_respect(const RunRecord& record) {
    std::set<std::pair<Nat, Nat>> frozen;
    for (const auto& ev : record.events) {
        switch (ev.kind) {
        case EventKind::Freeze:
            frozen.insert({ev.arg(0), ev.arg(1)});
            break;
        case EventKind::Unfreeze:
            frozen.erase({ev.arg(0), ev.arg(1)});
            break;
        case EventKind::FillerPrivate:
        case EventKind::FillerCompanionTheta:
        case EventKind::FillerCompanionLambda:
            if (frozen.count({ev.arg(0), ev.arg(1)})) {
                return make_verdict("freeze-respect", Verdict::Result::Fail,
                                    "filler acted on frozen cell (m=" + std::to_string(ev.arg(0)) +
                                        ", z=" + std::to_string(ev.arg(1)) + ") at seq=" +
                                        std::to_string(ev.seq));
            }
            break;
        default:
            break;
        }
    }
    return make_verdict("freeze-respect", Verdict::Result::Pass);
}

Verdict check_stage_convention(const RunRecord& record) {
    for (const auto& ev : record.events) {
        Nat in = 0, out = 0;
        bool oracle = false;
        if (ev.kind == EventKind::OraclePhi) {
            in = ev.arg(0);
            out = ev.arg(1);
            oracle = true;
        } else if (ev.kind == EventKind::OracleDelta || ev.kind == EventKind::OraclePhiK) {
            in = ev.arg(1);
            out = ev.arg(2);
            oracle = true;
        }
        if (oracle && (in >= ev.stage || out >= ev.stage)) {
            return make_verdict("stage-convention", Verdict::Result::Fail,
                                "oracle answer at seq=" + std::to_string(ev.seq) +
                                    " violates the convention (in=" + std::to_string(in) +
                                    ", out=" + std::to_string(out) + ", stage=" +
                                    std::to_string(ev.stage) + ")");
        }
    }
    return make_verdict("stage-convention", Verdict::Result::Pass);
}

Verdict check_tie_order(const RunRecord& record) {
    // within every visit: a module define-theta on a bait precedes that
    // bait's unfreeze
    std::map<std::pair<Nat, Nat>, Nat> theta_seq; // (author p, z) -> seq, current visit
    Nat current_visit = 0;
    std::map<std::pair<Nat, Nat>, Nat> theta_visit;
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Visit) ++current_visit;
        if (ev.kind == EventKind::DefineTheta && ev.author.is_requirement()) {
            theta_seq[{ev.author.req.priority, ev.arg(1)}] = ev.seq;
            theta_visit[{ev.author.req.priority, ev.arg(1)}] = current_visit;
        }
        if (ev.kind == EventKind::Unfreeze && ev.author.is_requirement()) {
            auto key = std::make_pair(ev.author.req.priority, ev.arg(1));
            auto it = theta_seq.find(key);
            if (it != theta_seq.end() && theta_visit[key] == current_visit &&
                it->second > ev.seq) {
                return make_verdict("tie-order", Verdict::Result::Fail,
                                    "bait unfrozen before it was tied at seq=" +
                                        std::to_string(ev.seq));
            }
        }
    }
    // collision baits stay untied by the module
    for (const auto& [p, runs] : record.runs) {
        (void)p;
        for (const auto& run : runs) {
            if (run.terminal == ReqRun::Terminal::Collision && !run.baits.empty() &&
                run.ties.count(run.baits.back())) {
                return make_verdict("tie-order", Verdict::Result::Fail,
                                    "collision bait was tied by its own module");
            }
        }
    }
    return make_verdict("tie-order", Verdict::Result::Pass);
}

Verdict check_visit_order(const RunRecord& record) {
    bool in_stage = false;
    bool filler_seen = false;
    std::optional<Nat> last_visit_priority;
    std::optional<Nat> expected_stage;
    std::pair<Nat, Nat> last_filler{0, 0};
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Stage) {
            Nat want = expected_stage ? *expected_stage : 0;
            if (ev.arg(0) != want || ev.stage != want) {
                return make_verdict("visit-order", Verdict::Result::Fail,
                                    "stage marker out of order at seq=" + std::to_string(ev.seq));
            }
            expected_stage = want + 1;
            in_stage = true;
            filler_seen = false;
            last_visit_priority.reset();
            continue;
        }
        if (!in_stage) {
            return make_verdict("visit-order", Verdict::Result::Fail,
                                "event before any stage marker at seq=" + std::to_string(ev.seq));
        }
        bool is_filler = ev.kind == EventKind::FillerPrivate ||
                         ev.kind == EventKind::FillerCompanionTheta ||
                         ev.kind == EventKind::FillerCompanionLambda;
        if (is_filler) {
            std::pair<Nat, Nat> cell{ev.arg(0), ev.arg(1)};
            if (filler_seen && cell < last_filler) {
                return make_verdict("visit-order", Verdict::Result::Fail,
                                    "filler events out of lexicographic order at seq=" +
                                        std::to_string(ev.seq));
            }
            last_filler = cell;
            filler_seen = true;
            continue;
        }
        if (filler_seen) {
            return make_verdict("visit-order", Verdict::Result::Fail,
                                "routine event after the filler at seq=" + std::to_string(ev.seq));
        }
        if (ev.kind == EventKind::Visit) {
            if (last_visit_priority && ev.arg(0) <= *last_visit_priority) {
                return make_verdict("visit-order", Verdict::Result::Fail,
                                    "visit priorities not increasing at seq=" +
                                        std::to_string(ev.seq));
            }
            last_visit_priority = ev.arg(0);
        }
    }
    return make_verdict("visit-order", Verdict::Result::Pass);
}

Verdict check_column_provenance(const RunRecord& record) {
    for (const auto& ev : record.events) {
        if (ev.kind != EventKind::Enumerate || !ev.author.is_requirement()) continue;
        const RequirementId& id = ev.author.req;
        ColumnTag tag = classify(ev.arg(0));
        bool ok = id.is_d() ? tag.kind == ColumnTag::Kind::Neutral
                            : tag == ColumnTag::trap(id.m, id.k);
        if (!ok) {
            return make_verdict("column-provenance", Verdict::Result::Fail,
                                id.str() + " enumerated " + std::to_string(ev.arg(0)) +
                                    " outside its column at seq=" + std::to_string(ev.seq));
        }
    }
    return make_verdict("column-provenance", Verdict::Result::Pass);
}

Verdict check_anchor_uniqueness(const RunRecord& record) {
    // Scope: runs that chose a trap and were never initialized afterwards.
    // The anchor must have the trap point as its only Lambda preimage, and
    // tied non-anchor baits must have none. One sweep per parameter collects
    // the preimage counts for every value of interest.
    struct Interest {
        const ReqRun* run;
        bool is_anchor;
    };
    std::map<Nat, std::map<Nat, Interest>> wanted; // m -> value -> who cares
    for (const auto& [p, runs] : record.runs) {
        if (p % 2 == 0) continue;
        RequirementId id = RequirementId::from_priority(p);
        for (const auto& run : runs) {
            if (!run.trap || run.baits.empty() || run.initialized_after) continue;
            wanted[id.m][run.baits.front()] = {&run, true};
            for (std::size_t i = 1; i < run.baits.size(); ++i) {
                if (run.ties.count(run.baits[i])) {
                    wanted[id.m][run.baits[i]] = {&run, false};
                }
            }
        }
    }
    for (const auto& [m, values] : wanted) {
        auto it = record.final_state.targets.find(m);
        if (it == record.final_state.targets.end()) continue;
        std::map<Nat, std::vector<Nat>> preimages;
        it->second.lambda.for_each([&](Nat z, Nat val, const Birth&) {
            auto vit = values.find(val);
            if (vit != values.end()) preimages[val].push_back(z);
        });
        for (const auto& [val, interest] : values) {
            const auto& pre = preimages[val];
            if (interest.is_anchor) {
                if (pre.size() != 1 || pre.front() != *interest.run->trap) {
                    return make_verdict("anchor-uniqueness", Verdict::Result::Fail,
                                        "anchor " + std::to_string(val) + " has " +
                                            std::to_string(pre.size()) +
                                            " Lambda preimage(s) instead of exactly its trap");
                }
            } else if (!pre.empty()) {
                return make_verdict("anchor-uniqueness", Verdict::Result::Fail,
                                    "tied bait " + std::to_string(val) +
                                        " acquired a Lambda preimage");
            }
        }
    }
    return make_verdict("anchor-uniqueness", Verdict::Result::Pass);
}

Verdict check_oracle_digest(const RunRecord& record) {
    std::string name = "oracle";
    const Scenario& sc = record.scenario;
    if (sc.mode != Scenario::Mode::Scripted) {
        return make_verdict(name, Verdict::Result::NotApplicable, "scripted scenarios only");
    }
    if (sc.bindings.size() > 3 || sc.stages > 4096) {
        return make_verdict(name, Verdict::Result::NotApplicable,
                            "scenario too large for the straight-line oracle");
    }
    OracleReplay expected = replay_oracle(sc);
    std::string_view got = record.event_text();
    Verdict v;
    v.check = name;
    v.stats["digest"] = fnv1a64(got);
    v.stats["expected-digest"] = expected.digest;
    if (got == expected.trace_text) {
        v.result = Verdict::Result::Pass;
        v.detail = "trace matches the independent replay byte for byte";
        return v;
    }
    // locate the first differing line for the witness
    std::size_t line_no = 1;
    std::size_t i = 0;
    std::size_t n = std::min(got.size(), expected.trace_text.size());
    while (i < n && got[i] == expected.trace_text[i]) {
        if (got[i] == '\n') ++line_no;
        ++i;
    }
    v.result = Verdict::Result::Fail;
    v.detail = "trace diverges from the independent replay at line " + std::to_string(line_no);
    return v;
}

std::vector<std::string> check_names() {
    return {"write-once",  "freeze-respect",    "stage-convention", "tie-order",
            "visit-order", "column-provenance", "block-atomicity",  "injury-bound",
            "sigma-dichotomy", "anchor-uniqueness", "equivalence",  "fibre-growth",
            "defeat-witness",  "oracle"};
}

std::vector<Verdict> run_checks(const RunRecord& record, const std::vector<std::string>& names) {
    std::vector<std::string> wanted = names;
    if (wanted.size() == 1 && wanted[0] == "all") wanted = check_names();
    Nat horizon = record.scenario.effective_horizon();
    std::vector<Nat> ls = bound_r_slots(record.scenario);
    std::vector<Nat> ms;
    for (Nat l : ls) ms.push_back(unpair(l).first);
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    if (ms.empty()) {
        Nat cap = record.scenario.stages == 0 ? 0 : record.scenario.stages - 1;
        for (Nat m = 0; m <= std::min<Nat>(8, cap); ++m) ms.push_back(m);
    }
    std::vector<Verdict> out;
    for (const auto& name : wanted) {
        if (name == "write-once") out.push_back(check_write_once(record));
        else if (name == "freeze-respect") out.push_back(check_freeze_respect(record));
        else if (name == "stage-convention") out.push_back(check_stage_convention(record));
        else if (name == "tie-order") out.push_back(check_tie_order(record));
        else if (name == "visit-order") out.push_back(check_visit_order(record));
        else if (name == "column-provenance") out.push_back(check_column_provenance(record));
        else if (name == "block-atomicity") out.push_back(check_block_atomicity(record));
        else if (name == "injury-bound") out.push_back(check_injury_bound(record));
        else if (name == "sigma-dichotomy") out.push_back(check_sigma_dichotomy(record, horizon));
        else if (name == "anchor-uniqueness") out.push_back(check_anchor_uniqueness(record));
        else if (name == "equivalence") {
            for (Nat m : ms) out.push_back(check_equivalence(record, m, horizon));
        } else if (name == "fibre-growth") {
            if (ls.empty()) {
                out.push_back(make_verdict("fibre-growth", Verdict::Result::NotApplicable,
                                           "no bound trap slots"));
            }
            for (Nat l : ls) out.push_back(check_fibre_growth(record, l));
        } else if (name == "defeat-witness") {
            if (ls.empty()) {
                out.push_back(make_verdict("defeat-witness", Verdict::Result::NotApplicable,
                                           "no bound trap slots"));
            }
            for (Nat l : ls) out.push_back(check_defeat_witness(record, l));
        } else if (name == "oracle") {
            out.push_back(check_oracle_digest(record));
        } else {
            throw ConstructionError("unknown check '" + name + "'");
        }
    }
    return out;
}

} // namespace fipsim
