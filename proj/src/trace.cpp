#include "fipsim/trace.hpp"

#include <charconv>
#include <cstring>

namespace fipsim {

namespace {

struct KindInfo {
    EventKind kind;
    const char* name;
    const char* fields[4]; // nullptr-terminated
};

constexpr KindInfo kKinds[] = {
    {EventKind::Stage, "stage", {"s", nullptr}},
    {EventKind::Visit, "visit", {"p", nullptr}},
    {EventKind::PickWitness, "pick-witness", {"x", nullptr}},
    {EventKind::OraclePhi, "oracle-phi", {"in", "out", nullptr}},
    {EventKind::PickBait, "pick-bait", {"v", "a", nullptr}},
    {EventKind::PickTrap, "pick-trap", {"b", nullptr}},
    {EventKind::OracleDelta, "oracle-delta", {"v", "in", "out", nullptr}},
    {EventKind::OraclePhiK, "oracle-phik", {"v", "in", "out", nullptr}},
    {EventKind::StateChange, "state-change", {"to", nullptr}},
    {EventKind::SetCounter, "set-counter", {"v", nullptr}},
    {EventKind::DropY, "drop-y", {nullptr}},
    {EventKind::TrapExit, "trap-exit", {"v", "c", "in_a", nullptr}},
    {EventKind::Enumerate, "enumerate", {"x", nullptr}},
    {EventKind::DefineTheta, "define-theta", {"m", "z", "val", nullptr}},
    {EventKind::DefineLambda, "define-lambda", {"m", "z", "val", nullptr}},
    {EventKind::Freeze, "freeze", {"m", "z", nullptr}},
    {EventKind::Unfreeze, "unfreeze", {"m", "z", nullptr}},
    {EventKind::Satisfied, "satisfied", {nullptr}},
    {EventKind::InitLower, "init-lower", {"p", nullptr}},
    {EventKind::Initialize, "initialize", {"p", nullptr}},
    {EventKind::FillerPrivate, "filler-private", {"m", "z", nullptr}},
    {EventKind::FillerCompanionTheta, "filler-companion-theta", {"m", "z", "y", nullptr}},
    {EventKind::FillerCompanionLambda, "filler-companion-lambda", {"m", "z", "x", nullptr}},
};

const KindInfo& info(EventKind kind) {
    return kKinds[static_cast<std::size_t>(kind)];
}

void append_nat(std::string& out, Nat v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

Nat parse_nat(std::string_view tok, std::string_view line) {
    Nat v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ConstructionError("trace parse: bad number '" + std::string(tok) + "' in line: " +
                                std::string(line));
    }
    return v;
}

} // namespace

std::string_view kind_name(EventKind kind) {
    return info(kind).name;
}

const char* const* kind_fields(EventKind kind) {
    return info(kind).fields;
}

int kind_arity(EventKind kind) {
    const auto& ki = info(kind);
    int n = 0;
    while (ki.fields[n]) ++n;
    return n;
}

void format_event(const TraceEvent& ev, std::string& out) {
    append_nat(out, ev.seq);
    out.push_back(' ');
    append_nat(out, ev.stage);
    out.push_back(' ');
    switch (ev.author.kind) {
    case Author::Kind::Engine:
        out += "engine";
        break;
    case Author::Kind::Filler:
        out += "filler";
        break;
    case Author::Kind::Requirement: {
        const auto& id = ev.author.req;
        if (id.is_d()) {
            out += "D:n=";
            append_nat(out, id.n);
        } else {
            out += "R:l=";
            append_nat(out, id.l);
            out += ",m=";
            append_nat(out, id.m);
            out += ",k=";
            append_nat(out, id.k);
        }
        break;
    }
    }
    out.push_back(' ');
    const auto& ki = info(ev.kind);
    out += ki.name;
    for (int a = 0; ki.fields[a]; ++a) {
        out.push_back(' ');
        out += ki.fields[a];
        out.push_back('=');
        append_nat(out, ev.args[static_cast<std::size_t>(a)]);
    }
    out.push_back('\n');
}

std::string format_event(const TraceEvent& ev) {
    std::string out;
    format_event(ev, out);
    return out;
}

namespace {

std::string_view next_token(std::string_view& rest) {
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    std::size_t end = rest.find(' ');
    std::string_view tok = rest.substr(0, end);
    rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    return tok;
}

Author parse_author(std::string_view tok, std::string_view line) {
    if (tok == "engine") return Author::engine();
    if (tok == "filler") return Author::filler();
    if (tok.substr(0, 4) == "D:n=") {
        Nat n = parse_nat(tok.substr(4), line);
        return Author::requirement(RequirementId::from_priority(2 * n));
    }
    if (tok.substr(0, 4) == "R:l=") {
        std::string_view rest = tok.substr(4);
        std::size_t comma = rest.find(',');
        if (comma == std::string_view::npos) {
            throw ConstructionError("trace parse: bad author in line: " + std::string(line));
        }
        Nat l = parse_nat(rest.substr(0, comma), line);
        return Author::requirement(RequirementId::from_priority(2 * l + 1));
    }
    throw ConstructionError("trace parse: unknown author '" + std::string(tok) + "'");
}

} // namespace

TraceEvent parse_event(std::string_view line) {
    std::string_view rest = line;
    TraceEvent ev;
    ev.seq = parse_nat(next_token(rest), line);
    ev.stage = parse_nat(next_token(rest), line);
    ev.author = parse_author(next_token(rest), line);
    std::string_view kind_tok = next_token(rest);
    bool found = false;
    for (const auto& ki : kKinds) {
        if (kind_tok == ki.name) {
            ev.kind = ki.kind;
            found = true;
            break;
        }
    }
    if (!found) {
        throw ConstructionError("trace parse: unknown event kind '" + std::string(kind_tok) + "'");
    }
    const auto& ki = info(ev.kind);
    for (int a = 0; ki.fields[a]; ++a) {
        std::string_view tok = next_token(rest);
        std::string_view want = ki.fields[a];
        if (tok.substr(0, want.size()) != want || tok.size() <= want.size() ||
            tok[want.size()] != '=') {
            throw ConstructionError("trace parse: expected field '" + std::string(want) +
                                    "' in line: " + std::string(line));
        }
        ev.args[static_cast<std::size_t>(a)] = parse_nat(tok.substr(want.size() + 1), line);
    }
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (!rest.empty()) {
        throw ConstructionError("trace parse: trailing junk in line: " + std::string(line));
    }
    return ev;
}

std::string trace_file_header(const std::string& scenario_text) {
    std::string out = "# fipsim-trace 1\n# scenario {\n";
    std::string_view rest = scenario_text;
    while (!rest.empty()) {
        std::size_t nl = rest.find('\n');
        std::string_view ln = rest.substr(0, nl);
        out += "# ";
        out += ln;
        out.push_back('\n');
        if (nl == std::string_view::npos) break;
        rest.remove_prefix(nl + 1);
    }
    out += "# }\n";
    return out;
}

TraceFile parse_trace_text(std::string_view text) {
    TraceFile tf;
    bool in_scenario = false;
    bool saw_magic = false;
    Nat expected_seq = 0;
    Nat last_stage = 0;
    bool have_stage = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            if (body == "fipsim-trace 1") {
                saw_magic = true;
            } else if (body == "scenario {") {
                in_scenario = true;
            } else if (body == "}") {
                in_scenario = false;
            } else if (in_scenario) {
                tf.scenario_text += body;
                tf.scenario_text.push_back('\n');
            }
            continue;
        }
        TraceEvent ev = parse_event(line);
        if (ev.seq != expected_seq) {
            throw ConstructionError("trace parse: sequence gap at seq " + std::to_string(ev.seq) +
                                    ", expected " + std::to_string(expected_seq));
        }
        ++expected_seq;
        if (have_stage && ev.stage < last_stage) {
            throw ConstructionError("trace parse: stage numbers decrease at seq " +
                                    std::to_string(ev.seq));
        }
        last_stage = ev.stage;
        have_stage = true;
        tf.events.push_back(ev);
    }
    if (!saw_magic && !tf.events.empty()) {
        // accept headerless event streams (tests build them directly)
    }
    return tf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace fipsim
