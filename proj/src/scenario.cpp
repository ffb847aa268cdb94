#include "fipsim/scenario.hpp"

#include "fipsim/ids.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace fipsim {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

Nat parse_nat_tok(const std::string& tok, int lineno, const char* what) {
    Nat v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ConstructionError("scenario line " + std::to_string(lineno) + ": bad " +
                                std::string(what) + " '" + tok + "'");
    }
    return v;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
    throw ConstructionError("scenario line " + std::to_string(lineno) + ": " + msg);
}

void append_table(std::string& out, const char* name, const std::optional<ScriptedFn>& fn) {
    if (!fn) return;
    for (const auto& [x, yz] : fn->entries) {
        out += "  ";
        out += name;
        out += " " + std::to_string(x) + " -> " + std::to_string(yz.first) + " steps " +
               std::to_string(yz.second) + "\n";
    }
}

} // namespace

std::string Scenario::serialize() const {
    std::string out;
    out += "mode ";
    out += mode == Mode::Scripted ? "scripted" : "enumeration";
    out += "\nstages " + std::to_string(stages) + "\n";
    if (horizon) out += "horizon " + std::to_string(*horizon) + "\n";
    for (const auto& [p, binding] : bindings) {
        RequirementId id = RequirementId::from_priority(p);
        if (id.is_d()) {
            out += "slot D n=" + std::to_string(id.n) + "\n";
            append_table(out, "phi", binding.phi);
        } else {
            out += "slot R l=" + std::to_string(id.l) + "\n";
            append_table(out, "delta", binding.delta);
            append_table(out, "phik", binding.phik);
        }
    }
    return out;
}

Scenario Scenario::parse(const std::string& text) {
    Scenario sc;
    bool saw_mode = false;
    bool saw_stages = false;
    std::optional<Nat> current_slot; // priority index
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "mode") {
            if (toks.size() != 2) fail(lineno, "expected: mode scripted|enumeration");
            if (toks[1] == "scripted") sc.mode = Mode::Scripted;
            else if (toks[1] == "enumeration") sc.mode = Mode::Enumeration;
            else fail(lineno, "unknown mode '" + toks[1] + "'");
            saw_mode = true;
        } else if (head == "stages") {
            if (toks.size() != 2) fail(lineno, "expected: stages <N>");
            sc.stages = parse_nat_tok(toks[1], lineno, "stage budget");
            saw_stages = true;
        } else if (head == "horizon") {
            if (toks.size() != 2) fail(lineno, "expected: horizon <N>");
            sc.horizon = parse_nat_tok(toks[1], lineno, "horizon");
        } else if (head == "slot") {
            if (toks.size() != 3) fail(lineno, "expected: slot D n=<n> | slot R l=<l>");
            Nat p = 0;
            if (toks[1] == "D") {
                if (toks[2].substr(0, 2) != "n=") fail(lineno, "expected n=<n>");
                p = 2 * parse_nat_tok(toks[2].substr(2), lineno, "slot index");
            } else if (toks[1] == "R") {
                if (toks[2].substr(0, 2) != "l=") fail(lineno, "expected l=<l>");
                p = 2 * parse_nat_tok(toks[2].substr(2), lineno, "slot index") + 1;
            } else {
                fail(lineno, "slot kind must be D or R");
            }
            if (sc.bindings.count(p)) fail(lineno, "duplicate slot binding");
            sc.bindings[p] = SlotBinding{};
            current_slot = p;
        } else if (head == "phi" || head == "delta" || head == "phik") {
            if (!current_slot) fail(lineno, "table entry outside a slot section");
            if (toks.size() != 6 || toks[2] != "->" || toks[4] != "steps") {
                fail(lineno, "expected: " + head + " <x> -> <y> steps <t>");
            }
            Nat x = parse_nat_tok(toks[1], lineno, "input");
            Nat y = parse_nat_tok(toks[3], lineno, "output");
            Nat t = parse_nat_tok(toks[5], lineno, "step count");
            RequirementId id = RequirementId::from_priority(*current_slot);
            SlotBinding& b = sc.bindings[*current_slot];
            std::optional<ScriptedFn>* table = nullptr;
            if (head == "phi" && id.is_d()) table = &b.phi;
            else if (head == "delta" && id.is_r()) table = &b.delta;
            else if (head == "phik" && id.is_r()) table = &b.phik;
            else fail(lineno, "'" + head + "' not valid for this slot kind");
            if (!*table) *table = ScriptedFn{};
            auto [it, inserted] = (*table)->entries.emplace(x, std::make_pair(y, t));
            (void)it;
            if (!inserted) fail(lineno, "duplicate table entry for input " + std::to_string(x));
        } else {
            fail(lineno, "unknown directive '" + head + "'");
        }
    }
    if (!saw_mode) throw ConstructionError("scenario: missing 'mode' line");
    if (!saw_stages) throw ConstructionError("scenario: missing 'stages' line");
    sc.validate();
    return sc;
}

void Scenario::validate() const {
    if (mode == Mode::Enumeration && !bindings.empty()) {
        throw ConstructionError("scenario: enumeration mode takes no slot bindings");
    }
    for (const auto& [p, binding] : bindings) {
        (void)binding;
        if (p >= stages) {
            throw ConstructionError("scenario: binding for priority " + std::to_string(p) +
                                    " is outside the stage budget " + std::to_string(stages));
        }
    }
}

} // namespace fipsim
