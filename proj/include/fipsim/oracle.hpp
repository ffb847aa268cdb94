#pragma once

#include "fipsim/nat.hpp"

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace fipsim {

// A scripted partial function: a finite table input -> (output, halting step
// count). Inputs outside the table diverge.
struct ScriptedFn {
    std::map<Nat, std::pair<Nat, Nat>> entries; // x -> (y, steps)

    bool empty() const { return entries.empty(); }
};

// Two-instruction register machine. Input in register 0, output read from
// register 0 when the machine halts. Executing any instruction costs one
// step; running off the end of the program halts at no extra cost.
struct Instruction {
    enum class Op { Inc, JzDec, Halt };
    Op op = Op::Halt;
    Nat reg = 0;
    Nat target = 0; // JzDec: jump here when the register is zero

    bool operator==(const Instruction& o) const {
        if (op != o.op) return false;
        switch (op) {
        case Op::Inc: return reg == o.reg;
        case Op::JzDec: return reg == o.reg && target == o.target;
        default: return true;
        }
    }
};

struct Program {
    std::vector<Instruction> code;

    bool operator==(const Program& o) const { return code == o.code; }
};

// Runs p on input x for at most step_budget steps. Some((y, steps)) when the
// machine halts within the budget.
std::optional<std::pair<Nat, Nat>> run_machine(const Program& p, Nat x, Nat step_budget);

// Total surjective numbering of programs: 0 is the empty program; e >= 1
// decodes as a cons cell pair(instruction, rest) + 1. Every instruction code
// decodes (first coordinate 0 = Inc, 1 = JzDec, anything else = Halt), so the
// numbering is total.
Program decode_program(Nat e);
Nat encode_program(const Program& p);
Nat encode_instruction(const Instruction& ins);

// A partial computable function handle: scripted table or machine code.
struct PartialFn {
    std::variant<ScriptedFn, Program> backend = ScriptedFn{};

    static PartialFn scripted(ScriptedFn t) { return PartialFn{std::move(t)}; }
    static PartialFn machine(Program p) { return PartialFn{std::move(p)}; }
    static PartialFn divergent() { return PartialFn{ScriptedFn{}}; }
};

// Stage-s approximation: Some(y) iff the computation halts in strictly fewer
// than s steps, x < s, and y < s. Monotone in s.
std::optional<Nat> approx_eval(const PartialFn& f, Nat x, Nat s);

// Membership x in W_{e,s} where W_e = dom(phi_e): true iff approx_eval
// converges.
bool we_member(const PartialFn& e_fn, Nat x, Nat s);

} // namespace fipsim
