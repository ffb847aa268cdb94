#include "fipsim/oracle.hpp"

#include "fipsim/coding.hpp"

#include <unordered_map>

namespace fipsim {

std::optional<std::pair<Nat, Nat>> run_machine(const Program& p, Nat x, Nat step_budget) {
    std::unordered_map<Nat, Nat> regs;
    regs[0] = x;
    Nat pc = 0;
    Nat steps = 0;
    const Nat len = p.code.size();
    for (;;) {
        if (pc >= len) {
            return std::make_pair(regs[0], steps);
        }
        if (steps >= step_budget) {
            return std::nullopt;
        }
        const Instruction& ins = p.code[static_cast<std::size_t>(pc)];
        ++steps;
        switch (ins.op) {
        case Instruction::Op::Inc:
            ++regs[ins.reg];
            ++pc;
            break;
        case Instruction::Op::JzDec: {
            Nat& r = regs[ins.reg];
            if (r == 0) {
                pc = ins.target; // out-of-range targets halt via the pc check
            } else {
                --r;
                ++pc;
            }
            break;
        }
        case Instruction::Op::Halt:
            return std::make_pair(regs[0], steps);
        }
    }
}

namespace {

Instruction decode_instruction(Nat code) {
    auto [op, rest] = unpair(code);
    Instruction ins;
    if (op == 0) {
        ins.op = Instruction::Op::Inc;
        ins.reg = rest;
    } else if (op == 1) {
        ins.op = Instruction::Op::JzDec;
        auto [reg, target] = unpair(rest);
        ins.reg = reg;
        ins.target = target;
    } else {
        ins.op = Instruction::Op::Halt;
    }
    return ins;
}

} // namespace

Nat encode_instruction(const Instruction& ins) {
    switch (ins.op) {
    case Instruction::Op::Inc: return pair(0, ins.reg);
    case Instruction::Op::JzDec: return pair(1, pair(ins.reg, ins.target));
    default: return pair(2, 0);
    }
}

Program decode_program(Nat e) {
    Program p;
    while (e != 0) {
        auto [head, rest] = unpair(e - 1);
        p.code.push_back(decode_instruction(head));
        e = rest; // rest < e, so this terminates
    }
    return p;
}

Nat encode_program(const Program& p) {
    Nat e = 0;
    for (auto it = p.code.rbegin(); it != p.code.rend(); ++it) {
        e = checked_add(pair(encode_instruction(*it), e), 1);
    }
    return e;
}

std::optional<Nat> approx_eval(const PartialFn& f, Nat x, Nat s) {
    if (x >= s) return std::nullopt;
    if (const auto* table = std::get_if<ScriptedFn>(&f.backend)) {
        auto it = table->entries.find(x);
        if (it == table->entries.end()) return std::nullopt;
        auto [y, steps] = it->second;
        if (steps < s && y < s) return y;
        return std::nullopt;
    }
    const auto& prog = std::get<Program>(f.backend);
    if (s == 0) return std::nullopt;
    auto res = run_machine(prog, x, s - 1); // halts in strictly fewer than s steps
    if (!res) return std::nullopt;
    if (res->first < s) return res->first;
    return std::nullopt;
}

bool we_member(const PartialFn& e_fn, Nat x, Nat s) {
    return approx_eval(e_fn, x, s).has_value();
}

} // namespace fipsim
