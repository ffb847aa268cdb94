#include "fipsim/oracle.hpp"

#include <doctest.h>

using namespace fipsim;

namespace {

ScriptedFn table(std::initializer_list<std::tuple<Nat, Nat, Nat>> rows) {
    ScriptedFn f;
    for (const auto& [x, y, steps] : rows) {
        f.entries[x] = {y, steps};
    }
    return f;
}

Instruction inc(Nat r) { return Instruction{Instruction::Op::Inc, r, 0}; }
Instruction jzdec(Nat r, Nat t) { return Instruction{Instruction::Op::JzDec, r, t}; }
Instruction halt() { return Instruction{Instruction::Op::Halt, 0, 0}; }

// small deterministic generator for the roundtrip property
struct Lcg {
    Nat state = 0x2545f4914f6cdd1dull;
    Nat next(Nat mod) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return (state >> 33) % mod;
    }
};

} // namespace

TEST_CASE("stage convention clips step count, input and output") {
    PartialFn f = PartialFn::scripted(table({{3, 5, 4}}));
    CHECK(!approx_eval(f, 3, 5));          // output 5 is not < 5
    CHECK(approx_eval(f, 3, 6) == Nat(5)); // 4 < 6, 3 < 6, 5 < 6
    CHECK(!approx_eval(f, 7, 7));          // x < s violated
    CHECK(!approx_eval(f, 9, 20));         // unlisted input diverges
}

TEST_CASE("approx_eval is monotone in the stage") {
    Lcg rng;
    for (int trial = 0; trial < 50; ++trial) {
        ScriptedFn t;
        for (int i = 0; i < 6; ++i) {
            t.entries[rng.next(40)] = {rng.next(40), rng.next(40)};
        }
        PartialFn f = PartialFn::scripted(t);
        for (Nat x = 0; x < 40; ++x) {
            std::optional<Nat> seen;
            for (Nat s = 0; s < 90; ++s) {
                auto r = approx_eval(f, x, s);
                if (seen) {
                    REQUIRE(r.has_value());
                    CHECK(*r == *seen);
                }
                if (r) seen = r;
            }
        }
    }
}

TEST_CASE("register machine examples") {
    Program just_halt{{halt()}};
    auto r = run_machine(just_halt, 9, 10);
    REQUIRE(r.has_value());
    CHECK(r->first == 9);
    CHECK(r->second == 1);

    Program inc_halt{{inc(0), halt()}};
    r = run_machine(inc_halt, 0, 10);
    REQUIRE(r.has_value());
    CHECK(r->first == 1);
    CHECK(r->second == 2);

    Program empty;
    r = run_machine(empty, 13, 10);
    REQUIRE(r.has_value());
    CHECK(r->first == 13);
    CHECK(r->second == 0);

    // register 1 stays zero, so this jumps to itself forever
    Program loop{{jzdec(1, 0)}};
    for (Nat budget : {Nat(1), Nat(10), Nat(1000)}) {
        CHECK(!run_machine(loop, 4, budget));
    }
}

TEST_CASE("machine-backed approximation obeys the stage convention") {
    PartialFn ident = PartialFn::machine(Program{});
    CHECK(!approx_eval(ident, 1, 1));
    CHECK(approx_eval(ident, 1, 2) == Nat(1));
    PartialFn succ = PartialFn::machine(Program{{inc(0)}});
    CHECK(approx_eval(succ, 3, 10) == Nat(4));
    CHECK(!approx_eval(succ, 3, 4)); // output 4 not < 4
}

TEST_CASE("program numbering is total and round-trips") {
    CHECK(decode_program(0) == Program{});
    for (Nat e = 0; e < 5000; ++e) {
        Program p = decode_program(e); // total on every code
        // canonical re-encoding decodes to the same program (the numbering is
        // surjective but many-to-one: all unknown opcodes read as Halt)
        CHECK(decode_program(encode_program(p)) == p);
    }
    // codes of short programs explode doubly exponentially with length, so
    // the program-side roundtrip sticks to lengths that fit in a word
    Lcg rng;
    for (int trial = 0; trial < 200; ++trial) {
        Program p;
        Nat len = rng.next(4); // 0..3
        for (Nat i = 0; i < len; ++i) {
            switch (rng.next(3)) {
            case 0: p.code.push_back(inc(rng.next(3))); break;
            case 1: p.code.push_back(jzdec(rng.next(3), rng.next(3))); break;
            default: p.code.push_back(halt()); break;
            }
        }
        CHECK(decode_program(encode_program(p)) == p);
    }
}

TEST_CASE("W_e membership through the domain") {
    PartialFn f = PartialFn::scripted(table({{2, 0, 1}}));
    CHECK(we_member(f, 2, 3));
    CHECK(!we_member(f, 2, 2)); // x < s violated
    CHECK(!we_member(f, 5, 100));
}
