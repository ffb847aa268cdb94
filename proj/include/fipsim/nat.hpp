#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fipsim {

// Natural numbers of the construction. Indices, stage counters, set elements
// and map values all live in the same space.
using Nat = std::uint64_t;

// Hard failure of a run: write-once violation, freeze misuse, arithmetic
// overflow, or an internal inconsistency. Never caught inside the engine.
struct ConstructionError : std::runtime_error {
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

inline Nat checked_add(Nat a, Nat b) {
    Nat r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw ConstructionError("natural-number overflow in addition");
    }
    return r;
}

inline Nat checked_mul(Nat a, Nat b) {
    Nat r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw ConstructionError("natural-number overflow in multiplication");
    }
    return r;
}

} // namespace fipsim
