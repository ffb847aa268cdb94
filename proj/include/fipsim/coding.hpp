#pragma once

#include "fipsim/nat.hpp"

#include <optional>
#include <utility>

namespace fipsim {

// Cantor pairing. pair(x,y) = (x+y)(x+y+1)/2 + y, a bijection omega^2 -> omega.
Nat pair(Nat x, Nat y);
std::pair<Nat, Nat> unpair(Nat z);

// Column layout.
//
// omega is split into three disjoint families:
//   neutral  { 3n+1 : n }                        -- witnesses for the D requirements
//   trap     column (m,k), indexed c = pair(m,k) -- baits/traps for R_<m,k>
//   none     everything else (0, small multiples of 3, leftover pair cells)
//
// Column c holds two low "head" elements 33+6c and 36+6c and an infinite
// quadratic tail: the values pair(3 + floor(3c/2), r) that are = 2 (mod 3)
// and exceed 32. Heads keep early fresh picks small and packed; tails make
// every column infinite. No column element is <= 32, so freezing never blocks
// the filler on the low range.
struct ColumnTag {
    enum class Kind { Trap, Neutral, None };
    Kind kind = Kind::None;
    Nat m = 0;
    Nat k = 0;

    static ColumnTag trap(Nat m, Nat k) { return ColumnTag{Kind::Trap, m, k}; }
    static ColumnTag neutral() { return ColumnTag{Kind::Neutral, 0, 0}; }
    static ColumnTag none() { return ColumnTag{Kind::None, 0, 0}; }

    bool operator==(const ColumnTag& o) const {
        return kind == o.kind && (kind != Kind::Trap || (m == o.m && k == o.k));
    }
};

Nat encode_neutral(Nat n);
Nat encode_trap(Nat m, Nat k, Nat n);
ColumnTag classify(Nat z);

// Tracks the largest number mentioned anywhere in the run. Every fresh pick
// strictly exceeds both the mark and the current stage.
struct FreshAllocator {
    Nat high_water = 0;

    void note(Nat v) {
        if (v > high_water) high_water = v;
    }

    // max(high_water, stage) + 1, bumping the mark.
    Nat fresh(Nat stage);

    // Least element of the column strictly above max(high_water, stage),
    // bumping the mark to the returned value. tag must not be None.
    Nat fresh_in_column(Nat stage, const ColumnTag& tag);
};

// Least element of the given column strictly greater than bound.
Nat column_least_above(const ColumnTag& tag, Nat bound);

} // namespace fipsim
