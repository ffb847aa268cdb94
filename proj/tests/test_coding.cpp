#include "fipsim/coding.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace fipsim;

namespace {

// independent inverse: bounded search over the pairing function
std::pair<Nat, Nat> unpair_by_search(Nat z) {
    for (Nat x = 0; x <= z; ++x) {
        for (Nat y = 0; x + y <= z; ++y) {
            if (pair(x, y) == z) return {x, y};
        }
    }
    FAIL("no preimage found for ", z);
    return {0, 0};
}

// independent "least column element above" oracle: walk upward classifying
Nat least_above_by_scan(const ColumnTag& tag, Nat bound) {
    for (Nat v = bound + 1;; ++v) {
        if (classify(v) == tag) return v;
    }
}

} // namespace

TEST_CASE("cantor pairing matches the closed form") {
    CHECK(pair(0, 0) == 0);
    CHECK(pair(1, 2) == 8);
    CHECK(pair(2, 1) == 7);
}

TEST_CASE("unpair agrees with bounded search") {
    CHECK(unpair(0) == std::pair<Nat, Nat>(0, 0));
    CHECK(unpair(8) == std::pair<Nat, Nat>(1, 2));
    CHECK(unpair(7) == std::pair<Nat, Nat>(2, 1));
    for (Nat z = 0; z < 60; ++z) {
        CHECK(unpair(z) == unpair_by_search(z));
    }
}

TEST_CASE("pairing is a bijection below 10^4") {
    std::set<Nat> seen;
    for (Nat x = 0; x < 140; ++x) {
        for (Nat y = 0; y < 140; ++y) {
            Nat z = pair(x, y);
            CHECK(seen.insert(z).second);
            auto [a, b] = unpair(z);
            CHECK(a == x);
            CHECK(b == y);
        }
    }
    for (Nat z = 0; z < 10000; ++z) {
        auto [x, y] = unpair(z);
        CHECK(pair(x, y) == z);
    }
}

TEST_CASE("pairing overflow aborts the run") {
    Nat big = Nat(1) << 63;
    CHECK_THROWS_AS(pair(big, big), ConstructionError);
}

TEST_CASE("neutral column") {
    CHECK(encode_neutral(0) == 1);
    CHECK(encode_neutral(1) == 4);
    for (Nat n = 0; n < 1000; ++n) {
        CHECK(classify(encode_neutral(n)) == ColumnTag::neutral());
    }
}

TEST_CASE("trap columns classify back to their parameters") {
    CHECK(classify(encode_trap(3, 5, 7)) == ColumnTag::trap(3, 5));
    for (Nat m = 0; m < 6; ++m) {
        for (Nat k = 0; k < 6; ++k) {
            for (Nat n = 0; n < 12; ++n) {
                CHECK(classify(encode_trap(m, k, n)) == ColumnTag::trap(m, k));
            }
        }
    }
}

TEST_CASE("column families are disjoint and leave a nonempty remainder") {
    CHECK(classify(pair(2, 0)) == ColumnTag::none());
    CHECK(classify(0) == ColumnTag::none());
    std::set<Nat> traps;
    for (Nat m = 0; m < 8; ++m) {
        for (Nat k = 0; k < 8; ++k) {
            for (Nat n = 0; n < 8; ++n) {
                CHECK(traps.insert(encode_trap(m, k, n)).second); // injective
            }
        }
    }
    for (Nat n = 0; n < 4000; ++n) {
        CHECK(traps.count(encode_neutral(n)) == 0);
    }
    // every number gets exactly one tag, and tagging is stable
    Nat none_count = 0;
    for (Nat z = 0; z < 10000; ++z) {
        ColumnTag tag = classify(z);
        if (tag.kind == ColumnTag::Kind::None) ++none_count;
        if (traps.count(z)) CHECK(tag.kind == ColumnTag::Kind::Trap);
    }
    CHECK(none_count > 0);
}

TEST_CASE("no column element sits at or below 32") {
    for (Nat z = 0; z <= 32; ++z) {
        CHECK(classify(z).kind != ColumnTag::Kind::Trap);
    }
}

TEST_CASE("encode_trap enumerates its column in increasing order") {
    for (Nat c : {Nat(0), Nat(1), Nat(2), Nat(9)}) {
        auto [m, k] = unpair(c);
        Nat prev = encode_trap(m, k, 0);
        for (Nat n = 1; n < 20; ++n) {
            Nat cur = encode_trap(m, k, n);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("fresh is forced by the maximum") {
    FreshAllocator alloc;
    alloc.note(17);
    CHECK(alloc.fresh(12) == 18);
    alloc.high_water = 17;
    CHECK(alloc.fresh(40) == 41);
    Nat a = alloc.fresh(0);
    Nat b = alloc.fresh(0);
    CHECK(b > a);
}

TEST_CASE("fresh_in_column returns the least column element above the mark") {
    FreshAllocator alloc;
    CHECK(alloc.fresh_in_column(0, ColumnTag::neutral()) == 1);

    for (Nat bound : {Nat(0), Nat(5), Nat(33), Nat(40), Nat(100), Nat(517)}) {
        for (Nat c = 0; c < 5; ++c) {
            auto [m, k] = unpair(c);
            ColumnTag tag = ColumnTag::trap(m, k);
            FreshAllocator fa;
            fa.note(bound);
            Nat stage = 3;
            Nat got = fa.fresh_in_column(stage, tag);
            CHECK(got == least_above_by_scan(tag, std::max(bound, stage)));
            CHECK(classify(got) == tag);
            CHECK(got > stage);
            CHECK(fa.high_water == got);
        }
    }
}
