#include "fipsim/coding.hpp"

#include <cmath>

namespace fipsim {

Nat pair(Nat x, Nat y) {
    Nat s = checked_add(x, y);
    Nat t = checked_mul(s, checked_add(s, 1)) / 2;
    return checked_add(t, y);
}

std::pair<Nat, Nat> unpair(Nat z) {
    // w = floor((sqrt(8z+1)-1)/2), with an exact fixup around the float guess.
    Nat w = static_cast<Nat>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (w > 0 && w * (w + 1) / 2 > z) --w;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    Nat t = w * (w + 1) / 2;
    Nat y = z - t;
    return {w - y, y};
}

namespace {

constexpr Nat kColumnFloor = 32; // no column element is <= 32

Nat tail_row(Nat c) {
    return 3 + (3 * c) / 2;
}

bool is_tail_value(Nat v) {
    return v % 3 == 2 && v > kColumnFloor;
}

// Least r with pair(f, r) > bound.
Nat least_index_above(Nat f, Nat bound) {
    if (pair(f, 0) > bound) return 0;
    Nat lo = 0, hi = 1;
    while (pair(f, hi) <= bound) hi *= 2;
    while (lo < hi) {
        Nat mid = lo + (hi - lo) / 2;
        if (pair(f, mid) > bound) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

Nat least_tail_above(Nat c, Nat bound) {
    Nat f = tail_row(c);
    Nat r = least_index_above(f, bound);
    for (;;) {
        Nat v = pair(f, r);
        if (is_tail_value(v)) return v;
        r = checked_add(r, 1);
    }
}

} // namespace

Nat encode_neutral(Nat n) {
    return checked_add(checked_mul(3, n), 1);
}

Nat encode_trap(Nat m, Nat k, Nat n) {
    // n-th smallest element of the column: ascending merge of the two heads
    // and the tail sequence.
    Nat c = pair(m, k);
    Nat h0 = checked_add(33, checked_mul(6, c));
    Nat h1 = h0 + 3;
    Nat cursor = kColumnFloor;
    for (Nat count = 0;; ++count) {
        Nat next = least_tail_above(c, cursor);
        if (h0 > cursor && h0 < next) next = h0;
        if (h1 > cursor && h1 < next) next = h1;
        if (count == n) return next;
        cursor = next;
    }
}

ColumnTag classify(Nat z) {
    if (z % 3 == 1) return ColumnTag::neutral();
    if (z % 3 == 0) {
        if (z < 33) return ColumnTag::none();
        Nat u = (z - 33) / 3;
        auto mk = unpair(u / 2);
        return ColumnTag::trap(mk.first, mk.second);
    }
    auto fr = unpair(z);
    Nat f = fr.first;
    if (f >= 3 && (f - 3) % 3 != 2 && z > kColumnFloor) {
        Nat u = f - 3;
        Nat c = u - u / 3;
        auto mk = unpair(c);
        return ColumnTag::trap(mk.first, mk.second);
    }
    return ColumnTag::none();
}

Nat column_least_above(const ColumnTag& tag, Nat bound) {
    if (tag.kind == ColumnTag::Kind::Neutral) {
        Nat v = bound - bound % 3 + 1;
        if (v <= bound) v = checked_add(v, 3);
        return v;
    }
    if (tag.kind != ColumnTag::Kind::Trap) {
        throw ConstructionError("column_least_above: tag must name a column");
    }
    Nat c = pair(tag.m, tag.k);
    Nat b = bound > kColumnFloor ? bound : kColumnFloor;
    Nat best = least_tail_above(c, b);
    Nat h0 = checked_add(33, checked_mul(6, c));
    Nat h1 = h0 + 3;
    if (h0 > b && h0 < best) best = h0;
    if (h1 > b && h1 < best) best = h1;
    return best;
}

Nat FreshAllocator::fresh(Nat stage) {
    Nat base = high_water > stage ? high_water : stage;
    Nat v = checked_add(base, 1);
    high_water = v;
    return v;
}

Nat FreshAllocator::fresh_in_column(Nat stage, const ColumnTag& tag) {
    Nat base = high_water > stage ? high_water : stage;
    Nat v = column_least_above(tag, base);
    high_water = v;
    return v;
}

} // namespace fipsim
