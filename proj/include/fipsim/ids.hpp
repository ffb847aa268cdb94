#pragma once

#include "fipsim/coding.hpp"
#include "fipsim/nat.hpp"

#include <string>

namespace fipsim {

// Identity of a requirement slot. Priority p alternates kinds:
// Q_{2n} = D_n (diagonalization), Q_{2l+1} = R_l (dynamic trap) with
// l = <m,k> and m = <i,j>.
struct RequirementId {
    enum class Kind { D, R };
    Kind kind = Kind::D;
    Nat priority = 0;
    Nat n = 0;             // D only
    Nat l = 0, m = 0, k = 0, i = 0, j = 0; // R only

    static RequirementId from_priority(Nat p) {
        RequirementId id;
        id.priority = p;
        if (p % 2 == 0) {
            id.kind = Kind::D;
            id.n = p / 2;
        } else {
            id.kind = Kind::R;
            id.l = (p - 1) / 2;
            auto mk = unpair(id.l);
            id.m = mk.first;
            id.k = mk.second;
            auto ij = unpair(id.m);
            id.i = ij.first;
            id.j = ij.second;
        }
        return id;
    }

    bool is_d() const { return kind == Kind::D; }
    bool is_r() const { return kind == Kind::R; }

    std::string str() const {
        if (is_d()) return "D:n=" + std::to_string(n);
        return "R:l=" + std::to_string(l) + ",m=" + std::to_string(m) +
               ",k=" + std::to_string(k);
    }

    bool operator==(const RequirementId& o) const { return priority == o.priority; }
};

// Who performed an action: the engine itself (stage markers, initializations),
// the totality filler, or a requirement routine.
struct Author {
    enum class Kind { Engine, Filler, Requirement };
    Kind kind = Kind::Engine;
    RequirementId req;

    static Author engine() { return Author{Kind::Engine, {}}; }
    static Author filler() { return Author{Kind::Filler, {}}; }
    static Author requirement(const RequirementId& id) { return Author{Kind::Requirement, id}; }

    bool is_requirement() const { return kind == Kind::Requirement; }

    std::string str() const {
        switch (kind) {
        case Kind::Engine: return "engine";
        case Kind::Filler: return "filler";
        default: return req.str();
        }
    }

    bool operator==(const Author& o) const {
        if (kind != o.kind) return false;
        return kind != Kind::Requirement || req == o.req;
    }
};

} // namespace fipsim
