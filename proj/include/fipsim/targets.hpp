#pragma once

#include "fipsim/ids.hpp"
#include "fipsim/nat.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace fipsim {

struct Birth {
    Nat stage = 0;
    Author author;
};

// Authors are stored packed: 0 engine, 1 filler, 2 + priority for requirements.
Nat pack_author(const Author& a);
Author unpack_author(Nat code);

// A partial map omega -> omega whose values are assigned at most once.
// Redefinition is a hard run failure. Keys below a dense bound live in a flat
// array (the filler touches every small key once); larger keys overflow into
// an ordered map.
class WriteOnceMap {
public:
    WriteOnceMap() = default;
    explicit WriteOnceMap(Nat dense_bound) { reserve_dense(dense_bound); }

    void reserve_dense(Nat bound);

    void define(Nat key, Nat val, Nat stage, const Author& author);
    std::optional<Nat> lookup(Nat key) const;
    std::optional<Birth> birth(Nat key) const;
    bool defined(Nat key) const;
    Nat size() const { return count_; }

    // Visits every (key, value, birth) in ascending key order.
    void for_each(const std::function<void(Nat, Nat, const Birth&)>& fn) const;

private:
    struct DenseEntry {
        Nat val = 0;
        std::uint32_t stage = kEmpty;
        std::uint32_t author = 0;
        static constexpr std::uint32_t kEmpty = 0xffffffffu;
    };
    struct SparseEntry {
        Nat val = 0;
        Nat stage = 0;
        Nat author = 0;
    };
    std::vector<DenseEntry> dense_;
    std::map<Nat, SparseEntry> sparse_;
    Nat count_ = 0;
};

// Registry of frozen column elements, keyed by (m, z). An element may be
// frozen for a parameter m by at most one requirement at a time; only the
// owner may unfreeze it.
class FreezeRegistry {
public:
    void freeze(Nat m, Nat z, const RequirementId& owner);
    void unfreeze(Nat m, Nat z, const RequirementId& owner);
    bool is_frozen(Nat m, Nat z) const;
    std::optional<RequirementId> owner(Nat m, Nat z) const;
    // All cells held by this requirement, ascending by (m, z).
    std::vector<std::pair<Nat, Nat>> held_by(const RequirementId& owner) const;
    Nat size() const { return frozen_.size(); }

    void for_each(const std::function<void(Nat, Nat, const RequirementId&)>& fn) const;

private:
    std::map<std::pair<Nat, Nat>, RequirementId> frozen_;
};

// The coding maps Theta_m / Lambda_m for one parameter m, plus the derived
// queries sigma_m and membership in the virtual target B_m.
struct TargetSpace {
    Nat m = 0;
    WriteOnceMap theta;
    WriteOnceMap lambda;

    TargetSpace() = default;
    TargetSpace(Nat m_, Nat dense_bound) : m(m_), theta(dense_bound), lambda(dense_bound) {}

    // sigma_m(x) = Lambda_m(Theta_m(x)) when both are defined.
    std::optional<Nat> sigma(Nat x) const {
        auto t = theta.lookup(x);
        if (!t) return std::nullopt;
        return lambda.lookup(*t);
    }

    // Stage approximation of y in B_m = Lambda_m^{-1}(A): Some(Lambda(y) in A)
    // when Lambda_m(y) is defined, None otherwise.
    std::optional<bool> b_member(Nat y, const std::map<Nat, Nat>& a_entry_stage) const {
        auto l = lambda.lookup(y);
        if (!l) return std::nullopt;
        return a_entry_stage.count(*l) != 0;
    }
};

} // namespace fipsim
