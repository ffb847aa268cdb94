#include "fipsim/targets.hpp"

namespace fipsim {

Nat pack_author(const Author& a) {
    switch (a.kind) {
    case Author::Kind::Engine: return 0;
    case Author::Kind::Filler: return 1;
    default: return 2 + a.req.priority;
    }
}

Author unpack_author(Nat code) {
    if (code == 0) return Author::engine();
    if (code == 1) return Author::filler();
    return Author::requirement(RequirementId::from_priority(code - 2));
}

void WriteOnceMap::reserve_dense(Nat bound) {
    if (bound > dense_.size()) dense_.resize(static_cast<std::size_t>(bound));
}

void WriteOnceMap::define(Nat key, Nat val, Nat stage, const Author& author) {
    if (key < dense_.size()) {
        auto& slot = dense_[static_cast<std::size_t>(key)];
        if (slot.stage != DenseEntry::kEmpty) {
            throw ConstructionError("write-once violation: key " + std::to_string(key) +
                                    " already assigned");
        }
        slot.val = val;
        slot.stage = static_cast<std::uint32_t>(stage);
        slot.author = static_cast<std::uint32_t>(pack_author(author));
    } else {
        auto [it, inserted] =
            sparse_.emplace(key, SparseEntry{val, stage, pack_author(author)});
        (void)it;
        if (!inserted) {
            throw ConstructionError("write-once violation: key " + std::to_string(key) +
                                    " already assigned");
        }
    }
    ++count_;
}

bool WriteOnceMap::defined(Nat key) const {
    if (key < dense_.size()) {
        return dense_[static_cast<std::size_t>(key)].stage != DenseEntry::kEmpty;
    }
    return sparse_.count(key) != 0;
}

std::optional<Nat> WriteOnceMap::lookup(Nat key) const {
    if (key < dense_.size()) {
        const auto& slot = dense_[static_cast<std::size_t>(key)];
        if (slot.stage == DenseEntry::kEmpty) return std::nullopt;
        return slot.val;
    }
    auto it = sparse_.find(key);
    if (it == sparse_.end()) return std::nullopt;
    return it->second.val;
}

std::optional<Birth> WriteOnceMap::birth(Nat key) const {
    if (key < dense_.size()) {
        const auto& slot = dense_[static_cast<std::size_t>(key)];
        if (slot.stage == DenseEntry::kEmpty) return std::nullopt;
        return Birth{slot.stage, unpack_author(slot.author)};
    }
    auto it = sparse_.find(key);
    if (it == sparse_.end()) return std::nullopt;
    return Birth{it->second.stage, unpack_author(it->second.author)};
}

void WriteOnceMap::for_each(const std::function<void(Nat, Nat, const Birth&)>& fn) const {
    for (std::size_t k = 0; k < dense_.size(); ++k) {
        const auto& slot = dense_[k];
        if (slot.stage != DenseEntry::kEmpty) {
            fn(static_cast<Nat>(k), slot.val, Birth{slot.stage, unpack_author(slot.author)});
        }
    }
    for (const auto& [k, e] : sparse_) {
        fn(k, e.val, Birth{e.stage, unpack_author(e.author)});
    }
}

void FreezeRegistry::freeze(Nat m, Nat z, const RequirementId& owner) {
    auto [it, inserted] = frozen_.emplace(std::make_pair(m, z), owner);
    (void)it;
    if (!inserted) {
        throw ConstructionError("freeze violation: (" + std::to_string(m) + "," +
                                std::to_string(z) + ") already frozen");
    }
}

void FreezeRegistry::unfreeze(Nat m, Nat z, const RequirementId& owner) {
    auto it = frozen_.find(std::make_pair(m, z));
    if (it == frozen_.end()) {
        throw ConstructionError("unfreeze violation: (" + std::to_string(m) + "," +
                                std::to_string(z) + ") is not frozen");
    }
    if (!(it->second == owner)) {
        throw ConstructionError("unfreeze violation: (" + std::to_string(m) + "," +
                                std::to_string(z) + ") held by " + it->second.str() +
                                ", not " + owner.str());
    }
    frozen_.erase(it);
}

bool FreezeRegistry::is_frozen(Nat m, Nat z) const {
    return frozen_.count(std::make_pair(m, z)) != 0;
}

std::optional<RequirementId> FreezeRegistry::owner(Nat m, Nat z) const {
    auto it = frozen_.find(std::make_pair(m, z));
    if (it == frozen_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<Nat, Nat>> FreezeRegistry::held_by(const RequirementId& owner) const {
    std::vector<std::pair<Nat, Nat>> out;
    for (const auto& [cell, who] : frozen_) {
        if (who == owner) out.push_back(cell);
    }
    return out;
}

void FreezeRegistry::for_each(const std::function<void(Nat, Nat, const RequirementId&)>& fn) const {
    for (const auto& [cell, who] : frozen_) {
        fn(cell.first, cell.second, who);
    }
}

} // namespace fipsim
