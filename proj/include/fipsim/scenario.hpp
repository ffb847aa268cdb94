#pragma once

#include "fipsim/nat.hpp"
#include "fipsim/oracle.hpp"

#include <map>
#include <optional>
#include <string>

namespace fipsim {

// Oracle bindings for one requirement slot. D slots use phi; R slots use
// delta (the candidate many-one reduction) and phik (the candidate finite-one
// reduction). Absent tables are everywhere divergent.
struct SlotBinding {
    std::optional<ScriptedFn> phi;
    std::optional<ScriptedFn> delta;
    std::optional<ScriptedFn> phik;
};

// A run configuration.
//
// File format, line oriented, '#' comments:
//
//   mode scripted | enumeration
//   stages <N>
//   horizon <N>          (optional; default min(50, stages/2))
//   slot D n=<n>
//     phi <x> -> <y> steps <t>
//   slot R l=<l>
//     delta <x> -> <y> steps <t>
//     phik <x> -> <y> steps <t>
struct Scenario {
    enum class Mode { Scripted, Enumeration };

    Mode mode = Mode::Scripted;
    Nat stages = 0;
    std::optional<Nat> horizon;
    std::map<Nat, SlotBinding> bindings; // keyed by priority index

    Nat effective_horizon() const {
        if (horizon) return *horizon;
        Nat h = stages / 2;
        return h < 50 ? h : 50;
    }

    std::string serialize() const;

    // Throws ConstructionError with a line-bearing message on bad input.
    static Scenario parse(const std::string& text);

    // Structural validation: finite single-valued tables (guaranteed by the
    // map representation), bindings only on slots below the stage budget,
    // no bindings in enumeration mode.
    void validate() const;
};

} // namespace fipsim
