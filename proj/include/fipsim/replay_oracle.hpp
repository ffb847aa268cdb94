#pragma once

#include "fipsim/scenario.hpp"

#include <cstdint>
#include <string>

namespace fipsim {

struct OracleReplay {
    std::string trace_text; // event lines only, no header
    std::uint64_t digest = 0;
};

// Straight-line re-implementation of the stage protocol, kept independent of
// the engine: its own pairing, column arithmetic, freshness bookkeeping and
// state machines, driven directly off the scenario. Produces the event lines
// the engine is expected to write, byte for byte. Scripted scenarios only.
OracleReplay replay_oracle(const Scenario& scenario);

} // namespace fipsim
