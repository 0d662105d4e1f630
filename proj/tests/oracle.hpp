#pragma once

// Independent consistency oracle for the settling engine. Everything here
// is derived directly from the component/resolution rules with per-net
// breadth-first searches instead of union-find, and an analytic conduction
// rule instead of completion enumeration. It must not call into sim.cpp
// beyond the shared type definitions.

#include <optional>
#include <vector>

#include "pneusim/netlist.hpp"
#include "pneusim/sim.hpp"

namespace pneu::oracle {

std::vector<PressureState> step(const Netlist& nl, const std::vector<PressureState>& prev,
                                const Drives& drives, const SimConfig& cfg);

struct SettleResult {
  std::optional<std::vector<PressureState>> fixed_point; // empty when oscillating
  bool oscillates = false;
};

SettleResult settle(const Netlist& nl, const std::vector<PressureState>& prev,
                    const Drives& drives, const SimConfig& cfg);

// All self-consistent assignments over live nets (3^N enumeration).
std::vector<std::vector<PressureState>> fixed_points(const Netlist& nl, const Drives& drives,
                                                     const SimConfig& cfg);

} // namespace pneu::oracle
