#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pneusim/dsl.hpp"
#include "pneusim/netlist.hpp"
#include "pneusim/sim.hpp"

namespace pneu {

class FaultError : public std::runtime_error {
public:
  explicit FaultError(const std::string& what) : std::runtime_error(what) {}
};

// Bookkeeping for the active faults of one run: what was changed, and how to
// reverse it. Structural edits are applied to copies; inject/clear leave
// their inputs untouched.
class FaultRegistry {
public:
  // Applies `fault` and returns the perturbed netlist/state pair.
  std::pair<Netlist, SimState> inject(const Netlist& netlist, const SimState& state,
                                      const FaultSpec& fault);

  // Reverses the structural change of an active fault.
  std::pair<Netlist, SimState> clear(const Netlist& netlist, const SimState& state,
                                     const std::string& fault_id);

  // Overrides the engine must honor while the current faults are active.
  SimOverrides overrides() const;

  bool active(const std::string& fault_id) const { return active_.count(fault_id) != 0; }
  std::size_t active_count() const { return active_.size(); }

private:
  struct ActiveFault {
    FaultSpec spec;
    NetId leak_net{};        // Leak: vented net
    bool vent_added = false; // Leak: whether the vent was ours
    NetId cut_origin{};      // Cut: proximal net
    NetId cut_distal{};      // Cut: the net created for the distal side
    std::vector<std::string> moved_ports;
  };

  std::map<std::string, ActiveFault> active_;
  int sequence_ = 0;
};

enum class Detectability : std::uint8_t { Detectable, Undetectable };

// A parity check catches exactly the odd-sized flip sets.
Detectability detectability(std::size_t bit_count, const std::set<std::size_t>& flipped);

} // namespace pneu
