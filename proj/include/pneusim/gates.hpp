#pragma once

#include <string>
#include <vector>

#include "pneusim/netlist.hpp"
#include "pneusim/sim.hpp"

namespace pneu {

enum class GateKind { And, Or, Xor };

// A constructed gate (or the full detector) plus the port names a harness
// needs to operate it. power_ports are listed in power-up order; the
// power-down order is the reverse. reset_ports, when present, are
// [open-rail, fill-rail]: the open rail gates the recharge valves, the fill
// rail supplies the vacuum they trap.
struct GateHandle {
  Netlist netlist;
  std::vector<std::string> input_ports;
  std::string output_port;
  std::vector<std::string> power_ports;
  std::vector<std::string> reset_ports;

  NetId output_net() const
  {
    return netlist.find_port(output_port)->net;
  }
};

// AND: two valves in series between power and output.
// OR: two valves in parallel between power and output.
// XOR: six valves and two vents; a recharge-latched arm admits power to the
// steering pair unless the pass valve senses both inputs at vacuum.
GateHandle build_gate(GateKind kind);

// Three chained XOR stages computing b1^b2^b3^p on the error output, plus
// unlatch valves S-U on the latch-prone nets. 21 valves total.
GateHandle build_parity_detector();

// Harness steps shared by truth_table, the protocol tests and the CLI. All
// of them mutate `state`/`drives` in place by settling after each drive
// change.
void gate_reset_pulse(const GateHandle& handle, SimState& state, Drives& drives,
                      const SimConfig& config);
void gate_apply_inputs(const GateHandle& handle, const std::vector<int>& bits,
                       SimState& state, Drives& drives, const SimConfig& config);
void gate_power_up(const GateHandle& handle, SimState& state, Drives& drives,
                   const SimConfig& config);
void gate_power_down(const GateHandle& handle, SimState& state, Drives& drives,
                     const SimConfig& config);
void gate_clear_inputs(const GateHandle& handle, SimState& state, Drives& drives,
                       const SimConfig& config);

struct TruthTableRow {
  std::vector<int> inputs;
  PressureState output = PressureState::Atm;
  bool x_free_read = true; // no net reads X in the settled read state
};

// Exhaustive sweep in binary counting order. Each row runs power-up in
// order, reads the settled output, then executes the ordered power-down,
// input clearing and reset pulse before the next row.
std::vector<TruthTableRow> truth_table(const GateHandle& handle, const SimConfig& config);

// Nets that hold trapped vacuum in source-free regions after an adversarial
// power-down (inputs released before the supplies, no reset pulse), united
// over all input combinations.
std::vector<NetId> latch_prone_nets(const GateHandle& handle, const SimConfig& config);

} // namespace pneu
