#include "pneusim/gates.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace pneu {

namespace {

struct XorNets {
  NetId in_a;
  NetId in_b;
  NetId pwr;
  NetId out;
  NetId rst_open;
  NetId rst_fill;
};

struct XorInternals {
  NetId sense;
  NetId arm;
  NetId mid;
  NetId vent1;
  NetId vent2; // unlatch vent; connected by the detector's S/T/U valve
};

// The six XOR valves, in the stage's valve-name order.
XorInternals instantiate_xor(Netlist& nl, const std::string& prefix,
                             const char* valve_names[6], const XorNets& nets)
{
  XorInternals in;
  in.sense = nl.add_net(prefix + "sense");
  in.arm = nl.add_net(prefix + "arm");
  in.mid = nl.add_net(prefix + "mid");
  in.vent1 = nl.add_net(prefix + "vent1");
  in.vent2 = nl.add_net(prefix + "vent2");
  nl.add_vent(in.vent1);
  nl.add_vent(in.vent2);

  // pass: with input B at vacuum, the sense net follows input A, so sense
  // reads A AND B while inputs are held.
  nl.add_valve(valve_names[0], nets.in_b, nets.in_a, in.sense);
  // kill: an A-AND-B sense vents the arm, blocking the power gate.
  nl.add_valve(valve_names[1], in.sense, in.arm, in.vent1);
  // recharge: the reset pulse traps fresh vacuum on the arm (open rail
  // gates, fill rail supplies; the open rail must fall first).
  nl.add_valve(valve_names[2], nets.rst_open, nets.rst_fill, in.arm);
  // gate: an armed latch admits power to the steering pair.
  nl.add_valve(valve_names[3], in.arm, nets.pwr, in.mid);
  // steering: either input at vacuum connects the output.
  nl.add_valve(valve_names[4], nets.in_a, in.mid, nets.out);
  nl.add_valve(valve_names[5], nets.in_b, in.mid, nets.out);
  return in;
}

} // namespace

GateHandle build_gate(GateKind kind)
{
  GateHandle handle;
  Netlist& nl = handle.netlist;

  if (kind == GateKind::And) {
    NetId a = nl.add_net("in_a");
    NetId b = nl.add_net("in_b");
    NetId pwr = nl.add_net("pwr");
    NetId mid = nl.add_net("mid");
    NetId out = nl.add_net("out");
    nl.add_valve("A", a, pwr, mid);
    nl.add_valve("B", b, mid, out);
    nl.add_port("in_a", a, PortRole::GenericIn);
    nl.add_port("in_b", b, PortRole::GenericIn);
    nl.add_port("pwr", pwr, PortRole::PowerVac);
    nl.add_port("out", out, PortRole::GenericOut);
    handle.input_ports = {"in_a", "in_b"};
    handle.output_port = "out";
    handle.power_ports = {"pwr"};
    return handle;
  }

  if (kind == GateKind::Or) {
    NetId a = nl.add_net("in_a");
    NetId b = nl.add_net("in_b");
    NetId pwr = nl.add_net("pwr");
    NetId out = nl.add_net("out");
    nl.add_valve("A", a, pwr, out);
    nl.add_valve("B", b, pwr, out);
    nl.add_port("in_a", a, PortRole::GenericIn);
    nl.add_port("in_b", b, PortRole::GenericIn);
    nl.add_port("pwr", pwr, PortRole::PowerVac);
    nl.add_port("out", out, PortRole::GenericOut);
    handle.input_ports = {"in_a", "in_b"};
    handle.output_port = "out";
    handle.power_ports = {"pwr"};
    return handle;
  }

  XorNets nets;
  nets.in_a = nl.add_net("in_a");
  nets.in_b = nl.add_net("in_b");
  nets.pwr = nl.add_net("pwr");
  nets.out = nl.add_net("out");
  nets.rst_open = nl.add_net("rst_open");
  nets.rst_fill = nl.add_net("rst_fill");
  const char* names[6] = {"A", "B", "C", "D", "E", "F"};
  instantiate_xor(nl, "x_", names, nets);
  nl.add_port("in_a", nets.in_a, PortRole::GenericIn);
  nl.add_port("in_b", nets.in_b, PortRole::GenericIn);
  nl.add_port("pwr", nets.pwr, PortRole::PowerVac);
  nl.add_port("out", nets.out, PortRole::GenericOut);
  nl.add_port("reset1", nets.rst_open, PortRole::Reset);
  nl.add_port("reset2", nets.rst_fill, PortRole::Reset);
  handle.input_ports = {"in_a", "in_b"};
  handle.output_port = "out";
  handle.power_ports = {"pwr"};
  handle.reset_ports = {"reset1", "reset2"};
  return handle;
}

namespace {

void settle_into(const GateHandle& handle, SimState& state, const Drives& drives,
                 const SimConfig& config)
{
  state = settle(handle.netlist, state, drives, config);
}

} // namespace

void gate_reset_pulse(const GateHandle& handle, SimState& state, Drives& drives,
                      const SimConfig& config)
{
  if (handle.reset_ports.empty())
    return;
  for (const auto& port : handle.reset_ports) {
    drives.set(port, PressureState::Vac);
    settle_into(handle, state, drives, config);
  }
  for (const auto& port : handle.reset_ports) {
    drives.set(port, PressureState::Atm);
    settle_into(handle, state, drives, config);
  }
}

void gate_apply_inputs(const GateHandle& handle, const std::vector<int>& bits,
                       SimState& state, Drives& drives, const SimConfig& config)
{
  for (std::size_t i = 0; i < handle.input_ports.size(); ++i)
    drives.set(handle.input_ports[i], level_from_bit(i < bits.size() ? bits[i] : 0));
  settle_into(handle, state, drives, config);
}

void gate_power_up(const GateHandle& handle, SimState& state, Drives& drives,
                   const SimConfig& config)
{
  for (const auto& port : handle.power_ports) {
    drives.set(port, PressureState::Vac);
    settle_into(handle, state, drives, config);
  }
}

void gate_power_down(const GateHandle& handle, SimState& state, Drives& drives,
                     const SimConfig& config)
{
  for (auto it = handle.power_ports.rbegin(); it != handle.power_ports.rend(); ++it) {
    drives.set(*it, PressureState::Atm);
    settle_into(handle, state, drives, config);
  }
}

void gate_clear_inputs(const GateHandle& handle, SimState& state, Drives& drives,
                       const SimConfig& config)
{
  for (const auto& port : handle.input_ports)
    drives.set(port, PressureState::Atm);
  settle_into(handle, state, drives, config);
}

std::vector<TruthTableRow> truth_table(const GateHandle& handle, const SimConfig& config)
{
  const std::size_t k = handle.input_ports.size();
  const NetId out = handle.output_net();

  SimState state = initial_state(handle.netlist);
  Drives drives;
  gate_reset_pulse(handle, state, drives, config);

  std::vector<TruthTableRow> rows;
  for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
    TruthTableRow row;
    for (std::size_t j = 0; j < k; ++j)
      row.inputs.push_back(static_cast<int>((r >> (k - 1 - j)) & 1));
    try {
      gate_apply_inputs(handle, row.inputs, state, drives, config);
      gate_power_up(handle, state, drives, config);
      row.output = state.net(out);
      row.x_free_read = true;
      for (NetId id : handle.netlist.live_nets())
        if (state.net(id) == PressureState::X)
          row.x_free_read = false;
      gate_power_down(handle, state, drives, config);
      gate_clear_inputs(handle, state, drives, config);
      gate_reset_pulse(handle, state, drives, config);
    } catch (const OscillationError& e) {
      std::string inputs;
      for (int b : row.inputs)
        inputs += char('0' + b);
      throw OscillationError("row " + inputs + ": " + e.what(), e.cycle());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NetId> latch_prone_nets(const GateHandle& handle, const SimConfig& config)
{
  const std::size_t k = handle.input_ports.size();
  std::set<std::uint32_t> trapped;

  for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
    std::vector<int> bits;
    for (std::size_t j = 0; j < k; ++j)
      bits.push_back(static_cast<int>((r >> (k - 1 - j)) & 1));

    SimState state = initial_state(handle.netlist);
    Drives drives;
    gate_reset_pulse(handle, state, drives, config);
    gate_apply_inputs(handle, bits, state, drives, config);
    gate_power_up(handle, state, drives, config);
    // Adversarial ordering: release the inputs while the supplies are still
    // on, so transmission paths close before they can drain.
    gate_clear_inputs(handle, state, drives, config);
    gate_power_down(handle, state, drives, config);

    // Every drive is now at atmosphere, so any net still at vacuum is
    // trapped behind closed valves.
    for (NetId id : handle.netlist.live_nets())
      if (state.net(id) == PressureState::Vac)
        trapped.insert(id.value);
  }

  std::vector<NetId> result;
  for (std::uint32_t v : trapped)
    result.push_back(NetId{v});
  return result;
}

GateHandle build_parity_detector()
{
  GateHandle handle;
  Netlist& nl = handle.netlist;

  NetId bit1 = nl.add_net("bit1");
  NetId bit2 = nl.add_net("bit2");
  NetId bit3 = nl.add_net("bit3");
  NetId parity = nl.add_net("parity");
  NetId power1 = nl.add_net("power1");
  NetId power2 = nl.add_net("power2");
  NetId power3 = nl.add_net("power3");
  NetId reset1 = nl.add_net("reset1");
  NetId reset2 = nl.add_net("reset2");
  NetId s1 = nl.add_net("s1");
  NetId s2 = nl.add_net("s2");
  NetId error = nl.add_net("error");

  const char* stage1[6] = {"A", "B", "C", "D", "E", "F"};
  const char* stage2[6] = {"G", "H", "I", "J", "K", "L"};
  const char* stage3[6] = {"M", "N", "O", "P", "Q", "R"};

  XorInternals g1 = instantiate_xor(
      nl, "g1_", stage1, XorNets{bit1, bit2, power1, s1, reset1, reset2});

  // Later stages are built against their own input stubs; vias splice the
  // chain, mirroring the physical layer crossings.
  NetId g2_in = nl.add_net("g2_in");
  XorInternals g2 = instantiate_xor(
      nl, "g2_", stage2, XorNets{g2_in, bit3, power2, s2, reset1, reset2});
  nl.merge_via(s1, g2_in);

  NetId g3_in = nl.add_net("g3_in");
  XorInternals g3 = instantiate_xor(
      nl, "g3_", stage3, XorNets{g3_in, parity, power3, error, reset1, reset2});
  nl.merge_via(s2, g3_in);

  nl.add_port("bit1", bit1, PortRole::ControlBit);
  nl.add_port("bit2", bit2, PortRole::ControlBit);
  nl.add_port("bit3", bit3, PortRole::ControlBit);
  nl.add_port("parity", parity, PortRole::ExpectedParity);
  nl.add_port("power1", power1, PortRole::PowerVac);
  nl.add_port("power2", power2, PortRole::PowerVac);
  nl.add_port("power3", power3, PortRole::PowerVac);
  nl.add_port("reset1", reset1, PortRole::Reset);
  nl.add_port("reset2", reset2, PortRole::Reset);
  nl.add_port("error", error, PortRole::ErrorOut);

  handle.input_ports = {"bit1", "bit2", "bit3", "parity"};
  handle.output_port = "error";
  handle.power_ports = {"power1", "power2", "power3"};
  handle.reset_ports = {"reset1", "reset2"};

  // Unlatch valve placement. The latching analysis flags every net that can
  // trap vacuum in the worst case; of those, the arms are recharge-managed
  // (their valves are gated by the reset rail) and the sense nets self-heal
  // through their pass valves at the next bit application. The stage outputs
  // carry the inter-stage signals and the error latch, so they get the
  // unlatch valves, venting into the drilled holes reserved per stage.
  std::vector<NetId> prone = latch_prone_nets(handle, SimConfig{});
  std::set<std::uint32_t> prone_ids;
  for (NetId id : prone)
    prone_ids.insert(id.value);
  for (NetId out : {s1, s2, error}) {
    if (!prone_ids.count(out.value))
      throw std::logic_error("latch analysis no longer flags net '" +
                             nl.net_name(out) + "'");
  }

  nl.add_valve("S", reset1, s1, g1.vent2);
  nl.add_valve("T", reset1, s2, g2.vent2);
  nl.add_valve("U", reset1, error, g3.vent2);

  return handle;
}

} // namespace pneu
