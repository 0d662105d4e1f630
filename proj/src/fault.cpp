#include "pneusim/fault.hpp"

#include <algorithm>

namespace pneu {

std::pair<Netlist, SimState> FaultRegistry::inject(const Netlist& netlist,
                                                   const SimState& state,
                                                   const FaultSpec& fault)
{
  if (fault.id.empty())
    throw FaultError("fault id must not be empty");
  if (active_.count(fault.id))
    throw FaultError("duplicate fault id '" + fault.id + "'");

  Netlist modified = netlist;
  SimState new_state = state;
  ActiveFault record;
  record.spec = fault;

  switch (fault.kind) {
  case FaultKind::Leak: {
    auto net = modified.find_net_alive(fault.net);
    if (!net)
      throw FaultError("leak target net '" + fault.net + "' not found");
    record.leak_net = *net;
    record.vent_added = !modified.is_vent(*net);
    if (record.vent_added)
      modified.add_vent(*net);
    break;
  }
  case FaultKind::Cut: {
    auto net = modified.find_net_alive(fault.net);
    if (!net)
      throw FaultError("cut target net '" + fault.net + "' not found");
    if (fault.distal_ports.empty())
      throw FaultError("cut needs at least one distal port");
    for (const auto& pname : fault.distal_ports) {
      const Port* p = modified.find_port(pname);
      if (!p)
        throw FaultError("cut distal port '" + pname + "' not found");
      if (p->net != *net)
        throw FaultError("port '" + pname + "' is not on net '" + fault.net + "'");
    }
    NetId distal =
        modified.add_net(fault.net + "#cut" + std::to_string(++sequence_));
    for (const auto& pname : fault.distal_ports)
      modified.rebind_port(pname, distal);
    modified.add_vent(distal); // the severed end is open to air
    record.cut_origin = *net;
    record.cut_distal = distal;
    record.moved_ports = fault.distal_ports;
    new_state.pressure.resize(modified.net_capacity(), PressureState::Atm);
    break;
  }
  case FaultKind::StuckValve: {
    if (!modified.find_valve(fault.valve))
      throw FaultError("stuck valve '" + fault.valve + "' not found");
    break;
  }
  case FaultKind::StuckBit: {
    const Port* p = modified.find_port(fault.port);
    if (!p)
      throw FaultError("stuck port '" + fault.port + "' not found");
    if (!is_drivable(p->role))
      throw FaultError("port '" + fault.port + "' is not drivable");
    break;
  }
  }

  active_.emplace(fault.id, std::move(record));
  return {std::move(modified), std::move(new_state)};
}

std::pair<Netlist, SimState> FaultRegistry::clear(const Netlist& netlist,
                                                  const SimState& state,
                                                  const std::string& fault_id)
{
  auto it = active_.find(fault_id);
  if (it == active_.end())
    throw FaultError("fault '" + fault_id + "' is not active");

  Netlist modified = netlist;
  SimState new_state = state;
  const ActiveFault& record = it->second;

  switch (record.spec.kind) {
  case FaultKind::Leak: {
    if (record.vent_added)
      modified.remove_vent(record.leak_net);
    break;
  }
  case FaultKind::Cut: {
    for (const auto& pname : record.moved_ports)
      modified.rebind_port(pname, record.cut_origin);
    modified.remove_vent(record.cut_distal);
    modified.kill_net(record.cut_distal);
    // Re-merged region keeps its state only when the two halves agree.
    PressureState a = new_state.pressure.at(record.cut_origin.value);
    PressureState b = new_state.pressure.at(record.cut_distal.value);
    new_state.pressure[record.cut_origin.value] = (a == b) ? a : PressureState::X;
    new_state.pressure[record.cut_distal.value] = PressureState::Atm;
    break;
  }
  case FaultKind::StuckValve:
  case FaultKind::StuckBit:
    break;
  }

  active_.erase(it);
  return {std::move(modified), std::move(new_state)};
}

SimOverrides FaultRegistry::overrides() const
{
  SimOverrides o;
  for (const auto& [id, record] : active_) {
    switch (record.spec.kind) {
    case FaultKind::Leak:
      // Outflow through the puncture defeats any solenoid on this net.
      o.exhausted_nets.insert(record.leak_net.value);
      break;
    case FaultKind::Cut:
      o.exhausted_nets.insert(record.cut_distal.value);
      break;
    case FaultKind::StuckValve:
      o.stuck_valves[record.spec.valve] = record.spec.stuck_state;
      break;
    case FaultKind::StuckBit:
      o.stuck_ports[record.spec.port] = record.spec.stuck_level;
      break;
    }
  }
  return o;
}

Detectability detectability(std::size_t bit_count, const std::set<std::size_t>& flipped)
{
  for (std::size_t pos : flipped)
    if (pos >= bit_count)
      throw FaultError("flip position " + std::to_string(pos) + " out of range");
  return (flipped.size() % 2 == 1) ? Detectability::Detectable : Detectability::Undetectable;
}

} // namespace pneu
