#include <algorithm>
#include <sstream>

#include "pneusim/fault.hpp"
#include "pneusim/sim.hpp"

namespace pneu {

namespace {

std::string describe(const ScenarioAction& action)
{
  if (const auto* set = std::get_if<SetDriveAction>(&action))
    return "SET " + set->port + " " + (set->level == PressureState::Vac ? "VAC" : "ATM");
  if (const auto* cp = std::get_if<CheckpointAction>(&action))
    return "CHECKPOINT " + cp->label;
  if (const auto* clear = std::get_if<ClearFaultAction>(&action))
    return "CLEAR " + clear->fault_id;
  if (const auto* inj = std::get_if<InjectFaultAction>(&action))
    return "FAULT " + inj->fault.id;
  return "?";
}

void append_entry(Trace& trace, const Netlist& netlist, const SimState& state,
                  std::int64_t time_ms, const std::string& event,
                  const std::string& checkpoint)
{
  TraceEntry entry;
  entry.time_ms = time_ms;
  entry.state = state;
  entry.event = event;
  entry.checkpoint = checkpoint;
  for (const auto& name : trace.net_columns) {
    auto id = netlist.find_net(name);
    entry.net_values.push_back(id ? state.pressure.at(id->value) : PressureState::X);
  }
  for (const auto& name : trace.port_columns) {
    const Port* p = netlist.find_port(name);
    entry.port_values.push_back(p ? state.pressure.at(p->net.value) : PressureState::X);
  }
  trace.entries.push_back(std::move(entry));
}

} // namespace

Trace run_events(const Netlist& netlist, const std::vector<ScenarioEvent>& scenario,
                 const SimConfig& config)
{
  Trace trace;
  trace.config = config;

  Netlist current = netlist;
  SimState state = initial_state(current);
  Drives drives;
  FaultRegistry faults;

  for (NetId id : current.live_nets())
    trace.net_columns.push_back(current.net_name(id));
  std::sort(trace.net_columns.begin(), trace.net_columns.end());
  for (const Port& p : current.ports())
    trace.port_columns.push_back(p.name);
  std::sort(trace.port_columns.begin(), trace.port_columns.end());

  append_entry(trace, current, state, 0, "initial", "");

  std::vector<ScenarioEvent> events = scenario;
  std::stable_sort(events.begin(), events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) {
                     return a.time_ms < b.time_ms;
                   });

  for (const auto& ev : events) {
    std::string checkpoint;
    try {
      if (const auto* set = std::get_if<SetDriveAction>(&ev.action)) {
        const Port* p = current.find_port(set->port);
        if (!p)
          throw RunError("unknown port '" + set->port + "'");
        if (!is_drivable(p->role))
          throw RunError("port '" + set->port + "' is an output and cannot be driven");
        drives.set(set->port, set->level);
      } else if (const auto* inj = std::get_if<InjectFaultAction>(&ev.action)) {
        auto [nl, st] = faults.inject(current, state, inj->fault);
        current = std::move(nl);
        state = std::move(st);
      } else if (const auto* clear = std::get_if<ClearFaultAction>(&ev.action)) {
        auto [nl, st] = faults.clear(current, state, clear->fault_id);
        current = std::move(nl);
        state = std::move(st);
      } else if (const auto* cp = std::get_if<CheckpointAction>(&ev.action)) {
        checkpoint = cp->label;
      }
      state = settle(current, state, drives, config, faults.overrides());
    } catch (const std::exception& e) {
      trace.abort = TraceAbort{ev.time_ms, describe(ev.action) + ": " + e.what()};
      return trace;
    }
    append_entry(trace, current, state, ev.time_ms, describe(ev.action), checkpoint);
  }
  return trace;
}

std::string trace_to_csv(const Trace& trace)
{
  std::ostringstream out;
  out << "time_ms";
  for (const auto& name : trace.net_columns)
    out << "," << name;
  for (const auto& name : trace.port_columns)
    out << "," << name;
  out << "\n";
  for (const auto& entry : trace.entries) {
    out << entry.time_ms;
    for (PressureState p : entry.net_values)
      out << "," << to_char(p);
    for (PressureState p : entry.port_values)
      out << "," << to_char(p);
    out << "\n";
  }
  return out.str();
}

} // namespace pneu
