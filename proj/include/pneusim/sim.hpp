#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pneusim/dsl.hpp"
#include "pneusim/netlist.hpp"
#include "pneusim/pressure.hpp"

namespace pneu {

// Two readings of the membrane conduction rule. They agree wherever flow is
// observable; they differ only for a valve whose chamber and both sides sit
// at vacuum (open but flow-less vs. re-sealed).
enum class ConductionSemantics : std::uint8_t { ChamberVac, StrictClosure };

// What a component holding both a vent and a vacuum supply settles to.
enum class ConflictMode : std::uint8_t { XOnConflict, VentDominates, SupplyDominates };

struct SimConfig {
  ConductionSemantics semantics = ConductionSemantics::ChamberVac;
  ConflictMode conflict = ConflictMode::XOnConflict;
  // 0 selects the default bound of 4 * net count + 8.
  std::size_t max_iterations = 0;
};

struct SimState {
  std::vector<PressureState> pressure;   // indexed by NetId::value
  std::vector<ValveState> valve_open;    // parallel to Netlist::valves()

  PressureState net(NetId id) const { return pressure.at(id.value); }

  friend bool operator==(const SimState& a, const SimState& b)
  {
    return a.pressure == b.pressure;
  }
};

// Externally driven levels by port name. Drivable ports that are absent
// default to atmosphere: a de-energized solenoid vents its output.
struct Drives {
  std::map<std::string, PressureState> levels;

  void set(const std::string& port, PressureState level) { levels[port] = level; }
  void unset(const std::string& port) { levels.erase(port); }
};

// Fault-induced adjustments applied during settling.
struct SimOverrides {
  std::map<std::string, ValveState> stuck_valves;   // valve name -> forced state
  std::map<std::string, PressureState> stuck_ports; // port name -> forced drive
  std::set<std::uint32_t> exhausted_nets;           // leak-defeated nets: port drives ignored
};

class OscillationError : public std::runtime_error {
public:
  OscillationError(std::string message, std::vector<SimState> cycle)
      : std::runtime_error(std::move(message)), cycle_(std::move(cycle))
  {
  }

  const std::vector<SimState>& cycle() const { return cycle_; }

private:
  std::vector<SimState> cycle_;
};

class RunError : public std::runtime_error {
public:
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

ValveState conduction(PressureState chamber, PressureState side1, PressureState side2,
                      ConductionSemantics semantics);

struct ComponentSources {
  bool has_atm = false;
  bool has_vac = false;
};

PressureState resolve_component(const std::vector<PressureState>& member_prev,
                                ComponentSources sources, ConflictMode mode);

SimState initial_state(const Netlist& netlist);

// One synchronous update: valve states from the current pressures, connected
// components over open valves, source resolution per component, conservative
// X propagation across X valves.
SimState sim_step(const Netlist& netlist, const SimState& prev, const Drives& drives,
                  const SimConfig& config, const SimOverrides& overrides = {});

// Iterates sim_step until two consecutive states match. Throws
// OscillationError when a state revisits without converging or the
// iteration bound is exceeded.
SimState settle(const Netlist& netlist, const SimState& prev, const Drives& drives,
                const SimConfig& config, const SimOverrides& overrides = {});

struct TraceEntry {
  std::int64_t time_ms = 0;
  SimState state;
  std::vector<PressureState> net_values;  // parallel to Trace::net_columns
  std::vector<PressureState> port_values; // parallel to Trace::port_columns
  std::string event;
  std::string checkpoint; // non-empty only for CHECKPOINT events
};

struct TraceAbort {
  std::int64_t time_ms = 0;
  std::string message;
};

struct Trace {
  std::vector<std::string> net_columns;  // canonical (sorted) live net names at start
  std::vector<std::string> port_columns; // port names in sorted order
  std::vector<TraceEntry> entries;
  int vacuum_level_kPa = -68;
  SimConfig config;
  std::optional<TraceAbort> abort;

  bool aborted() const { return abort.has_value(); }
};

// Replays a scenario event by event; each event settles before the next is
// applied. Fault events mutate a working copy of the netlist. On error the
// trace collected so far is returned with `abort` set.
Trace run_events(const Netlist& netlist, const std::vector<ScenarioEvent>& scenario,
                 const SimConfig& config);

std::string trace_to_csv(const Trace& trace);

} // namespace pneu
