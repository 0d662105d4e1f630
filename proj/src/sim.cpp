#include "pneusim/sim.hpp"

#include <algorithm>

namespace pneu {

namespace {

// Closed iff the chamber pressure is at or above both channel sides;
// vacuum is the lowest pressure (Vac < Atm).
bool strict_closed(PressureState c, PressureState s1, PressureState s2)
{
  if (c == PressureState::Atm)
    return true;
  return s1 == PressureState::Vac && s2 == PressureState::Vac;
}

} // namespace

ValveState conduction(PressureState chamber, PressureState side1, PressureState side2,
                      ConductionSemantics semantics)
{
  if (semantics == ConductionSemantics::ChamberVac) {
    switch (chamber) {
    case PressureState::Vac: return ValveState::Open;
    case PressureState::Atm: return ValveState::Closed;
    default: return ValveState::X;
    }
  }

  // StrictClosure: evaluate every definite completion of X inputs; report X
  // only when the completions disagree.
  auto completions = [](PressureState p, PressureState out[2]) -> int {
    if (is_definite(p)) {
      out[0] = p;
      return 1;
    }
    out[0] = PressureState::Atm;
    out[1] = PressureState::Vac;
    return 2;
  };
  PressureState cs[2], as[2], bs[2];
  int nc = completions(chamber, cs), na = completions(side1, as),
      nb = completions(side2, bs);
  bool seen_open = false, seen_closed = false;
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < nb; ++k) {
        if (strict_closed(cs[i], as[j], bs[k]))
          seen_closed = true;
        else
          seen_open = true;
      }
  if (seen_open && seen_closed)
    return ValveState::X;
  return seen_open ? ValveState::Open : ValveState::Closed;
}

PressureState resolve_component(const std::vector<PressureState>& member_prev,
                                ComponentSources sources, ConflictMode mode)
{
  if (sources.has_atm && sources.has_vac) {
    switch (mode) {
    case ConflictMode::VentDominates: return PressureState::Atm;
    case ConflictMode::SupplyDominates: return PressureState::Vac;
    default: return PressureState::X;
    }
  }
  if (sources.has_atm)
    return PressureState::Atm;
  if (sources.has_vac)
    return PressureState::Vac;
  // No source: trapped air keeps its state if it is uniform.
  PressureState kept = member_prev.empty() ? PressureState::Atm : member_prev.front();
  for (PressureState p : member_prev)
    if (p != kept)
      return PressureState::X;
  return kept;
}

SimState initial_state(const Netlist& netlist)
{
  SimState s;
  s.pressure.assign(netlist.net_capacity(), PressureState::Atm);
  s.valve_open.assign(netlist.valves().size(), ValveState::Closed);
  return s;
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n)
  {
    for (std::size_t i = 0; i < n; ++i)
      parent[i] = static_cast<std::uint32_t>(i);
  }

  std::uint32_t find(std::uint32_t x)
  {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

SimState sim_step(const Netlist& netlist, const SimState& prev, const Drives& drives,
                  const SimConfig& config, const SimOverrides& overrides)
{
  const auto& valves = netlist.valves();
  const std::size_t n = netlist.net_capacity();

  SimState next;
  next.pressure.assign(n, PressureState::Atm);
  next.valve_open.assign(valves.size(), ValveState::Closed);

  // Valve conduction from the previous state.
  for (std::size_t i = 0; i < valves.size(); ++i) {
    const Valve& v = valves[i];
    auto stuck = overrides.stuck_valves.find(v.name);
    if (stuck != overrides.stuck_valves.end()) {
      next.valve_open[i] = stuck->second;
      continue;
    }
    next.valve_open[i] = conduction(prev.pressure[v.chamber.value], prev.pressure[v.side1.value],
                                    prev.pressure[v.side2.value], config.semantics);
  }

  // Components over open valves.
  UnionFind uf(n);
  for (std::size_t i = 0; i < valves.size(); ++i)
    if (next.valve_open[i] == ValveState::Open)
      uf.unite(valves[i].side1.value, valves[i].side2.value);

  std::vector<ComponentSources> sources(n);
  for (NetId vent : netlist.vents())
    sources[uf.find(vent.value)].has_atm = true;

  for (const Port& p : netlist.ports()) {
    if (!is_drivable(p.role))
      continue;
    if (overrides.exhausted_nets.count(p.net.value))
      continue; // a leak on this net defeats the solenoid behind the port
    PressureState level = PressureState::Atm;
    auto stuck = overrides.stuck_ports.find(p.name);
    if (stuck != overrides.stuck_ports.end()) {
      level = stuck->second;
    } else {
      auto it = drives.levels.find(p.name);
      if (it != drives.levels.end())
        level = it->second;
    }
    auto& src = sources[uf.find(p.net.value)];
    if (level == PressureState::Vac)
      src.has_vac = true;
    else
      src.has_atm = true;
  }

  std::vector<std::vector<PressureState>> member_prev(n);
  std::vector<bool> live(n, false);
  for (NetId id : netlist.live_nets()) {
    live[id.value] = true;
    member_prev[uf.find(id.value)].push_back(prev.pressure[id.value]);
  }

  std::vector<PressureState> comp_value(n, PressureState::Atm);
  std::vector<bool> comp_sourced(n, false);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!live[i] || uf.find(i) != i)
      continue;
    comp_value[i] = resolve_component(member_prev[i], sources[i], config.conflict);
    comp_sourced[i] = sources[i].has_atm || sources[i].has_vac;
  }

  // Conservative propagation across X valves: an unsourced component whose
  // value could be altered by a maybe-open valve becomes X. Iterate to the
  // closure; values only move towards X, so this terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < valves.size(); ++i) {
      if (next.valve_open[i] != ValveState::X)
        continue;
      std::uint32_t a = uf.find(valves[i].side1.value);
      std::uint32_t b = uf.find(valves[i].side2.value);
      if (a == b)
        continue;
      auto contaminate = [&](std::uint32_t target, std::uint32_t other) {
        if (!comp_sourced[target] && comp_value[target] != PressureState::X &&
            comp_value[target] != comp_value[other]) {
          comp_value[target] = PressureState::X;
          changed = true;
        }
      };
      contaminate(a, b);
      contaminate(b, a);
    }
  }

  for (std::uint32_t i = 0; i < n; ++i)
    next.pressure[i] = live[i] ? comp_value[uf.find(i)] : PressureState::Atm;

  return next;
}

SimState settle(const Netlist& netlist, const SimState& prev, const Drives& drives,
                const SimConfig& config, const SimOverrides& overrides)
{
  std::size_t limit = config.max_iterations;
  if (limit == 0)
    limit = 4 * netlist.net_count() + 8;

  std::vector<SimState> history;
  history.push_back(prev);

  for (std::size_t iter = 0; iter < limit; ++iter) {
    SimState next = sim_step(netlist, history.back(), drives, config, overrides);
    if (next == history.back()) {
      // Fixed point; next's valve states were computed from it.
      return next;
    }
    for (std::size_t k = 0; k + 1 < history.size(); ++k) {
      if (history[k] == next) {
        std::vector<SimState> cycle(history.begin() + static_cast<std::ptrdiff_t>(k),
                                    history.end());
        throw OscillationError("settle oscillates with period " +
                                   std::to_string(history.size() - k),
                               std::move(cycle));
      }
    }
    history.push_back(std::move(next));
  }
  throw OscillationError("settle did not converge within " + std::to_string(limit) +
                             " iterations",
                         std::vector<SimState>(history.end() -
                                                   std::min<std::size_t>(history.size(), 4),
                                               history.end()));
}

} // namespace pneu
