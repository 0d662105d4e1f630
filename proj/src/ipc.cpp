#include "pneusim/ipc.hpp"

#include <algorithm>
#include <sstream>

namespace pneu {

WhistleState level_shift(PressureState error_level)
{
  switch (error_level) {
  case PressureState::Vac: return WhistleState::Sounding;
  case PressureState::Atm: return WhistleState::Silent;
  default: return WhistleState::Unknown;
  }
}

std::string to_string(WhistleState w)
{
  switch (w) {
  case WhistleState::Silent: return "SILENT";
  case WhistleState::Sounding: return "SOUNDING";
  default: return "UNKNOWN";
  }
}

IpcSystem build_ipc_system()
{
  IpcSystem sys;
  sys.detector = build_parity_detector();
  Netlist& nl = sys.detector.netlist;

  const char* bits[3] = {"bit1", "bit2", "bit3"};
  for (const char* bit : bits) {
    NetId net = sys.detector.netlist.find_port(bit)->net;
    std::string name = std::string("bellows") + &bit[3];
    nl.add_port(name, net, PortRole::GenericOut);
    sys.bellows_ports.push_back(name);
  }
  NetId parity_net = nl.find_port("parity")->net;
  nl.add_port("parity_bellows", parity_net, PortRole::GenericOut);
  sys.parity_indicator_port = "parity_bellows";
  return sys;
}

IpcRun run_ipc(ScheduleMode mode, const std::vector<ScenarioEvent>& fault_events,
               const PhaseConfig& cfg, std::int64_t total_ms)
{
  if (total_ms <= 0)
    throw std::invalid_argument("total_ms must be positive");

  IpcSystem sys = build_ipc_system();

  // Peristalsis: contract one bellows at a time, in sequence.
  const std::int64_t step_ms = mode == ScheduleMode::Continuous
                                   ? cfg.check_cycle_ms()
                                   : cfg.run_step_ms;
  std::size_t step_count = 0;
  if (mode == ScheduleMode::Continuous) {
    step_count = static_cast<std::size_t>(std::max<std::int64_t>(1, total_ms / step_ms));
  } else {
    const std::size_t per_run =
        static_cast<std::size_t>(cfg.run_duration_ms / cfg.run_step_ms);
    const std::size_t periods = static_cast<std::size_t>(
        std::max<std::int64_t>(1, (total_ms + cfg.period_ms() - 1) / cfg.period_ms()));
    step_count = per_run * periods;
  }

  std::vector<BitVector> steps;
  for (std::size_t i = 0; i < step_count; ++i) {
    BitVector bits{0, 0, 0};
    bits[i % 3] = 1;
    steps.push_back(bits);
  }

  std::vector<ScenarioEvent> events = arming_pulse(0);
  auto schedule = phase_schedule(steps, cfg, mode);
  events.insert(events.end(), schedule.begin(), schedule.end());
  events.insert(events.end(), fault_events.begin(), fault_events.end());
  std::stable_sort(events.begin(), events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) {
                     return a.time_ms < b.time_ms;
                   });
  events.erase(std::remove_if(events.begin(), events.end(),
                              [&](const ScenarioEvent& e) { return e.time_ms > total_ms; }),
               events.end());

  IpcRun run;
  run.scenario = events;
  run.trace = run_events(sys.detector.netlist, events, SimConfig{});

  // Derive whistle transitions from the settled error level of every entry.
  // The context names the read this transition belongs to: the checkpoint
  // of the surrounding check cycle (which settles slightly after the error
  // line moves).
  auto error_col = std::find(run.trace.port_columns.begin(), run.trace.port_columns.end(),
                             sys.detector.output_port);
  const std::size_t error_idx =
      static_cast<std::size_t>(error_col - run.trace.port_columns.begin());

  std::vector<std::pair<std::int64_t, std::string>> checkpoints;
  for (const auto& entry : run.trace.entries)
    if (!entry.checkpoint.empty())
      checkpoints.emplace_back(entry.time_ms, entry.checkpoint);
  auto context_for = [&](std::int64_t t) -> std::string {
    std::string last;
    for (const auto& [time, label] : checkpoints) {
      if (time >= t && time - t <= cfg.operate_ms)
        return label;
      if (time > t)
        break;
      last = label;
    }
    return last;
  };

  WhistleState current = WhistleState::Silent;
  for (const auto& entry : run.trace.entries) {
    WhistleState next = level_shift(entry.port_values.at(error_idx));
    if (next != current) {
      run.transitions.push_back(
          WhistleTransition{entry.time_ms, current, next, context_for(entry.time_ms)});
      current = next;
    }
    if (next == WhistleState::Sounding)
      run.error_detected = true;
  }
  return run;
}

std::string whistle_events_csv(const IpcRun& run)
{
  std::ostringstream out;
  out << "time_ms,from,to,context\n";
  for (const auto& t : run.transitions)
    out << t.time_ms << "," << to_string(t.from) << "," << to_string(t.to) << ","
        << t.context << "\n";
  return out.str();
}

} // namespace pneu
