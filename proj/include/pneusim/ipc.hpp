#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pneusim/gates.hpp"
#include "pneusim/protocol.hpp"
#include "pneusim/sim.hpp"

namespace pneu {

enum class WhistleState { Silent, Sounding, Unknown };

// The pneumatic level shifter: vacuum on the error line contracts the
// bellows and opens the pinch point feeding the whistle.
WhistleState level_shift(PressureState error_level);

std::string to_string(WhistleState w);

// The model IPC device teed onto the detector: three bellows share the
// control-bit nets (same net, no separate sensor) and a free bellows shows
// the expected parity line.
struct IpcSystem {
  GateHandle detector;
  std::vector<std::string> bellows_ports; // bellows1..3, on the bit nets
  std::string parity_indicator_port;
};

IpcSystem build_ipc_system();

struct WhistleTransition {
  std::int64_t time_ms = 0;
  WhistleState from = WhistleState::Silent;
  WhistleState to = WhistleState::Silent;
  std::string context; // most recent checkpoint label
};

struct IpcRun {
  Trace trace;
  std::vector<WhistleTransition> transitions;
  std::vector<ScenarioEvent> scenario;
  bool error_detected = false;
};

// Peristaltic one-hot actuation (bit1, bit2, bit3, repeating) woven with the
// chosen checking schedule and the given fault/clear events, simulated for
// total_ms.
IpcRun run_ipc(ScheduleMode mode, const std::vector<ScenarioEvent>& fault_events,
               const PhaseConfig& cfg, std::int64_t total_ms);

std::string whistle_events_csv(const IpcRun& run);

} // namespace pneu
