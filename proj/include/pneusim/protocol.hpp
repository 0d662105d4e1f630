#pragma once

#include <cstdint>
#include <vector>

#include "pneusim/dsl.hpp"

namespace pneu {

using BitVector = std::vector<int>;

enum class ParityMethod { XorFold, SumMod2, PopcountOdd };

int parity(const BitVector& bits, ParityMethod method);

struct PhaseConfig {
  std::int64_t run_duration_ms = 22500;
  std::int64_t check_duration_ms = 39000;
  std::int64_t run_step_ms = 750;
  std::int64_t operate_ms = 1000;
  std::int64_t reset_ms = 5000;
  std::int64_t reset_pulse_ms = 500;
  bool check_all_ones = false; // check phase drives all bits at once instead of in turn

  std::int64_t check_cycle_ms() const { return operate_ms + reset_ms; }
  std::int64_t period_ms() const { return run_duration_ms + check_duration_ms; }
};

// Ordered power-down (3, 2, 1), the reset pulse on both reset rails, and
// the expected-parity release. Eight drive events spanning reset_ms.
std::vector<ScenarioEvent> reset_sequence(const PhaseConfig& cfg, std::int64_t start_ms);

// Compact reset pulse that arms the detector at scenario start (the device
// is reset once before first use). Four events over 4 ms.
std::vector<ScenarioEvent> arming_pulse(std::int64_t start_ms);

// One detector check: expected parity applied, supplies up in order, the
// operate hold with a read checkpoint, then reset_sequence. Control bits
// are the plant's responsibility (tee junction) and are not emitted here.
std::vector<ScenarioEvent> check_cycle(const BitVector& bits, const PhaseConfig& cfg,
                                       std::int64_t start_ms);

// Offset within a check cycle at which the plant should release the control
// bits: after the last supply is off, before the reset pulse opens the
// recharge valves.
std::int64_t bit_clear_offset(const PhaseConfig& cfg);

// The 16-combination verification sweep: the first eight blocks carry the
// consistent expected parity, the last eight the deliberately wrong one.
// Each combination is held for hold_ms before its read and reset.
std::vector<ScenarioEvent> fig4_sweep(const PhaseConfig& cfg, std::int64_t hold_ms);

enum class ScheduleMode { Continuous, Phased };

// Continuous: every step is followed by a full check cycle.
// Phased: fast stepping with supplies off, then a check phase driving each
// control bit in turn (or all at once with check_all_ones).
std::vector<ScenarioEvent> phase_schedule(const std::vector<BitVector>& steps,
                                          const PhaseConfig& cfg, ScheduleMode mode);

} // namespace pneu
