#include "pneusim/protocol.hpp"

#include <stdexcept>

namespace pneu {

int parity(const BitVector& bits, ParityMethod method)
{
  switch (method) {
  case ParityMethod::XorFold: {
    int acc = 0;
    for (int b : bits)
      acc ^= (b ? 1 : 0);
    return acc;
  }
  case ParityMethod::SumMod2: {
    long long sum = 0;
    for (int b : bits)
      sum += (b ? 1 : 0);
    return static_cast<int>(sum % 2);
  }
  default: {
    std::size_t ones = 0;
    for (int b : bits)
      if (b)
        ++ones;
    return (ones % 2 == 1) ? 1 : 0;
  }
  }
}

namespace {

ScenarioEvent set_event(std::int64_t t, const std::string& port, PressureState level)
{
  return ScenarioEvent{t, SetDriveAction{port, level}};
}

} // namespace

std::vector<ScenarioEvent> reset_sequence(const PhaseConfig& cfg, std::int64_t start_ms)
{
  const std::int64_t step = cfg.reset_ms / 8;
  const std::int64_t pulse = cfg.reset_pulse_ms;
  std::vector<ScenarioEvent> events;
  events.push_back(set_event(start_ms + step, "power3", PressureState::Atm));
  events.push_back(set_event(start_ms + 2 * step, "power2", PressureState::Atm));
  events.push_back(set_event(start_ms + 3 * step, "power1", PressureState::Atm));
  // The open rail rises first and falls first; the fill rail must still be
  // at vacuum when the recharge valves close.
  const std::int64_t pulse_start = start_ms + 4 * step;
  events.push_back(set_event(pulse_start, "reset1", PressureState::Vac));
  events.push_back(set_event(pulse_start + pulse / 2, "reset2", PressureState::Vac));
  events.push_back(set_event(pulse_start + pulse, "reset1", PressureState::Atm));
  events.push_back(set_event(pulse_start + 3 * pulse / 2, "reset2", PressureState::Atm));
  events.push_back(set_event(start_ms + cfg.reset_ms, "parity", PressureState::Atm));
  return events;
}

std::vector<ScenarioEvent> arming_pulse(std::int64_t start_ms)
{
  return {
      set_event(start_ms, "reset1", PressureState::Vac),
      set_event(start_ms + 1, "reset2", PressureState::Vac),
      set_event(start_ms + 2, "reset1", PressureState::Atm),
      set_event(start_ms + 3, "reset2", PressureState::Atm),
  };
}

std::vector<ScenarioEvent> check_cycle(const BitVector& bits, const PhaseConfig& cfg,
                                       std::int64_t start_ms)
{
  if (bits.size() != 3)
    throw std::invalid_argument("check_cycle expects exactly 3 control bits");

  std::vector<ScenarioEvent> events;
  const int expected = parity(bits, ParityMethod::XorFold);
  events.push_back(set_event(start_ms, "parity", level_from_bit(expected)));

  const std::int64_t quarter = cfg.operate_ms / 4;
  events.push_back(set_event(start_ms + quarter, "power1", PressureState::Vac));
  events.push_back(set_event(start_ms + 2 * quarter, "power2", PressureState::Vac));
  events.push_back(set_event(start_ms + 3 * quarter, "power3", PressureState::Vac));

  std::string label = "check_b";
  for (int b : bits)
    label += char('0' + (b ? 1 : 0));
  label += "_p";
  label += char('0' + expected);
  events.push_back(ScenarioEvent{start_ms + cfg.operate_ms, CheckpointAction{label}});

  auto reset = reset_sequence(cfg, start_ms + cfg.operate_ms);
  events.insert(events.end(), reset.begin(), reset.end());
  return events;
}

std::int64_t bit_clear_offset(const PhaseConfig& cfg)
{
  // Between the last supply-off event (3/8 of reset) and the pulse (4/8).
  return cfg.operate_ms + cfg.reset_ms * 7 / 16;
}

std::vector<ScenarioEvent> fig4_sweep(const PhaseConfig& cfg, std::int64_t hold_ms)
{
  std::vector<ScenarioEvent> events = arming_pulse(0);
  const std::int64_t block_ms = hold_ms + cfg.reset_ms + 1000;
  const char* bit_ports[3] = {"bit1", "bit2", "bit3"};

  for (int i = 0; i < 16; ++i) {
    const std::int64_t t0 = 100 + i * block_ms;
    int b1 = (i >> 2) & 1, b2 = (i >> 1) & 1, b3 = i & 1;
    int consistent = parity(BitVector{b1, b2, b3}, ParityMethod::XorFold);
    int p = (i < 8) ? consistent : 1 - consistent;

    int bits[3] = {b1, b2, b3};
    for (int j = 0; j < 3; ++j)
      events.push_back(set_event(t0, bit_ports[j], level_from_bit(bits[j])));
    events.push_back(set_event(t0, "parity", level_from_bit(p)));
    const std::int64_t quarter = cfg.operate_ms / 4;
    events.push_back(set_event(t0 + quarter, "power1", PressureState::Vac));
    events.push_back(set_event(t0 + 2 * quarter, "power2", PressureState::Vac));
    events.push_back(set_event(t0 + 3 * quarter, "power3", PressureState::Vac));

    std::string label = "sweep_b";
    label += char('0' + b1);
    label += char('0' + b2);
    label += char('0' + b3);
    label += "_p";
    label += char('0' + p);
    events.push_back(ScenarioEvent{t0 + hold_ms, CheckpointAction{label}});

    auto reset = reset_sequence(cfg, t0 + hold_ms);
    events.insert(events.end(), reset.begin(), reset.end());
    for (int j = 0; j < 3; ++j)
      events.push_back(set_event(t0 + hold_ms + cfg.reset_ms * 7 / 16, bit_ports[j],
                                 PressureState::Atm));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) {
                     return a.time_ms < b.time_ms;
                   });
  return events;
}

namespace {

void emit_bits(std::vector<ScenarioEvent>& events, std::int64_t t, const BitVector& bits)
{
  const char* ports[3] = {"bit1", "bit2", "bit3"};
  for (std::size_t i = 0; i < 3; ++i)
    events.push_back(ScenarioEvent{
        t, SetDriveAction{ports[i], level_from_bit(i < bits.size() ? bits[i] : 0)}});
}

} // namespace

std::vector<ScenarioEvent> phase_schedule(const std::vector<BitVector>& steps,
                                          const PhaseConfig& cfg, ScheduleMode mode)
{
  if (steps.empty())
    throw std::invalid_argument("phase_schedule needs at least one step");
  if (cfg.run_duration_ms <= 0 || cfg.check_duration_ms <= 0 || cfg.run_step_ms <= 0 ||
      cfg.operate_ms <= 0 || cfg.reset_ms <= 0 || cfg.reset_pulse_ms <= 0)
    throw std::invalid_argument("phase durations must be positive");

  std::vector<ScenarioEvent> events;

  if (mode == ScheduleMode::Continuous) {
    std::int64_t t = 0;
    for (const BitVector& bits : steps) {
      emit_bits(events, t, bits);
      auto cycle = check_cycle(bits, cfg, t);
      events.insert(events.end(), cycle.begin(), cycle.end());
      emit_bits(events, t + bit_clear_offset(cfg), BitVector{0, 0, 0});
      t += cfg.check_cycle_ms();
    }
    return events;
  }

  const std::size_t per_run =
      static_cast<std::size_t>(cfg.run_duration_ms / cfg.run_step_ms);
  std::size_t consumed = 0;
  std::int64_t period_start = 0;
  while (consumed < steps.size()) {
    for (std::size_t i = 0; i < per_run; ++i) {
      const BitVector& bits = steps[(consumed + i) % steps.size()];
      emit_bits(events, period_start + static_cast<std::int64_t>(i) * cfg.run_step_ms,
                bits);
    }
    consumed += per_run;

    const std::int64_t check_start = period_start + cfg.run_duration_ms;
    if (cfg.check_all_ones) {
      emit_bits(events, check_start, BitVector{1, 1, 1});
      auto cycle = check_cycle(BitVector{1, 1, 1}, cfg, check_start);
      events.insert(events.end(), cycle.begin(), cycle.end());
      emit_bits(events, check_start + bit_clear_offset(cfg), BitVector{0, 0, 0});
    } else {
      const std::int64_t slot = cfg.check_duration_ms / 3;
      for (int j = 0; j < 3; ++j) {
        BitVector bits{0, 0, 0};
        bits[static_cast<std::size_t>(j)] = 1;
        const std::int64_t t = check_start + j * slot;
        emit_bits(events, t, bits);
        auto cycle = check_cycle(bits, cfg, t);
        events.insert(events.end(), cycle.begin(), cycle.end());
        emit_bits(events, t + bit_clear_offset(cfg), BitVector{0, 0, 0});
      }
    }
    period_start += cfg.period_ms();
  }
  return events;
}

} // namespace pneu
