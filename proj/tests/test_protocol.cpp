#include <doctest.h>

#include "pneusim/gates.hpp"
#include "pneusim/protocol.hpp"
#include "pneusim/sim.hpp"

using namespace pneu;

TEST_CASE("parity methods agree on the paper's example")
{
  BitVector bits{1, 1, 0};
  CHECK(parity(bits, ParityMethod::XorFold) == 0);
  CHECK(parity(bits, ParityMethod::SumMod2) == 0);
  CHECK(parity(bits, ParityMethod::PopcountOdd) == 0);
  CHECK(parity(BitVector{0, 0, 0}, ParityMethod::XorFold) == 0);
  CHECK(parity(BitVector{0, 1, 0}, ParityMethod::XorFold) == 1);
}

TEST_CASE("parity methods agree exhaustively up to length 12")
{
  for (std::size_t len = 1; len <= 12; ++len) {
    for (std::size_t v = 0; v < (std::size_t{1} << len); ++v) {
      BitVector bits;
      int pop = 0;
      for (std::size_t j = 0; j < len; ++j) {
        int b = static_cast<int>((v >> j) & 1);
        bits.push_back(b);
        pop += b;
      }
      int expected = pop % 2; // brute-force popcount oracle
      CHECK(parity(bits, ParityMethod::XorFold) == expected);
      CHECK(parity(bits, ParityMethod::SumMod2) == expected);
      CHECK(parity(bits, ParityMethod::PopcountOdd) == expected);
    }
  }
}

TEST_CASE("single-bit flips always change parity, double flips never do")
{
  for (std::size_t v = 0; v < 8; ++v) {
    BitVector base{static_cast<int>(v & 1), static_cast<int>((v >> 1) & 1),
                   static_cast<int>((v >> 2) & 1)};
    int expected = parity(base, ParityMethod::XorFold);
    for (std::size_t i = 0; i < 3; ++i) {
      BitVector flipped = base;
      flipped[i] ^= 1;
      CHECK(parity(flipped, ParityMethod::XorFold) != expected);
      for (std::size_t j = i + 1; j < 3; ++j) {
        BitVector twice = flipped;
        twice[j] ^= 1;
        CHECK(parity(twice, ParityMethod::XorFold) == expected);
      }
    }
  }
}

TEST_CASE("reset sequence shape")
{
  PhaseConfig cfg;
  auto events = reset_sequence(cfg, 0);
  REQUIRE(events.size() == 8);
  // strictly increasing, spanning reset_ms, in the stated order
  std::int64_t prev = -1;
  for (const auto& ev : events) {
    CHECK(ev.time_ms > prev);
    prev = ev.time_ms;
  }
  CHECK(events.back().time_ms == cfg.reset_ms);
  auto port = [&](std::size_t i) { return std::get<SetDriveAction>(events[i].action).port; };
  auto level = [&](std::size_t i) {
    return std::get<SetDriveAction>(events[i].action).level;
  };
  CHECK(port(0) == "power3");
  CHECK(port(1) == "power2");
  CHECK(port(2) == "power1");
  CHECK(port(3) == "reset1");
  CHECK(level(3) == PressureState::Vac);
  CHECK(port(4) == "reset2");
  CHECK(port(5) == "reset1");
  CHECK(level(5) == PressureState::Atm);
  CHECK(port(6) == "reset2");
  CHECK(port(7) == "parity");
  // pulse width per rail
  CHECK(events[5].time_ms - events[3].time_ms == cfg.reset_pulse_ms);
  CHECK(events[6].time_ms - events[4].time_ms == cfg.reset_pulse_ms);
}

TEST_CASE("check cycle drives parity and spans operate+reset")
{
  PhaseConfig cfg;
  auto events = check_cycle(BitVector{0, 1, 0}, cfg, 0);
  REQUIRE(!events.empty());
  const auto& first = std::get<SetDriveAction>(events[0].action);
  CHECK(first.port == "parity");
  CHECK(first.level == PressureState::Vac); // parity(0,1,0) = 1

  auto events2 = check_cycle(BitVector{1, 1, 0}, cfg, 0);
  CHECK(std::get<SetDriveAction>(events2[0].action).level == PressureState::Atm);

  CHECK(events.back().time_ms == cfg.operate_ms + cfg.reset_ms); // 6000 with defaults
  CHECK(cfg.check_cycle_ms() == 6000);

  CHECK_THROWS(check_cycle(BitVector{1, 0}, cfg, 0));
}

TEST_CASE("check cycle read point follows the power-up events")
{
  PhaseConfig cfg;
  auto events = check_cycle(BitVector{1, 0, 0}, cfg, 1000);
  std::int64_t read_time = -1;
  std::int64_t last_power_up = -1;
  for (const auto& ev : events) {
    if (const auto* cp = std::get_if<CheckpointAction>(&ev.action))
      read_time = ev.time_ms, (void)cp;
    if (const auto* set = std::get_if<SetDriveAction>(&ev.action))
      if (set->port.rfind("power", 0) == 0 && set->level == PressureState::Vac)
        last_power_up = ev.time_ms;
  }
  CHECK(read_time > last_power_up);
  CHECK(read_time == 1000 + cfg.operate_ms);
}

TEST_CASE("continuous schedule emits one check per step")
{
  PhaseConfig cfg;
  std::vector<BitVector> steps{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto events = phase_schedule(steps, cfg, ScheduleMode::Continuous);
  int checkpoints = 0;
  for (const auto& ev : events)
    if (std::holds_alternative<CheckpointAction>(ev.action))
      ++checkpoints;
  CHECK(checkpoints == 3);
  // total span: 3 cycles of operate+reset
  CHECK(events.back().time_ms <= 3 * cfg.check_cycle_ms());
}

TEST_CASE("phased schedule arithmetic")
{
  PhaseConfig cfg;
  CHECK(cfg.period_ms() == 61500);

  std::vector<BitVector> steps;
  for (int i = 0; i < 30; ++i) {
    BitVector bits{0, 0, 0};
    bits[static_cast<std::size_t>(i % 3)] = 1;
    steps.push_back(bits);
  }
  auto events = phase_schedule(steps, cfg, ScheduleMode::Phased);

  // exactly one period: 30 run steps then 3 check cycles inside 39 s
  int checkpoints = 0;
  std::int64_t last_event = 0;
  for (const auto& ev : events) {
    if (std::holds_alternative<CheckpointAction>(ev.action))
      ++checkpoints;
    last_event = std::max(last_event, ev.time_ms);
  }
  CHECK(checkpoints == 3);
  CHECK(last_event <= cfg.period_ms());

  // check cycles fit in their slots with margin
  const std::int64_t slot = cfg.check_duration_ms / 3;
  CHECK(cfg.check_cycle_ms() <= slot);
}

TEST_CASE("phased schedule with check_all_ones drives one combined check")
{
  PhaseConfig cfg;
  cfg.check_all_ones = true;
  std::vector<BitVector> steps(30, BitVector{1, 0, 0});
  auto events = phase_schedule(steps, cfg, ScheduleMode::Phased);
  int checkpoints = 0;
  for (const auto& ev : events)
    if (const auto* cp = std::get_if<CheckpointAction>(&ev.action)) {
      ++checkpoints;
      CHECK(cp->label == "check_b111_p1");
    }
  CHECK(checkpoints == 1);
}

TEST_CASE("fragments compose: concatenation preserves per-fragment order")
{
  PhaseConfig cfg;
  auto a = check_cycle(BitVector{1, 0, 0}, cfg, 0);
  auto b = check_cycle(BitVector{0, 1, 0}, cfg, cfg.check_cycle_ms());
  std::vector<ScenarioEvent> all = a;
  all.insert(all.end(), b.begin(), b.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    CHECK(all[i - 1].time_ms <= all[i].time_ms);
}

TEST_CASE("full check cycle on the detector: match silent, mismatch loud")
{
  GateHandle d = build_parity_detector();
  PhaseConfig cfg;
  NetId error = d.output_net();

  auto run_check = [&](const BitVector& bits, int expected_parity_flip) {
    std::vector<ScenarioEvent> events = arming_pulse(0);
    const char* ports[3] = {"bit1", "bit2", "bit3"};
    for (int i = 0; i < 3; ++i)
      events.push_back(
          ScenarioEvent{10, SetDriveAction{ports[i], level_from_bit(bits[i])}});
    auto cycle = check_cycle(bits, cfg, 10);
    if (expected_parity_flip) {
      // sabotage: flip the expected-parity drive to simulate a stale bit
      for (auto& ev : cycle)
        if (auto* set = std::get_if<SetDriveAction>(&ev.action))
          if (set->port == "parity")
            set->level = set->level == PressureState::Vac ? PressureState::Atm
                                                          : PressureState::Vac;
    }
    events.insert(events.end(), cycle.begin(), cycle.end());
    const char* bports[3] = {"bit1", "bit2", "bit3"};
    for (int i = 0; i < 3; ++i)
      events.push_back(ScenarioEvent{bit_clear_offset(cfg),
                                     SetDriveAction{bports[i], PressureState::Atm}});
    Trace trace = run_events(d.netlist, events, SimConfig{});
    REQUIRE(!trace.aborted());
    // find the read checkpoint
    for (const auto& entry : trace.entries)
      if (!entry.checkpoint.empty())
        return entry.state.net(error);
    return PressureState::X;
  };

  CHECK(run_check(BitVector{1, 1, 0}, false) == PressureState::Atm);
  CHECK(run_check(BitVector{1, 1, 0}, true) == PressureState::Vac);
  CHECK(run_check(BitVector{0, 0, 0}, false) == PressureState::Atm);
  CHECK(run_check(BitVector{0, 0, 0}, true) == PressureState::Vac);
}

TEST_CASE("after reset, an all-zeros check is clean for all 16 prior states")
{
  GateHandle d = build_parity_detector();
  SimConfig cfg;
  NetId error = d.output_net();

  for (std::size_t prior = 0; prior < 16; ++prior) {
    std::vector<int> bits;
    for (std::size_t j = 0; j < 4; ++j)
      bits.push_back(static_cast<int>((prior >> (3 - j)) & 1));

    SimState state = initial_state(d.netlist);
    Drives drives;
    gate_reset_pulse(d, state, drives, cfg);
    gate_apply_inputs(d, bits, state, drives, cfg);
    gate_power_up(d, state, drives, cfg);

    // full reset: ordered power-down, release inputs, pulse
    gate_power_down(d, state, drives, cfg);
    gate_clear_inputs(d, state, drives, cfg);
    gate_reset_pulse(d, state, drives, cfg);

    // all-zeros check
    gate_apply_inputs(d, {0, 0, 0, 0}, state, drives, cfg);
    gate_power_up(d, state, drives, cfg);
    CAPTURE(prior);
    CHECK(state.net(error) == PressureState::Atm);
    gate_power_down(d, state, drives, cfg);
    gate_clear_inputs(d, state, drives, cfg);
    gate_reset_pulse(d, state, drives, cfg);
  }
}

TEST_CASE("a mismatch leaves trapped vacuum once the power is off")
{
  GateHandle d = build_parity_detector();
  SimConfig cfg;

  SimState state = initial_state(d.netlist);
  Drives drives;
  gate_reset_pulse(d, state, drives, cfg);
  gate_apply_inputs(d, {0, 0, 0, 1}, state, drives, cfg); // wrong expected parity
  gate_power_up(d, state, drives, cfg);
  CHECK(state.net(d.output_net()) == PressureState::Vac);

  gate_power_down(d, state, drives, cfg);

  // some internal net still holds vacuum with every supply off
  std::set<std::uint32_t> port_nets;
  for (const Port& p : d.netlist.ports())
    port_nets.insert(p.net.value);
  int held = 0;
  for (NetId id : d.netlist.live_nets())
    if (!port_nets.count(id.value) && state.net(id) == PressureState::Vac)
      ++held;
  CHECK(held >= 1);
}
