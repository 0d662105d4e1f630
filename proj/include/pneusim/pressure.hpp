#pragma once

#include <cstdint>
#include <string>

namespace pneu {

// Discrete pressure level of a net. Atm is atmospheric pressure (logic 0),
// Vac is vacuum (logic 1). X stands for an intermediate or conflicted
// pressure that cannot be trusted to actuate a valve.
enum class PressureState : std::uint8_t { Atm = 0, Vac = 1, X = 2 };

constexpr bool is_definite(PressureState p) { return p != PressureState::X; }

constexpr PressureState level_from_bit(int bit)
{
  return bit ? PressureState::Vac : PressureState::Atm;
}

constexpr char to_char(PressureState p)
{
  switch (p) {
  case PressureState::Atm: return '0';
  case PressureState::Vac: return '1';
  default: return 'X';
  }
}

inline std::string to_string(PressureState p)
{
  switch (p) {
  case PressureState::Atm: return "ATM";
  case PressureState::Vac: return "VAC";
  default: return "X";
  }
}

// Conduction state of a valve membrane.
enum class ValveState : std::uint8_t { Open = 0, Closed = 1, X = 2 };

inline std::string to_string(ValveState v)
{
  switch (v) {
  case ValveState::Open: return "OPEN";
  case ValveState::Closed: return "CLOSED";
  default: return "X";
  }
}

} // namespace pneu
