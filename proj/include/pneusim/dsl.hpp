#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pneusim/netlist.hpp"
#include "pneusim/pressure.hpp"

namespace pneu {

struct SourceSpan {
  int line = 0;   // 1-based
  int column = 0; // 1-based
};

struct ParseError {
  SourceSpan span;
  std::string message;

  std::string to_string() const
  {
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
  }
};

template <typename T>
using ParseResult = std::variant<T, ParseError>;

template <typename T>
bool parse_ok(const ParseResult<T>& r)
{
  return std::holds_alternative<T>(r);
}

enum class FaultKind : std::uint8_t { Leak, Cut, StuckValve, StuckBit };

struct FaultSpec {
  FaultKind kind = FaultKind::Leak;
  std::string id;
  std::string net;                      // Leak, Cut
  std::vector<std::string> distal_ports; // Cut
  std::string valve;                    // StuckValve
  ValveState stuck_state = ValveState::Closed;
  std::string port;                     // StuckBit
  PressureState stuck_level = PressureState::Atm;
};

struct SetDriveAction {
  std::string port;
  PressureState level = PressureState::Atm; // Atm or Vac only
};

struct InjectFaultAction {
  FaultSpec fault;
};

struct ClearFaultAction {
  std::string fault_id;
};

struct CheckpointAction {
  std::string label;
};

using ScenarioAction =
    std::variant<SetDriveAction, InjectFaultAction, ClearFaultAction, CheckpointAction>;

struct ScenarioEvent {
  std::int64_t time_ms = 0;
  ScenarioAction action;
};

// Line-oriented `.pnet` grammar:
//   NET <name>
//   VALVE <name> CHAMBER <net> SIDES <net> <net>
//   VENT <net>
//   PORT <name> <net> ROLE <role>
//   VIA <netA> <netB>
ParseResult<Netlist> parse_netlist(const std::string& text);

// Canonical text form; parse(serialize(n)) is structurally identical to n
// and a second serialize is byte-identical.
std::string serialize_netlist(const Netlist& netlist);

// Line-oriented `.pseq` grammar:
//   AT <ms> SET <port> <VAC|ATM>
//   AT <ms> FAULT LEAK <net> AS <id>
//   AT <ms> FAULT CUT <net> DISTAL <port>... AS <id>
//   AT <ms> FAULT STUCK_VALVE <valve> <OPEN|CLOSED> AS <id>
//   AT <ms> FAULT STUCK_BIT <port> <VAC|ATM> AS <id>
//   AT <ms> CLEAR <id>
//   AT <ms> CHECKPOINT <label>
ParseResult<std::vector<ScenarioEvent>> parse_scenario(const std::string& text);

std::string serialize_scenario(const std::vector<ScenarioEvent>& events);

} // namespace pneu
