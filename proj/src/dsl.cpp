#include "pneusim/dsl.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace pneu {

namespace {

struct Token {
  std::string text;
  int column = 0; // 1-based
};

std::vector<Token> tokenize(const std::string& line)
{
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#')
      break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    tokens.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

std::vector<std::string> split_lines(const std::string& text)
{
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (!current.empty())
    lines.push_back(current);
  return lines;
}

ParseError err_at(int line, const Token& tok, const std::string& message)
{
  return ParseError{SourceSpan{line, tok.column}, message};
}

ParseError err_line(int line, const std::string& message)
{
  return ParseError{SourceSpan{line, 1}, message};
}

} // namespace

ParseResult<Netlist> parse_netlist(const std::string& text)
{
  Netlist netlist;
  const auto lines = split_lines(text);

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li) + 1;
    auto tokens = tokenize(lines[li]);
    if (tokens.empty())
      continue;
    const std::string& kw = tokens[0].text;

    auto need = [&](std::size_t count) -> std::optional<ParseError> {
      if (tokens.size() != count)
        return err_line(lineno, kw + " statement expects " + std::to_string(count - 1) +
                                    " arguments, got " + std::to_string(tokens.size() - 1));
      return std::nullopt;
    };
    auto lookup = [&](const Token& tok) -> std::optional<NetId> {
      return netlist.find_net_alive(tok.text);
    };

    if (kw == "NET") {
      if (auto e = need(2))
        return *e;
      if (netlist.find_net(tokens[1].text))
        return err_at(lineno, tokens[1], "duplicate net '" + tokens[1].text + "'");
      netlist.add_net(tokens[1].text);
    } else if (kw == "VALVE") {
      if (auto e = need(7))
        return *e;
      if (tokens[2].text != "CHAMBER")
        return err_at(lineno, tokens[2], "expected CHAMBER");
      if (tokens[4].text != "SIDES")
        return err_at(lineno, tokens[4], "expected SIDES");
      if (netlist.find_valve(tokens[1].text))
        return err_at(lineno, tokens[1], "duplicate valve '" + tokens[1].text + "'");
      auto chamber = lookup(tokens[3]);
      if (!chamber)
        return err_at(lineno, tokens[3], "unknown net '" + tokens[3].text + "'");
      auto side1 = lookup(tokens[5]);
      if (!side1)
        return err_at(lineno, tokens[5], "unknown net '" + tokens[5].text + "'");
      auto side2 = lookup(tokens[6]);
      if (!side2)
        return err_at(lineno, tokens[6], "unknown net '" + tokens[6].text + "'");
      try {
        netlist.add_valve(tokens[1].text, *chamber, *side1, *side2);
      } catch (const NetlistError& e) {
        return err_at(lineno, tokens[1], e.what());
      }
    } else if (kw == "VENT") {
      if (auto e = need(2))
        return *e;
      auto net = lookup(tokens[1]);
      if (!net)
        return err_at(lineno, tokens[1], "unknown net '" + tokens[1].text + "'");
      netlist.add_vent(*net);
    } else if (kw == "PORT") {
      if (auto e = need(5))
        return *e;
      if (tokens[3].text != "ROLE")
        return err_at(lineno, tokens[3], "expected ROLE");
      if (netlist.find_port(tokens[1].text))
        return err_at(lineno, tokens[1], "duplicate port '" + tokens[1].text + "'");
      auto net = lookup(tokens[2]);
      if (!net)
        return err_at(lineno, tokens[2], "unknown net '" + tokens[2].text + "'");
      auto role = port_role_from_string(tokens[4].text);
      if (!role)
        return err_at(lineno, tokens[4], "malformed role '" + tokens[4].text + "'");
      netlist.add_port(tokens[1].text, *net, *role);
    } else if (kw == "VIA") {
      if (auto e = need(3))
        return *e;
      auto a = lookup(tokens[1]);
      if (!a)
        return err_at(lineno, tokens[1], "unknown net '" + tokens[1].text + "'");
      auto b = lookup(tokens[2]);
      if (!b)
        return err_at(lineno, tokens[2], "unknown net '" + tokens[2].text + "'");
      if (*a == *b)
        return err_at(lineno, tokens[2], "self-merge of net '" + tokens[1].text + "'");
      netlist.merge_via(*a, *b);
    } else {
      return err_at(lineno, tokens[0], "unknown keyword '" + kw + "'");
    }
  }
  return netlist;
}

std::string serialize_netlist(const Netlist& netlist)
{
  std::ostringstream out;
  out << "# pneusim netlist\n";

  // All net names, including merged-away ones: VIA lines re-merge them.
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < netlist.net_capacity(); ++i)
    names.push_back(netlist.net_name(NetId{i}));
  std::sort(names.begin(), names.end());
  // Merged-away names must be re-declared before their VIA line; emit every
  // name that is alive or appears as the loser of a recorded merge.
  std::vector<std::string> merged_losers;
  for (const auto& [a, b] : netlist.via_merges())
    merged_losers.push_back(netlist.net_name(b));
  for (const auto& name : names) {
    auto id = netlist.find_net(name);
    bool alive = id && netlist.net_alive(*id);
    bool loser = std::find(merged_losers.begin(), merged_losers.end(), name) !=
                 merged_losers.end();
    if (alive || loser)
      out << "NET " << name << "\n";
  }

  std::vector<std::string> vent_names;
  for (NetId v : netlist.vents())
    vent_names.push_back(netlist.net_name(v));
  std::sort(vent_names.begin(), vent_names.end());
  for (const auto& name : vent_names)
    out << "VENT " << name << "\n";

  std::vector<Valve> valves = netlist.valves();
  std::sort(valves.begin(), valves.end(),
            [](const Valve& a, const Valve& b) { return a.name < b.name; });
  for (const auto& v : valves)
    out << "VALVE " << v.name << " CHAMBER " << netlist.net_name(v.chamber) << " SIDES "
        << netlist.net_name(v.side1) << " " << netlist.net_name(v.side2) << "\n";

  std::vector<Port> ports = netlist.ports();
  std::sort(ports.begin(), ports.end(),
            [](const Port& a, const Port& b) { return a.name < b.name; });
  for (const auto& p : ports)
    out << "PORT " << p.name << " " << netlist.net_name(p.net) << " ROLE "
        << to_string(p.role) << "\n";

  // Record order, not alphabetical: merges must replay in sequence.
  for (const auto& [a, b] : netlist.via_merges())
    out << "VIA " << netlist.net_name(a) << " " << netlist.net_name(b) << "\n";

  return out.str();
}

namespace {

std::optional<std::int64_t> parse_time(const std::string& text)
{
  if (text.empty())
    return std::nullopt;
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
  if (text.size() > 15)
    return std::nullopt;
  return std::stoll(text);
}

std::optional<PressureState> parse_level(const std::string& text)
{
  if (text == "VAC")
    return PressureState::Vac;
  if (text == "ATM")
    return PressureState::Atm;
  return std::nullopt;
}

} // namespace

ParseResult<std::vector<ScenarioEvent>> parse_scenario(const std::string& text)
{
  std::vector<ScenarioEvent> events;
  const auto lines = split_lines(text);

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li) + 1;
    auto tokens = tokenize(lines[li]);
    if (tokens.empty())
      continue;
    if (tokens[0].text != "AT")
      return err_at(lineno, tokens[0], "expected AT");
    if (tokens.size() < 3)
      return err_line(lineno, "truncated event");
    auto time = parse_time(tokens[1].text);
    if (!time)
      return err_at(lineno, tokens[1], "bad timestamp '" + tokens[1].text + "'");

    const std::string& verb = tokens[2].text;
    ScenarioEvent ev;
    ev.time_ms = *time;

    if (verb == "SET") {
      if (tokens.size() != 5)
        return err_line(lineno, "SET expects: AT <ms> SET <port> <VAC|ATM>");
      auto level = parse_level(tokens[4].text);
      if (!level)
        return err_at(lineno, tokens[4], "malformed level '" + tokens[4].text + "'");
      ev.action = SetDriveAction{tokens[3].text, *level};
    } else if (verb == "CHECKPOINT") {
      if (tokens.size() != 4)
        return err_line(lineno, "CHECKPOINT expects: AT <ms> CHECKPOINT <label>");
      ev.action = CheckpointAction{tokens[3].text};
    } else if (verb == "CLEAR") {
      if (tokens.size() != 4)
        return err_line(lineno, "CLEAR expects: AT <ms> CLEAR <fault-id>");
      ev.action = ClearFaultAction{tokens[3].text};
    } else if (verb == "FAULT") {
      if (tokens.size() < 4)
        return err_line(lineno, "truncated FAULT event");
      const std::string& kind = tokens[3].text;
      FaultSpec spec;
      if (kind == "LEAK") {
        if (tokens.size() != 7 || tokens[5].text != "AS")
          return err_line(lineno, "LEAK expects: AT <ms> FAULT LEAK <net> AS <id>");
        spec.kind = FaultKind::Leak;
        spec.net = tokens[4].text;
        spec.id = tokens[6].text;
      } else if (kind == "CUT") {
        if (tokens.size() < 9 || tokens[5].text != "DISTAL")
          return err_line(lineno,
                          "CUT expects: AT <ms> FAULT CUT <net> DISTAL <port>... AS <id>");
        spec.kind = FaultKind::Cut;
        spec.net = tokens[4].text;
        std::size_t i = 6;
        while (i < tokens.size() && tokens[i].text != "AS")
          spec.distal_ports.push_back(tokens[i++].text);
        if (i + 2 != tokens.size() || tokens[i].text != "AS" || spec.distal_ports.empty())
          return err_line(lineno,
                          "CUT expects: AT <ms> FAULT CUT <net> DISTAL <port>... AS <id>");
        spec.id = tokens[i + 1].text;
      } else if (kind == "STUCK_VALVE") {
        if (tokens.size() != 8 || tokens[6].text != "AS")
          return err_line(lineno,
                          "STUCK_VALVE expects: AT <ms> FAULT STUCK_VALVE <valve> "
                          "<OPEN|CLOSED> AS <id>");
        spec.kind = FaultKind::StuckValve;
        spec.valve = tokens[4].text;
        if (tokens[5].text == "OPEN")
          spec.stuck_state = ValveState::Open;
        else if (tokens[5].text == "CLOSED")
          spec.stuck_state = ValveState::Closed;
        else
          return err_at(lineno, tokens[5], "expected OPEN or CLOSED");
        spec.id = tokens[7].text;
      } else if (kind == "STUCK_BIT") {
        if (tokens.size() != 8 || tokens[6].text != "AS")
          return err_line(lineno,
                          "STUCK_BIT expects: AT <ms> FAULT STUCK_BIT <port> <VAC|ATM> AS <id>");
        spec.kind = FaultKind::StuckBit;
        spec.port = tokens[4].text;
        auto level = parse_level(tokens[5].text);
        if (!level)
          return err_at(lineno, tokens[5], "malformed level '" + tokens[5].text + "'");
        spec.stuck_level = *level;
        spec.id = tokens[7].text;
      } else {
        return err_at(lineno, tokens[3], "unknown fault kind '" + kind + "'");
      }
      ev.action = InjectFaultAction{spec};
    } else {
      return err_at(lineno, tokens[2], "unknown action '" + verb + "'");
    }
    events.push_back(std::move(ev));
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) {
                     return a.time_ms < b.time_ms;
                   });
  return events;
}

std::string serialize_scenario(const std::vector<ScenarioEvent>& events)
{
  std::ostringstream out;
  out << "# pneusim scenario\n";
  for (const auto& ev : events) {
    out << "AT " << ev.time_ms << " ";
    if (const auto* set = std::get_if<SetDriveAction>(&ev.action)) {
      out << "SET " << set->port << " "
          << (set->level == PressureState::Vac ? "VAC" : "ATM");
    } else if (const auto* cp = std::get_if<CheckpointAction>(&ev.action)) {
      out << "CHECKPOINT " << cp->label;
    } else if (const auto* clear = std::get_if<ClearFaultAction>(&ev.action)) {
      out << "CLEAR " << clear->fault_id;
    } else if (const auto* inj = std::get_if<InjectFaultAction>(&ev.action)) {
      const FaultSpec& f = inj->fault;
      switch (f.kind) {
      case FaultKind::Leak:
        out << "FAULT LEAK " << f.net << " AS " << f.id;
        break;
      case FaultKind::Cut:
        out << "FAULT CUT " << f.net << " DISTAL";
        for (const auto& p : f.distal_ports)
          out << " " << p;
        out << " AS " << f.id;
        break;
      case FaultKind::StuckValve:
        out << "FAULT STUCK_VALVE " << f.valve << " "
            << (f.stuck_state == ValveState::Open ? "OPEN" : "CLOSED") << " AS " << f.id;
        break;
      case FaultKind::StuckBit:
        out << "FAULT STUCK_BIT " << f.port << " "
            << (f.stuck_level == PressureState::Vac ? "VAC" : "ATM") << " AS " << f.id;
        break;
      }
    }
    out << "\n";
  }
  return out.str();
}

} // namespace pneu
