#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pneusim/dsl.hpp"
#include "pneusim/gates.hpp"
#include "pneusim/ipc.hpp"
#include "pneusim/protocol.hpp"
#include "pneusim/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitToolFailure = 1;
constexpr int kExitErrorDetected = 2;

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << content;
}

pneu::Netlist load_netlist(const std::string& path)
{
  auto result = pneu::parse_netlist(read_file(path));
  if (auto* err = std::get_if<pneu::ParseError>(&result))
    throw std::runtime_error(path + ":" + err->to_string());
  return std::get<pneu::Netlist>(std::move(result));
}

std::vector<pneu::ScenarioEvent> load_scenario(const std::string& path)
{
  auto result = pneu::parse_scenario(read_file(path));
  if (auto* err = std::get_if<pneu::ParseError>(&result))
    throw std::runtime_error(path + ":" + err->to_string());
  return std::get<std::vector<pneu::ScenarioEvent>>(std::move(result));
}

pneu::SimConfig make_config(const std::string& semantics, const std::string& conflict)
{
  pneu::SimConfig cfg;
  if (semantics == "strict")
    cfg.semantics = pneu::ConductionSemantics::StrictClosure;
  else if (semantics != "chamber-vac")
    throw std::runtime_error("unknown semantics '" + semantics + "'");
  if (conflict == "vent")
    cfg.conflict = pneu::ConflictMode::VentDominates;
  else if (conflict == "supply")
    cfg.conflict = pneu::ConflictMode::SupplyDominates;
  else if (conflict != "x")
    throw std::runtime_error("unknown conflict mode '" + conflict + "'");
  return cfg;
}

// "<fault-spec>@<ms>" or "<id>@<ms>" for clears.
std::pair<std::string, std::int64_t> split_at_suffix(const std::string& text)
{
  auto pos = text.rfind('@');
  if (pos == std::string::npos)
    throw std::runtime_error("expected '...@<ms>' in '" + text + "'");
  return {text.substr(0, pos), std::stoll(text.substr(pos + 1))};
}

std::vector<pneu::ScenarioEvent> parse_fault_flags(const std::vector<std::string>& faults,
                                                   const std::vector<std::string>& clears)
{
  std::string lines;
  for (const auto& f : faults) {
    auto [spec, ms] = split_at_suffix(f);
    lines += "AT " + std::to_string(ms) + " FAULT " + spec + "\n";
  }
  for (const auto& c : clears) {
    auto [id, ms] = split_at_suffix(c);
    lines += "AT " + std::to_string(ms) + " CLEAR " + id + "\n";
  }
  auto result = pneu::parse_scenario(lines);
  if (auto* err = std::get_if<pneu::ParseError>(&result))
    throw std::runtime_error("bad fault flag: " + err->to_string());
  return std::get<std::vector<pneu::ScenarioEvent>>(std::move(result));
}

int cmd_lint(const std::string& path)
{
  pneu::Netlist nl = load_netlist(path);
  auto report = nl.validate();
  for (const auto& e : report.errors)
    std::cout << "error: " << e.message << "\n";
  for (const auto& w : report.warnings)
    std::cout << "warning: " << w.message << "\n";
  auto b = nl.budget();
  std::cout << "nets: " << nl.net_count() << ", valves: " << b.valves
            << ", vents: " << b.vents << ", vias: " << b.vias << "\n";
  return report.ok() ? kExitOk : kExitToolFailure;
}

int cmd_sweep(std::int64_t hold_ms, const pneu::SimConfig& cfg, const std::string& out_path)
{
  (void)hold_ms; // event-driven settling makes the hold instantaneous
  pneu::GateHandle detector = pneu::build_parity_detector();
  auto rows = pneu::truth_table(detector, cfg);

  std::ostringstream csv;
  csv << "b1,b2,b3,p,error\n";
  for (const auto& row : rows) {
    for (int b : row.inputs)
      csv << b << ",";
    csv << pneu::to_char(row.output) << "\n";
  }
  write_file(out_path, csv.str());
  return kExitOk;
}

int cmd_scenario(const std::string& netlist_path, const std::string& scenario_path,
                 const pneu::SimConfig& cfg, const std::string& out_path)
{
  pneu::Netlist nl = load_netlist(netlist_path);
  auto events = load_scenario(scenario_path);
  pneu::Trace trace = pneu::run_events(nl, events, cfg);
  write_file(out_path, pneu::trace_to_csv(trace));
  if (trace.aborted()) {
    std::cerr << "aborted at t=" << trace.abort->time_ms << ": " << trace.abort->message
              << "\n";
    return kExitToolFailure;
  }
  // CI-style signal: did any simulated error output reach vacuum?
  bool error_detected = false;
  for (std::size_t col = 0; col < trace.port_columns.size(); ++col) {
    const pneu::Port* p = nl.find_port(trace.port_columns[col]);
    if (!p || p->role != pneu::PortRole::ErrorOut)
      continue;
    for (const auto& entry : trace.entries)
      if (entry.port_values[col] == pneu::PressureState::Vac)
        error_detected = true;
  }
  return error_detected ? kExitErrorDetected : kExitOk;
}

int cmd_protocol(const std::string& mode, int steps, const pneu::PhaseConfig& cfg,
                 const std::string& out_path)
{
  std::vector<pneu::BitVector> bits;
  for (int i = 0; i < steps; ++i) {
    pneu::BitVector b{0, 0, 0};
    b[static_cast<std::size_t>(i % 3)] = 1;
    bits.push_back(b);
  }
  auto mode_v = mode == "phased" ? pneu::ScheduleMode::Phased
                                 : pneu::ScheduleMode::Continuous;
  auto events = pneu::phase_schedule(bits, cfg, mode_v);
  write_file(out_path, pneu::serialize_scenario(events));
  return kExitOk;
}

int cmd_ipc(const std::string& mode, const std::vector<std::string>& fault_flags,
            const std::vector<std::string>& clear_flags, std::int64_t total_ms,
            const std::string& trace_path, const std::string& events_path)
{
  auto faults = parse_fault_flags(fault_flags, clear_flags);
  auto mode_v = mode == "phased" ? pneu::ScheduleMode::Phased
                                 : pneu::ScheduleMode::Continuous;
  pneu::PhaseConfig cfg;
  if (total_ms <= 0)
    total_ms = mode_v == pneu::ScheduleMode::Phased ? 2 * cfg.period_ms()
                                                    : 12 * cfg.check_cycle_ms();
  pneu::IpcRun run = pneu::run_ipc(mode_v, faults, cfg, total_ms);
  write_file(trace_path, pneu::trace_to_csv(run.trace));
  if (!events_path.empty())
    write_file(events_path, pneu::whistle_events_csv(run));
  for (const auto& t : run.transitions)
    std::cout << "t=" << t.time_ms << " whistle " << pneu::to_string(t.from) << " -> "
              << pneu::to_string(t.to)
              << (t.context.empty() ? "" : " (" + t.context + ")") << "\n";
  if (run.trace.aborted()) {
    std::cerr << "aborted: " << run.trace.abort->message << "\n";
    return kExitToolFailure;
  }
  return run.error_detected ? kExitErrorDetected : kExitOk;
}

int cmd_emit(const std::string& what, const std::string& out_path)
{
  pneu::GateHandle handle;
  if (what == "detector")
    handle = pneu::build_parity_detector();
  else if (what == "and")
    handle = pneu::build_gate(pneu::GateKind::And);
  else if (what == "or")
    handle = pneu::build_gate(pneu::GateKind::Or);
  else if (what == "xor")
    handle = pneu::build_gate(pneu::GateKind::Xor);
  else
    throw std::runtime_error("unknown netlist '" + what + "'");
  write_file(out_path, pneu::serialize_netlist(handle.netlist));
  return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"pneusim: switch-level simulator for vacuum-driven membrane-valve logic"};
  app.require_subcommand(1);

  std::string semantics = "chamber-vac";
  std::string conflict = "x";
  app.add_option("--semantics", semantics, "conduction semantics: chamber-vac|strict");
  app.add_option("--conflict", conflict, "conflict mode: x|vent|supply");

  auto* lint = app.add_subcommand("lint", "validate a .pnet netlist");
  std::string lint_path;
  lint->add_option("file", lint_path, "netlist file")->required();

  auto* sweep = app.add_subcommand("sweep", "run the 16-combination detector sweep");
  std::int64_t hold_ms = 15000;
  std::string sweep_out = "-";
  sweep->add_option("--hold-ms", hold_ms, "hold duration per combination");
  sweep->add_option("-o,--output", sweep_out, "output CSV (default stdout)");

  auto* scenario = app.add_subcommand("scenario", "replay a .pseq scenario on a netlist");
  std::string scen_netlist, scen_path, scen_out = "-";
  scenario->add_option("file", scen_path, "scenario file")->required();
  scenario->add_option("--netlist", scen_netlist, "netlist file")->required();
  scenario->add_option("-o,--output", scen_out, "trace CSV (default stdout)");

  auto* protocol = app.add_subcommand("protocol", "emit a checking schedule as .pseq");
  std::string proto_mode = "continuous";
  int proto_steps = 6;
  std::string proto_out = "-";
  protocol->add_option("--mode", proto_mode, "continuous|phased");
  protocol->add_option("--steps", proto_steps, "number of actuation steps");
  protocol->add_option("-o,--output", proto_out, "output file (default stdout)");

  auto* ipc = app.add_subcommand("ipc", "simulate the IPC case study");
  std::string ipc_mode = "continuous";
  std::vector<std::string> ipc_faults, ipc_clears;
  std::int64_t ipc_total = 0;
  std::string ipc_trace = "-", ipc_events;
  ipc->add_option("--mode", ipc_mode, "continuous|phased");
  ipc->add_option("--fault", ipc_faults, "fault spec, e.g. 'LEAK bit2 AS p1@30000'");
  ipc->add_option("--clear", ipc_clears, "clear spec, e.g. 'p1@60000'");
  ipc->add_option("--total-ms", ipc_total, "simulated duration");
  ipc->add_option("-o,--output", ipc_trace, "trace CSV (default stdout)");
  ipc->add_option("--events", ipc_events, "whistle transition CSV");

  auto* emit = app.add_subcommand("emit", "write a library netlist as .pnet");
  std::string emit_what = "detector";
  std::string emit_out = "-";
  emit->add_option("what", emit_what, "detector|and|or|xor");
  emit->add_option("-o,--output", emit_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    pneu::SimConfig cfg = make_config(semantics, conflict);
    if (lint->parsed())
      return cmd_lint(lint_path);
    if (sweep->parsed())
      return cmd_sweep(hold_ms, cfg, sweep_out);
    if (scenario->parsed())
      return cmd_scenario(scen_netlist, scen_path, cfg, scen_out);
    if (protocol->parsed())
      return cmd_protocol(proto_mode, proto_steps, pneu::PhaseConfig{}, proto_out);
    if (ipc->parsed())
      return cmd_ipc(ipc_mode, ipc_faults, ipc_clears, ipc_total, ipc_trace, ipc_events);
    if (emit->parsed())
      return cmd_emit(emit_what, emit_out);
  } catch (const std::exception& e) {
    std::cerr << "pneusim: " << e.what() << "\n";
    return kExitToolFailure;
  }
  return kExitToolFailure;
}
