#include "pneusim/netlist.hpp"

#include <algorithm>
#include <set>

namespace pneu {

std::string to_string(PortRole role)
{
  switch (role) {
  case PortRole::ControlBit: return "CONTROL_BIT";
  case PortRole::ExpectedParity: return "EXPECTED_PARITY";
  case PortRole::PowerVac: return "POWER_VAC";
  case PortRole::Reset: return "RESET";
  case PortRole::ErrorOut: return "ERROR_OUT";
  case PortRole::GenericIn: return "GENERIC_IN";
  default: return "GENERIC_OUT";
  }
}

std::optional<PortRole> port_role_from_string(const std::string& s)
{
  if (s == "CONTROL_BIT") return PortRole::ControlBit;
  if (s == "EXPECTED_PARITY") return PortRole::ExpectedParity;
  if (s == "POWER_VAC") return PortRole::PowerVac;
  if (s == "RESET") return PortRole::Reset;
  if (s == "ERROR_OUT") return PortRole::ErrorOut;
  if (s == "GENERIC_IN") return PortRole::GenericIn;
  if (s == "GENERIC_OUT") return PortRole::GenericOut;
  return std::nullopt;
}

NetId Netlist::add_net(const std::string& name)
{
  if (by_name_.count(name))
    throw NetlistError("duplicate net name: " + name);
  NetId id{static_cast<std::uint32_t>(nets_.size())};
  nets_.push_back(Net{name, true});
  by_name_.emplace(name, id.value);
  return id;
}

void Netlist::check_exists(NetId id) const
{
  if (id.value >= nets_.size())
    throw NetlistError("net id out of range");
  if (!nets_[id.value].alive)
    throw NetlistError("net '" + nets_[id.value].name + "' was merged away");
}

void Netlist::add_valve(const std::string& name, NetId chamber, NetId side1, NetId side2)
{
  check_exists(chamber);
  check_exists(side1);
  check_exists(side2);
  if (chamber == side1 || chamber == side2)
    throw NetlistError("valve '" + name + "': chamber may not be a channel side");
  if (find_valve(name))
    throw NetlistError("duplicate valve name: " + name);
  valves_.push_back(Valve{name, chamber, side1, side2});
}

void Netlist::add_vent(NetId net)
{
  check_exists(net);
  if (!is_vent(net))
    vents_.push_back(net);
}

void Netlist::add_port(const std::string& name, NetId net, PortRole role)
{
  check_exists(net);
  if (find_port(name))
    throw NetlistError("duplicate port name: " + name);
  ports_.push_back(Port{name, net, role});
}

void Netlist::merge_via(NetId a, NetId b)
{
  check_exists(a);
  check_exists(b);
  if (a == b)
    throw NetlistError("self-merge of net '" + net_name(a) + "'");

  for (auto& v : valves_) {
    if (v.chamber == b) v.chamber = a;
    if (v.side1 == b) v.side1 = a;
    if (v.side2 == b) v.side2 = a;
  }
  for (auto& p : ports_) {
    if (p.net == b) p.net = a;
  }
  bool a_vented = is_vent(a);
  for (auto& n : vents_) {
    if (n == b) n = a;
  }
  if (a_vented) {
    // drop a duplicate vent entry created by the rewrite
    auto it = std::find(vents_.begin(), vents_.end(), a);
    if (it != vents_.end()) {
      auto dup = std::find(it + 1, vents_.end(), a);
      if (dup != vents_.end())
        vents_.erase(dup);
    }
  }
  nets_[b.value].alive = false;
  via_merges_.emplace_back(a, b);
}

void Netlist::rebind_port(const std::string& name, NetId net)
{
  check_exists(net);
  for (auto& p : ports_) {
    if (p.name == name) {
      p.net = net;
      return;
    }
  }
  throw NetlistError("unknown port: " + name);
}

void Netlist::remove_vent(NetId net)
{
  auto it = std::find(vents_.begin(), vents_.end(), net);
  if (it == vents_.end())
    throw NetlistError("net '" + net_name(net) + "' is not a vent");
  vents_.erase(it);
}

void Netlist::kill_net(NetId net)
{
  check_exists(net);
  for (const auto& v : valves_)
    if (v.chamber == net || v.side1 == net || v.side2 == net)
      throw NetlistError("net '" + net_name(net) + "' is still referenced by a valve");
  for (const auto& p : ports_)
    if (p.net == net)
      throw NetlistError("net '" + net_name(net) + "' is still referenced by a port");
  if (is_vent(net))
    throw NetlistError("net '" + net_name(net) + "' is still a vent");
  nets_[net.value].alive = false;
}

std::optional<NetId> Netlist::find_net(const std::string& name) const
{
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    return std::nullopt;
  return NetId{it->second};
}

std::optional<NetId> Netlist::find_net_alive(const std::string& name) const
{
  auto id = find_net(name);
  if (id && nets_[id->value].alive)
    return id;
  return std::nullopt;
}

const Port* Netlist::find_port(const std::string& name) const
{
  for (const auto& p : ports_)
    if (p.name == name)
      return &p;
  return nullptr;
}

const Valve* Netlist::find_valve(const std::string& name) const
{
  for (const auto& v : valves_)
    if (v.name == name)
      return &v;
  return nullptr;
}

bool Netlist::is_vent(NetId id) const
{
  return std::find(vents_.begin(), vents_.end(), id) != vents_.end();
}

std::size_t Netlist::net_count() const
{
  std::size_t n = 0;
  for (const auto& net : nets_)
    if (net.alive)
      ++n;
  return n;
}

std::vector<NetId> Netlist::live_nets() const
{
  std::vector<NetId> out;
  for (std::uint32_t i = 0; i < nets_.size(); ++i)
    if (nets_[i].alive)
      out.push_back(NetId{i});
  return out;
}

Budget Netlist::budget() const
{
  return Budget{valves_.size(), vents_.size(), via_merges_.size()};
}

ValidationReport Netlist::validate() const
{
  ValidationReport report;
  auto err = [&](const std::string& m) { report.errors.push_back({m}); };
  auto warn = [&](const std::string& m) { report.warnings.push_back({m}); };

  auto live = [&](NetId id) { return id.value < nets_.size() && nets_[id.value].alive; };

  std::set<std::uint32_t> connected;
  for (const auto& v : valves_) {
    for (NetId id : {v.chamber, v.side1, v.side2}) {
      if (!live(id))
        err("valve '" + v.name + "' references unknown net");
      else
        connected.insert(id.value);
    }
    if (v.side1 == v.side2)
      warn("degenerate valve '" + v.name + "' (side1 = side2)");
  }
  for (NetId n : vents_) {
    if (!live(n))
      err("vent references unknown net");
    else
      connected.insert(n.value);
  }
  std::set<std::string> port_names;
  for (const auto& p : ports_) {
    if (!live(p.net))
      err("port '" + p.name + "' references unknown net");
    else
      connected.insert(p.net.value);
    if (!port_names.insert(p.name).second)
      err("duplicate port name '" + p.name + "'");
    if (p.role == PortRole::PowerVac && live(p.net) && is_vent(p.net))
      err("net '" + net_name(p.net) + "' is both a vent and a POWER_VAC port net");
    if (is_drivable(p.role) && p.role != PortRole::PowerVac && live(p.net) && is_vent(p.net))
      warn("undrivable input port '" + p.name + "' (net is vented)");
  }
  for (std::uint32_t i = 0; i < nets_.size(); ++i) {
    if (nets_[i].alive && !connected.count(i))
      warn("net '" + nets_[i].name + "' has no connections");
  }
  return report;
}

} // namespace pneu
