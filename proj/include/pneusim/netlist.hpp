#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pneusim/pressure.hpp"

namespace pneu {

// Identifier of a net within one Netlist. Stable across via merges: a merged
// net keeps its id but resolves to the canonical representative.
struct NetId {
  std::uint32_t value = 0;

  friend bool operator==(NetId a, NetId b) { return a.value == b.value; }
  friend bool operator!=(NetId a, NetId b) { return a.value != b.value; }
  friend bool operator<(NetId a, NetId b) { return a.value < b.value; }
};

// A monolithic membrane valve: the membrane separates the chamber from the
// gap between the two channel sides. Vacuum in the chamber lifts the
// membrane and lets air pass between side1 and side2.
struct Valve {
  std::string name;
  NetId chamber;
  NetId side1;
  NetId side2;
};

enum class PortRole : std::uint8_t {
  ControlBit,
  ExpectedParity,
  PowerVac,
  Reset,
  ErrorOut,
  GenericIn,
  GenericOut,
};

std::string to_string(PortRole role);
std::optional<PortRole> port_role_from_string(const std::string& s);

// Output roles are observation points; everything else may be driven by a
// solenoid (and defaults to atmosphere when not driven).
constexpr bool is_drivable(PortRole role)
{
  return role != PortRole::ErrorOut && role != PortRole::GenericOut;
}

struct Port {
  std::string name;
  NetId net;
  PortRole role;
};

struct ValidationIssue {
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool clean() const { return errors.empty() && warnings.empty(); }
};

struct Budget {
  std::size_t valves = 0;
  std::size_t vents = 0;
  std::size_t vias = 0;
};

class NetlistError : public std::runtime_error {
public:
  explicit NetlistError(const std::string& what) : std::runtime_error(what) {}
};

// Structural model of a pneumatic circuit: nets, valves, vents, ports and
// the record of via merges. Nets are append-only; merge_via marks the losing
// net dead and rewrites all references, so NetId values stay valid.
class Netlist {
public:
  NetId add_net(const std::string& name);
  void add_valve(const std::string& name, NetId chamber, NetId side1, NetId side2);
  void add_vent(NetId net);
  void add_port(const std::string& name, NetId net, PortRole role);

  // Rewrites every reference to `b` onto `a` and records the pair.
  void merge_via(NetId a, NetId b);

  // Surgical edits used by fault injection; no via record is kept.
  void rebind_port(const std::string& name, NetId net);
  void remove_vent(NetId net);
  void kill_net(NetId net); // net must be unreferenced

  std::optional<NetId> find_net(const std::string& name) const;
  std::optional<NetId> find_net_alive(const std::string& name) const;
  const Port* find_port(const std::string& name) const;
  const Valve* find_valve(const std::string& name) const;

  const std::string& net_name(NetId id) const { return nets_.at(id.value).name; }
  bool net_alive(NetId id) const { return nets_.at(id.value).alive; }
  bool is_vent(NetId id) const;

  // Number of live nets (merged-away nets excluded).
  std::size_t net_count() const;
  // Upper bound for indexing per-net arrays by NetId::value.
  std::size_t net_capacity() const { return nets_.size(); }

  std::vector<NetId> live_nets() const;

  const std::vector<Valve>& valves() const { return valves_; }
  const std::vector<NetId>& vents() const { return vents_; }
  const std::vector<Port>& ports() const { return ports_; }
  const std::vector<std::pair<NetId, NetId>>& via_merges() const { return via_merges_; }

  Budget budget() const;
  ValidationReport validate() const;

private:
  struct Net {
    std::string name;
    bool alive = true;
  };

  void check_exists(NetId id) const;

  std::vector<Net> nets_;
  std::vector<Valve> valves_;
  std::vector<NetId> vents_;
  std::vector<Port> ports_;
  std::vector<std::pair<NetId, NetId>> via_merges_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

} // namespace pneu
