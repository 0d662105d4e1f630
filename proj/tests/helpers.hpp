#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pneusim/netlist.hpp"

namespace pneu::test {

// Structural equality up to net-id renumbering: compare by names.
inline bool netlist_equivalent(const Netlist& a, const Netlist& b)
{
  auto names = [](const Netlist& nl) {
    std::set<std::string> out;
    for (NetId id : nl.live_nets())
      out.insert(nl.net_name(id));
    return out;
  };
  auto vents = [](const Netlist& nl) {
    std::set<std::string> out;
    for (NetId id : nl.vents())
      out.insert(nl.net_name(id));
    return out;
  };
  auto valves = [](const Netlist& nl) {
    std::map<std::string, std::tuple<std::string, std::string, std::string>> out;
    for (const auto& v : nl.valves())
      out[v.name] = {nl.net_name(v.chamber), nl.net_name(v.side1), nl.net_name(v.side2)};
    return out;
  };
  auto ports = [](const Netlist& nl) {
    std::map<std::string, std::pair<std::string, std::string>> out;
    for (const auto& p : nl.ports())
      out[p.name] = {nl.net_name(p.net), to_string(p.role)};
    return out;
  };
  auto vias = [](const Netlist& nl) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [x, y] : nl.via_merges())
      out.emplace_back(nl.net_name(x), nl.net_name(y));
    return out;
  };
  return names(a) == names(b) && vents(a) == vents(b) && valves(a) == valves(b) &&
         ports(a) == ports(b) && vias(a) == vias(b);
}

} // namespace pneu::test
