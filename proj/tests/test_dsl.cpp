#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pneusim/dsl.hpp"
#include "pneusim/gates.hpp"

using namespace pneu;

TEST_CASE("basic netlist parses")
{
  auto r = parse_netlist("NET a\nNET b\nNET c\nVALVE A CHAMBER a SIDES b c\n");
  REQUIRE(parse_ok(r));
  const Netlist& nl = std::get<Netlist>(r);
  CHECK(nl.net_count() == 3);
  CHECK(nl.valves().size() == 1);
  CHECK(nl.validate().ok());
}

TEST_CASE("missing valve side is a parse error at the right line")
{
  auto r = parse_netlist("VALVE A CHAMBER a SIDES b\n");
  REQUIRE(!parse_ok(r));
  CHECK(std::get<ParseError>(r).span.line == 1);
}

TEST_CASE("undeclared net is a parse error")
{
  auto r = parse_netlist("NET a\nNET b\nVALVE A CHAMBER a SIDES b n9\n");
  REQUIRE(!parse_ok(r));
  auto e = std::get<ParseError>(r);
  CHECK(e.span.line == 3);
  CHECK(e.message.find("unknown net 'n9'") != std::string::npos);
}

TEST_CASE("duplicate names rejected")
{
  CHECK(!parse_ok(parse_netlist("NET a\nNET a\n")));
  CHECK(!parse_ok(parse_netlist("NET a\nNET b\nNET c\nVALVE A CHAMBER a SIDES b c\n"
                                "VALVE A CHAMBER a SIDES b c\n")));
}

TEST_CASE("malformed role rejected")
{
  auto r = parse_netlist("NET a\nPORT p a ROLE SUPER_INPUT\n");
  REQUIRE(!parse_ok(r));
  CHECK(std::get<ParseError>(r).message.find("malformed role") != std::string::npos);
}

TEST_CASE("comments and blank lines ignored")
{
  auto r = parse_netlist("# circuit\n\nNET a # trailing\n   \nVENT a\n");
  REQUIRE(parse_ok(r));
  CHECK(std::get<Netlist>(r).vents().size() == 1);
}

TEST_CASE("via line merges and records")
{
  auto r = parse_netlist("NET a\nNET b\nVIA a b\n");
  REQUIRE(parse_ok(r));
  const Netlist& nl = std::get<Netlist>(r);
  CHECK(nl.net_count() == 1);
  CHECK(nl.via_merges().size() == 1);
  CHECK(!parse_ok(parse_netlist("NET a\nVIA a a\n")));
}

TEST_CASE("empty netlist serializes to header only")
{
  Netlist nl;
  CHECK(serialize_netlist(nl) == "# pneusim netlist\n");
}

TEST_CASE("serialize emits via lines that reproduce the merge")
{
  Netlist nl;
  NetId a = nl.add_net("a");
  NetId b = nl.add_net("b");
  nl.add_vent(a);
  nl.merge_via(a, b);
  std::string text = serialize_netlist(nl);
  CHECK(text.find("VIA a b") != std::string::npos);
  auto r = parse_netlist(text);
  REQUIRE(parse_ok(r));
  CHECK(test::netlist_equivalent(nl, std::get<Netlist>(r)));
}

TEST_CASE("gate netlists round-trip and reserialize byte-identically")
{
  for (GateKind kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
    GateHandle g = build_gate(kind);
    std::string text = serialize_netlist(g.netlist);
    auto r = parse_netlist(text);
    REQUIRE(parse_ok(r));
    const Netlist& reparsed = std::get<Netlist>(r);
    CHECK(test::netlist_equivalent(g.netlist, reparsed));
    CHECK(serialize_netlist(reparsed) == text);
  }
}

TEST_CASE("detector round-trips")
{
  GateHandle d = build_parity_detector();
  std::string text = serialize_netlist(d.netlist);
  auto r = parse_netlist(text);
  REQUIRE(parse_ok(r));
  CHECK(test::netlist_equivalent(d.netlist, std::get<Netlist>(r)));
  CHECK(std::get<Netlist>(r).valves().size() == 21);
  CHECK(std::get<Netlist>(r).validate().ok());
}

TEST_CASE("random gate compositions round-trip")
{
  std::mt19937 rng(20240811u);
  for (int trial = 0; trial < 100; ++trial) {
    Netlist nl;
    // splice a few gates together under fresh prefixes
    int gates = 1 + static_cast<int>(rng() % 3);
    std::vector<NetId> outs;
    for (int g = 0; g < gates; ++g) {
      std::string prefix = "u" + std::to_string(trial) + "_" + std::to_string(g) + "_";
      GateHandle gate = build_gate(static_cast<GateKind>(rng() % 3));
      // re-create the gate into nl under the prefix via its serialized form
      std::string text = serialize_netlist(gate.netlist);
      // prefix every identifier by rebuilding structurally
      const Netlist& src = gate.netlist;
      for (NetId id : src.live_nets())
        nl.add_net(prefix + src.net_name(id));
      for (NetId id : src.vents())
        nl.add_vent(*nl.find_net_alive(prefix + src.net_name(id)));
      for (const auto& v : src.valves())
        nl.add_valve(prefix + v.name, *nl.find_net_alive(prefix + src.net_name(v.chamber)),
                     *nl.find_net_alive(prefix + src.net_name(v.side1)),
                     *nl.find_net_alive(prefix + src.net_name(v.side2)));
      for (const auto& p : src.ports())
        nl.add_port(prefix + p.name, *nl.find_net_alive(prefix + src.net_name(p.net)),
                    p.role);
      outs.push_back(*nl.find_net_alive(prefix + "out"));
    }
    // random chain merges between gate outputs and inputs
    for (std::size_t g = 1; g < outs.size(); ++g) {
      if (rng() % 2) {
        std::string prefix = "u" + std::to_string(trial) + "_" + std::to_string(g) + "_";
        auto in = nl.find_net_alive(prefix + "in_a");
        if (in)
          nl.merge_via(outs[g - 1], *in);
      }
    }

    std::string text = serialize_netlist(nl);
    auto r = parse_netlist(text);
    REQUIRE(parse_ok(r));
    CHECK(test::netlist_equivalent(nl, std::get<Netlist>(r)));
    CHECK(serialize_netlist(std::get<Netlist>(r)) == text);
  }
}

TEST_CASE("parser survives fuzz input")
{
  std::mt19937 rng(987654321u);
  const std::string alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 _#\t-";
  const std::vector<std::string> seeds = {"NET",  "VALVE", "CHAMBER", "SIDES", "VENT",
                                          "PORT", "ROLE",  "VIA",     "AT",    "SET"};
  for (int i = 0; i < 10000; ++i) {
    std::string line;
    if (rng() % 3 == 0)
      line = seeds[rng() % seeds.size()] + " ";
    std::size_t len = rng() % 40;
    for (std::size_t j = 0; j < len; ++j)
      line += alphabet[rng() % alphabet.size()];
    auto r1 = parse_netlist(line);
    auto r2 = parse_scenario(line);
    (void)r1;
    (void)r2;
  }
  CHECK(true); // reaching here without a crash is the property
}

TEST_CASE("scenario events parse and sort")
{
  auto r = parse_scenario("AT 500 SET bit2 ATM\nAT 0 SET bit1 VAC\nAT 500 CHECKPOINT mid\n");
  REQUIRE(parse_ok(r));
  const auto& events = std::get<std::vector<ScenarioEvent>>(r);
  REQUIRE(events.size() == 3);
  CHECK(events[0].time_ms == 0);
  CHECK(events[1].time_ms == 500);
  CHECK(std::holds_alternative<SetDriveAction>(events[1].action));
  CHECK(std::holds_alternative<CheckpointAction>(events[2].action));
}

TEST_CASE("negative time is a parse error")
{
  auto r = parse_scenario("AT -5 SET bit1 VAC\n");
  REQUIRE(!parse_ok(r));
}

TEST_CASE("fault grammar round-trips")
{
  std::string text = "AT 10 FAULT LEAK bit2 AS l1\n"
                     "AT 20 FAULT CUT bit3 DISTAL bellows3 AS c1\n"
                     "AT 30 FAULT STUCK_VALVE A CLOSED AS s1\n"
                     "AT 40 FAULT STUCK_BIT bit1 VAC AS s2\n"
                     "AT 50 CLEAR c1\n";
  auto r = parse_scenario(text);
  REQUIRE(parse_ok(r));
  const auto& events = std::get<std::vector<ScenarioEvent>>(r);
  REQUIRE(events.size() == 5);
  std::string again = serialize_scenario(events);
  auto r2 = parse_scenario(again);
  REQUIRE(parse_ok(r2));
  CHECK(serialize_scenario(std::get<std::vector<ScenarioEvent>>(r2)) == again);
}

TEST_CASE("scenario event order is deterministic for equal timestamps")
{
  auto r = parse_scenario("AT 100 SET a VAC\nAT 100 SET b VAC\nAT 100 SET c VAC\n");
  REQUIRE(parse_ok(r));
  const auto& events = std::get<std::vector<ScenarioEvent>>(r);
  CHECK(std::get<SetDriveAction>(events[0].action).port == "a");
  CHECK(std::get<SetDriveAction>(events[1].action).port == "b");
  CHECK(std::get<SetDriveAction>(events[2].action).port == "c");
}
