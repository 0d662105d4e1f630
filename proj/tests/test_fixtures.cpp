#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pneusim/dsl.hpp"
#include "pneusim/gates.hpp"
#include "pneusim/protocol.hpp"
#include "pneusim/sim.hpp"

using namespace pneu;

namespace {

std::string read_fixture(const std::string& name)
{
  std::ifstream in(std::string(PNEU_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing fixture ", name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("shipped detector netlist matches the library output byte for byte")
{
  GateHandle d = build_parity_detector();
  CHECK(read_fixture("detector.pnet") == serialize_netlist(d.netlist));
}

TEST_CASE("shipped sweep scenario matches the generator byte for byte")
{
  PhaseConfig cfg;
  auto sweep = fig4_sweep(cfg, 15000);
  CHECK(read_fixture("fig4_sweep.pseq") == serialize_scenario(sweep));
}

TEST_CASE("sweep trace matches the golden CSV")
{
  auto nl = parse_netlist(read_fixture("detector.pnet"));
  REQUIRE(parse_ok(nl));
  auto sweep = parse_scenario(read_fixture("fig4_sweep.pseq"));
  REQUIRE(parse_ok(sweep));
  Trace trace = run_events(std::get<Netlist>(nl),
                           std::get<std::vector<ScenarioEvent>>(sweep), SimConfig{});
  REQUIRE(!trace.aborted());
  CHECK(trace_to_csv(trace) == read_fixture("fig4_sweep_trace.csv"));
}
