// Copyright 2026 The lgtstator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "lgt/oracle.hpp"
#include "lgt/scenario.hpp"

using namespace lgt;
namespace fs = std::filesystem;

namespace {

const char* kPlaquette =
    "group = Z3\n"
    "lattice = 2x2\n"
    "state = random_gauge_invariant\n"
    "seed = 3\n"
    "crosscheck = true\n"
    "\n"
    "[request p]\n"
    "kind = wilson\n"
    "loop = rect:(0,0,1,1)\n"
    "\n"
    "[request m]\n"
    "kind = meson\n"
    "path = auto:(0,0)->(1,1)\n"
    "which = M'\n"
    "\n"
    "[request s]\n"
    "kind = meson\n"
    "path = auto:(1,0)->(0,1)\n"
    "which = string\n"
    "mode = excite\n";

void expect_error(const std::string& text, std::size_t line, std::size_t column, const std::string& fragment) {
  CAPTURE(text);
  try {
    (void)parse_scenario(text);
  } catch (const ConfigError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    return;
  }
  FAIL("accepted");
}

std::string strip_timing(const std::string& json) {
  return std::regex_replace(json, std::regex("\"wall_seconds\": [0-9.eE+-]+"), "\"wall_seconds\": 0");
}

int run_tool(const std::string& args) {
  const char* tool = std::getenv("LGTSIM");
  REQUIRE_MESSAGE(tool != nullptr, "LGTSIM is not set");
  const int status = std::system((std::string(tool) + " " + args + " > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("lgt_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto c = parse_scenario(kPlaquette);
  CHECK(c.group == "Z3");
  CHECK(c.lx == 2);
  CHECK(c.state == StateKind::RandomGaugeInvariant);
  CHECK(c.seed == 3);
  CHECK(c.crosscheck);
  REQUIRE(c.requests.size() == 3);
  CHECK(c.requests[1].which == MesonOperator::MPrime);
  CHECK(c.requests[2].mode == ProtocolMode::Excite);
  CHECK(c.requests[2].line == 16);

  const auto p = parse_scenario(
      "group = S3\nlattice = 2x1\nlinks = e\nlink.(0,0,1) = 3\noccupied = (1,0,1);(0,0)\n"
      "lambda_gm = 0.25\nlambda_gm.(0,0,1) = 2\n[request h]\nkind = hamiltonian\n");
  CHECK(p.state == StateKind::Product);
  CHECK(p.product.links.at(Link{{0, 0}, 1}).element == 3);
  CHECK(p.product.occupied.count({Vertex{1, 0}, 1}) == 1);
  CHECK(p.product.occupied.count({Vertex{0, 0}, 0}) == 1);
  CHECK(p.couplings.gauge_matter(Link{{0, 0}, 1}) == 2.0);
}

TEST_CASE("configuration errors carry line and column") {
  expect_error("group = Z2\nlattice = 2y2\n", 2, 11, "lattice");
  expect_error("group = Z2\ncolour = red\n", 2, 1, "unknown key 'colour'");
  expect_error("group = Z2\ngroup = Z3\n", 2, 1, "duplicate key 'group'");
  expect_error("group = Z2\n[request a]\nkind = wilson\n", 2, 1, "needs 'loop'");
  expect_error("[request a]\nkind = wilson\nloop = rect:(0,0,1,1)\n[request a]\n", 4, 10, "duplicate request id");
  expect_error("group = Z2\njust words\n", 2, 1, "expected 'key = value'");
  expect_error("[request a]\nkind = hamiltonian\nmode = excite\n", 1, 1, "only measure");
  expect_error("[request a]\nkind = wilson\nloop = rect:(0,0,1,1)\nupdate_state = true\n", 1, 1,
               "update_state needs mode = excite");
  expect_error("lattice = 2x2\nlink.(5,5,1) = 1\n", 2, 6, "not on the lattice");
}

TEST_CASE("oversized systems are refused before allocation") {
  auto c = parse_scenario("group = S3\nlattice = 3x3\n[request p]\nkind = wilson\nloop = rect:(0,0,1,1)\n");
  try {
    (void)run_scenario(c);
    FAIL("ran");
  } catch (const DimensionError& e) {
    // The protocols need the ancilla qudit and chi pair on top of 6^12 * 2^18.
    CHECK(e.required() == 570630428688384.0L * 6 * 4);
    CHECK(std::string(e.what()).find("with ancilla exceeds the allowed 16777216") != std::string::npos);
  }
  try {
    (void)build_layout(FiniteGroup::symmetric3(), Lattice(3, 3), false);
    FAIL("allocated");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("570630428688384") != std::string::npos);
  }
}

TEST_CASE("reports are deterministic apart from timing") {
  const auto c = parse_scenario(kPlaquette);
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  CHECK(a.all_passed());
  CHECK(strip_timing(report_json(a)) == strip_timing(report_json(b)));
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].value == b.records[k].value);
  }
  RunOptions other;
  other.seed = 4;
  CHECK(run_scenario(c, other).records[0].value != a.records[0].value);

  RunOptions parallel;
  parallel.parallel = true;
  const auto p = run_scenario(c, parallel);
  for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(p.records[k].value == a.records[k].value);
}

TEST_CASE("report contents") {
  const auto r = run_scenario(parse_scenario(kPlaquette));
  const std::string json = report_json(r);
  CHECK(json.find("\"all_passed\": true") != std::string::npos);
  CHECK(json.find("\"id\": \"m\"") != std::string::npos);
  const std::string csv = report_csv(r);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "id,kind,spec,mode,which,value_re,value_im,oracle_re,oracle_im,abs_diff,norm,ancilla_overlap,"
        "gate_count,wall_seconds,passed");
  std::size_t rows = 0;
  for (std::string row; std::getline(lines, row);) ++rows;
  CHECK(rows == 3);
  // The excitation record carries the ancilla overlap.
  REQUIRE(r.records[2].ancilla_overlap);
  CHECK(*r.records[2].ancilla_overlap > 1.0 - 1e-12);
}

TEST_CASE("exported schedules reproduce the request") {
  const auto c = parse_scenario(kPlaquette);
  const auto report = run_scenario(c);
  for (const char* id : {"p", "m"}) {
    CAPTURE(id);
    const auto schedule = parse_schedule(format_schedule(export_schedule(c, id)));
    check_locality(schedule, Lattice(c.lx, c.ly, c.boundary));
    const auto run = run_schedule(c, schedule);
    REQUIRE(run.readouts.size() == 1);
    const auto& rec = id == std::string("p") ? report.records[0] : report.records[1];
    CHECK(std::abs(run.readouts[0] - rec.value) < 1e-12);
  }
  CHECK_THROWS((void)export_schedule(c, "missing"));
}

TEST_CASE("excitation with update_state feeds later requests") {
  const auto c = parse_scenario(
      "group = Z2\nlattice = 2x1\nlinks = e\noccupied = (1,0)\ncrosscheck = true\n"
      "[request hop]\nkind = meson\npath = auto:(0,0)->(1,0)\nwhich = string\nmode = excite\n"
      "update_state = true\n"
      "[request after]\nkind = meson\npath = auto:(0,0)->(1,0)\nwhich = M\n");
  const auto r = run_scenario(c);
  REQUIRE(r.records.size() == 2);
  // The string moves the fermion from (1,0) to (0,0).
  CHECK(std::abs(r.records[0].norm - 1.0) < 1e-12);
  CHECK(std::abs(r.records[1].value) < 1e-12);
  CHECK(r.all_passed());
}

TEST_CASE("command-line tool") {
  const auto good = scratch("good.cfg", kPlaquette);
  CHECK(run_tool("--config " + good.string()) == 0);
  CHECK(run_tool("--config " + good.string() + " --format csv") == 0);
  CHECK(run_tool("--selftest") == 0);
  // A bound below rounding error turns every cross-check into a mismatch.
  const char* dir = std::getenv("LGT_CONFIG_DIR");
  REQUIRE(dir != nullptr);
  CHECK(run_tool("--config " + (fs::path(dir) / "s3_plaquette.cfg").string() + " --tolerance 1e-300") == 1);

  const auto bad = scratch("bad.cfg", "group = Z9x\n");
  CHECK(run_tool("--config " + bad.string()) == 2);
  CHECK(run_tool("--config /nonexistent/file.cfg") == 2);
  CHECK(run_tool("") == 2);
  CHECK(run_tool("--format xml --config " + good.string()) == 2);

  const fs::path sched = fs::temp_directory_path() / ("lgt_test_" + std::to_string(::getpid()) + ".sched");
  CHECK(run_tool("--config " + good.string() + " --export-schedule p --out " + sched.string()) == 0);
  CHECK(fs::exists(sched));
  CHECK(run_tool("--config " + good.string() + " --run-schedule " + sched.string()) == 0);

  for (const auto& f : fs::directory_iterator(dir)) {
    CAPTURE(f.path().string());
    CHECK(run_tool("--config " + f.path().string()) == 0);
  }
  fs::remove(good);
  fs::remove(bad);
  fs::remove(sched);
}
