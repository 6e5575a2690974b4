// Copyright 2026 The ltamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "ltamp_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const fs::path log = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" LTAMP_CLI "' " + args + " > '" +
                          log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream f(log);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json walk_step_json() { return json::parse(slurp(fs::path(LTAMP_SCENARIO_DIR) / "walk_step.json")); }

void write_scenario(const std::string& name, const json& j) {
  std::ofstream(workdir() / name) << j.dump(1);
}

}  // namespace

TEST_CASE("synth-task writes a deterministic automaton") {
  Result r = run("synth-task --out a1.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("realizable") != std::string::npos);
  REQUIRE(run("synth-task --out a2.json").code == 0);
  const std::string a = slurp(workdir() / "a1.json");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(workdir() / "a2.json"));
}

TEST_CASE("synth-task reports an unrealizable specification") {
  const Result r = run("synth-task --inject-contradiction --out bad.json");
  CHECK(r.code == 2);
  CHECK(r.out.find("unrealizable") != std::string::npos);
  CHECK_FALSE(fs::exists(workdir() / "bad.json"));
}

TEST_CASE("synth-reach then monte-carlo") {
  REQUIRE(run("synth-reach walk_step --out pol").code == 0);
  CHECK(fs::exists(workdir() / "pol" / "index.json"));
  const Result r = run("monte-carlo walk_step --policies pol --trials 6 --seed 3 --out mc");
  REQUIRE(r.code == 0);
  const json rep = json::parse(slurp(workdir() / "mc" / "report.json"));
  CHECK(rep["trials"] == 6);
  CHECK(rep["successes"] == 6);
  const std::string csv = slurp(workdir() / "mc" / "trials.csv");
  CHECK(csv.rfind("trial,seed,x0,vx0,outcome,reason,holds,x,vx,switches\n", 0) == 0);
  REQUIRE(run("monte-carlo walk_step --policies pol --trials 6 --seed 3 --out mc2").code == 0);
  CHECK(csv == slurp(workdir() / "mc2" / "trials.csv"));
}

TEST_CASE("error exit codes") {
  CHECK(run("monte-carlo walk_step --policies missing --out x").code == 1);
  CHECK(run("synth-reach no_such_scenario").code == 1);

  json zero = walk_step_json();
  zero["ows"]["margins"][1] = {0.05, 0.0};
  write_scenario("zero_margin.json", zero);
  const Result z = run("synth-reach zero_margin.json --out z");
  CHECK(z.code == 1);
  CHECK(z.out.find("margin") != std::string::npos);

  json back = walk_step_json();
  back["ows"]["initial"]["keyframe"] = {0.5, 0.6};
  back["ows"]["final"]["keyframe"] = {0.0, 0.5};
  write_scenario("backward.json", back);
  CHECK(run("synth-reach backward.json --out b").code == 3);

  CHECK(run("not-a-command").code != 0);
}

TEST_CASE("run-scenario writes logs and a summary") {
  REQUIRE(run("synth-task --out auto.json").code == 0);
  REQUIRE(run("run-scenario se1_violation --automaton auto.json --out se1").code == 0);
  const json s = json::parse(slurp(workdir() / "se1" / "summary.json"));
  CHECK(s["rejected"].size() == 1);
  CHECK(s["rejected"][0]["rule"] == "S_e-1");
  CHECK(s["trace_violations"] == 0);

  REQUIRE(run("run-scenario walk_step --trials 2 --out iv").code == 0);
  CHECK(fs::exists(workdir() / "iv" / "log.csv"));
  CHECK(fs::exists(workdir() / "iv" / "log.json"));
  CHECK(fs::exists(workdir() / "iv" / "polyline_0.csv"));
  CHECK(fs::exists(workdir() / "iv" / "polyline_1.csv"));
  const std::string first = slurp(workdir() / "iv" / "log.csv");
  REQUIRE(run("run-scenario walk_step --trials 2 --out iv2").code == 0);
  CHECK(first == slurp(workdir() / "iv2" / "log.csv"));
}
