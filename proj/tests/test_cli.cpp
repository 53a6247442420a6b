#include "doctest.h"

#include "torf/cli.hpp"
#include "torf/model.hpp"

#include <json.hpp>

#include <sstream>

using namespace torf;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return write_model(fixture(name)); }

json machine(std::vector<std::string> args, const std::string& input) {
  args.push_back("--format");
  args.push_back("machine");
  Run r = run(args, input);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("exit codes") {
  CHECK(run({"validate"}, model("pinch")).code == 0);
  CHECK(run({"validate"}, "{\"schema\": \"torf-model/1\", \"colour\": 1}").code == 1);
  CHECK(run({"validate"}, "not json").code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"validate", "/nonexistent/model.json"}).code == 1);
  CHECK(run({"fixtures", "no-such-fixture"}).code == 1);
  CHECK(run({"germ"}, model("affine-2")).code == 1);
  CHECK(run({"betti", "--pair", "nope"}, model("affine-2")).code == 1);
  CHECK(run({"betti"}, model("numeric-semigroup-2-3")).code == 2);
  CHECK(run({"--help"}).code == 0);

  for (const auto& name : broken_fixture_names()) {
    CAPTURE(name);
    Run r = run({"validate", "--format", "machine"}, model(name));
    CHECK(r.code == 2);
    json j = json::parse(r.out);
    CHECK(j["results"]["valid"] == false);
    CHECK(j["error"]["witness"].is_array());
    Run h = run({"validate"}, model(name));
    CHECK(h.out.find("witness:") != std::string::npos);
  }
  Run o = run({"validate", "--format", "machine"}, model("broken-overlap"));
  CHECK(json::parse(o.out)["error"]["kind"] == "BadIntersection");

  // a degree bound too small for the generators is an internal postcondition failure
  CHECK(run({"normalize", "--mode", "wn", "--char", "2", "--degree-bound", "1"}, model("power-5-extension")).code == 3);
}

TEST_CASE("reports are deterministic") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    std::string text = model(name);
    for (const char* cmd : {"validate", "classify", "orbits"}) {
      Run a = run({cmd, "--format", "machine"}, text);
      Run b = run({cmd, "--format", "machine"}, text);
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
    }
  }
  Run a = run({"betti", "--box", "3", "--format", "machine"}, model("normal-crossings-2-2"));
  Run b = run({"betti", "--box", "3", "--format", "machine"}, model("normal-crossings-2-2"));
  CHECK(a.out == b.out);
}

TEST_CASE("command results") {
  json c = machine({"classify"}, model("pinch"));
  CHECK(c["results"]["seminormal"] == true);
  for (const auto& row : c["results"]["weakly_normal"]) CHECK(row["weakly_normal"] == (row["char"] != 2));

  json n = machine({"normalize", "--mode", "wn", "--char", "2"}, model("pinch"));
  CHECK(n["results"]["already_normal"] == false);
  CHECK(n["results"]["cones"].back()["generators"] == json::parse(R"([["0","1"],["1","0"]])"));
  CHECK(machine({"normalize", "--mode", "sn"}, model("affine-2"))["results"]["already_normal"] == true);
  json ns = machine({"normalize", "--mode", "sn"}, model("numeric-semigroup-2-3"));
  CHECK(ns["results"]["cones"].back()["generators"] == json::parse(R"([["1"]])"));
  json rel = machine({"normalize"}, model("power-d-extension"));
  CHECK(rel["results"]["relative"]["generators"] == json::parse(R"([["3"]])"));

  CHECK(machine({"betti"}, model("torus-2"))["results"]["betti"] == json::parse("[1,2,1]"));
  CHECK(machine({"betti", "--box", "4", "--pair", "axes"}, model("affine-2"))["results"]["betti"] ==
        json::parse("[0,0,0]"));
  CHECK(run({"betti", "--box", "2", "--theoretical"}, model("torus-1")).code == 1);

  json g = machine({"germ", "--cone", "F1"}, model("affine-2"));
  CHECK(g["results"]["cones"].size() == 2);
  CHECK(g["results"]["cones"].back()["monoid"] == json::parse(R"([["0","-1"],["0","1"],["1","0"]])"));

  json o = machine({"orbits"}, model("axes-cross"));
  CHECK(o["results"]["orbits"].size() == 5);

  json f = machine({"forms", "--p", "1", "--box", "2"}, model("affine-2"));
  for (const auto& r : f["results"]["degrees"]) CHECK(r["dim"] == r["open_cone_sum"]);
  CHECK(f["results"]["computed_on"] == "input");
  CHECK(machine({"forms"}, model("numeric-semigroup-2-3"))["results"]["computed_on"] == "weak normalization");
}

TEST_CASE("fixtures command") {
  Run list = run({"fixtures"});
  CHECK(list.code == 0);
  for (const auto& name : fixture_names()) CHECK(list.out.find(name + "\n") != std::string::npos);
  for (const auto& name : fixture_names()) {
    Run r = run({"fixtures", name});
    REQUIRE(r.code == 0);
    CHECK(run({"validate"}, r.out).code == 0);
  }
}
