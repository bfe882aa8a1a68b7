#include "aalg/cli.hpp"

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

using namespace aalg;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args, int expected = 0) {
  args.insert(args.begin(), "--json");
  Run r = run(args);
  CHECK(r.code == expected);
  return Json::parse(r.out);
}

std::string example(const std::string& name) { return std::string(AALG_EXAMPLES_DIR) + "/" + name; }

const Json& row(const Json& report, const std::string& property) {
  for (const auto& r : report["results"])
    if (r["property"] == property) return r;
  throw std::runtime_error("missing property " + property);
}

}  // namespace

TEST_CASE("b2 with the primed metric is LCB and not balanced") {
  Json r = run_json({"check", example("b2.alg"), "--property", "lcb"});
  CHECK(r["schema"] == kReportSchema);
  CHECK(row(r, "lcb")["direct"] == true);
  CHECK(row(r, "lcb")["data"] == true);
  Json all = run_json({"check", example("b2.alg")});
  CHECK(row(all, "balanced")["direct"] == false);
  CHECK(row(all, "balanced")["data"] == false);
  CHECK(row(all, "vaisman")["data"].is_null());
  for (const auto& x : all["results"])
    if (x["agree"].is_boolean()) CHECK(x["agree"] == true);
}

TEST_CASE("the identity D is LCHK-admissible with a = 1") {
  Json r = run_json({"lchk", "--matrix", "id3"});
  CHECK(r["admissible"] == true);
  CHECK(r["a"] == "1");
  CHECK(r["hyperkahler"] == false);
  Json w = run_json({"lchk", "--matrix", "id7", "--witness"});
  CHECK(w["witness"]["checks_pass"] == true);
  Json z = run_json({"lchk", "--matrix", "[[0, 0, 0], [0, 0, 0], [0, 0, 0]]"});
  CHECK(z["hyperkahler"] == true);
  Json bad = run_json({"lchk", "--matrix", "[[1, 0, 0], [0, 2, 0], [0, 0, 1]]"}, 2);
  CHECK(bad["admissible"] == false);
  CHECK(bad["a"].is_null());
  CHECK_FALSE(bad["diagnostics"].empty());
  Json fl = run_json({"lchk", "--matrix", "[[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]]"});
  CHECK(fl["kernel"] == "float");
}

TEST_CASE("catalog verify on l14 passes with unimodularity at p = 0") {
  Json r = run_json({"catalog", "verify", "--entry", "l14", "--samples", "3"});
  CHECK(r["passed"] == true);
  REQUIRE(r["entries"].size() == 1);
  bool locus = false;
  for (const auto& s : r["entries"][0]["samples"]) {
    if (s["on_locus"] == true) {
      locus = true;
      CHECK(s["params"]["p"] == "0");
    }
    for (const auto& c : s["checks"])
      if (c["name"] == "unimodular-iff p = 0") CHECK(c["status"] == "PASS");
  }
  CHECK(locus);
  Run human = run({"catalog", "verify", "--entry", "l14"});
  CHECK(human.code == 0);
  CHECK(human.out.find("catalog: PASS") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--json", "check", example("l1.alg")},
           {"--json", "data", example("l1.alg")},
           {"--json", "rho-b", example("l1.alg")},
           {"--json", "catalog", "verify", "--entry", "g3", "--threads", "1"},
           {"--json", "lattice", example("l1.alg"), "--rule", "2logk:K=6", "--threads", "3"}}) {
    Run a = run(args);
    Run b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
  Run t1 = run({"--json", "catalog", "verify", "--entry", "l1", "--threads", "1"});
  Run t4 = run({"--json", "catalog", "verify", "--entry", "l1", "--threads", "4"});
  CHECK(t1.out == t4.out);
}

TEST_CASE("exit codes separate input errors from mathematical rejections") {
  CHECK(run({"check", example("missing.alg")}).code == 1);
  CHECK(run({"check", example("l1.alg"), "--param", "p=0"}).code == 1);
  CHECK(run({"check", example("l1.alg"), "--param", "p"}).code == 1);
  CHECK(run({"check", example("b2.alg"), "--property", "hyperbolic"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"catalog", "show", "g9"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"skt-to-lcb", example("b2.alg")}).code == 2);
  CHECK(run({"lchk", "--matrix", "id2"}).code == 2);
  Json err = run_json({"data", example("missing.alg")}, 1);
  CHECK(err["error"]["code"] == "INPUT");
  CHECK(err["command"] == "data");
  CHECK(exit_code_for(ErrorCode::Syntax) == 1);
  CHECK(exit_code_for(ErrorCode::NotAlmostAbelian) == 2);
  CHECK(exit_code_for(ErrorCode::WitnessFailure) == 2);
}

TEST_CASE("SKT data is turned into an LCB metric on the same complex structure") {
  Json before = run_json({"check", example("s4.alg"), "--property", "skt,lcb"});
  CHECK(row(before, "skt")["direct"] == true);
  CHECK(row(before, "lcb")["direct"] == false);
  Json r = run_json({"skt-to-lcb", example("s4.alg")});
  CHECK(r["lcb_direct"] == true);
  CHECK(r["lcb_data"] == true);
  const std::string path = "cli_skt_output.alg";
  {
    std::ofstream f(path);
    f << r["output"].get<std::string>();
  }
  Json after = run_json({"check", path, "--property", "skt,lcb"});
  CHECK(row(after, "lcb")["direct"] == true);
  CHECK(row(after, "skt")["direct"] == true);
  std::remove(path.c_str());
}

TEST_CASE("rho-b matches the oracle and the lattice probe reports every sample") {
  Json r = run_json({"rho-b", example("l1.alg")});
  CHECK(r["equal"] == true);
  CHECK(r["agree"] == true);
  Json h = run_json({"rho-b", example("h3r.alg")});
  CHECK(h["equal"] == true);
  Json l = run_json({"lattice", example("l1.alg"), "--grid", "1:2:5"});
  CHECK(l["points"].size() == 5);
  CHECK(l["overall"] == "NONE_IN_RANGE");
  CHECK(run({"lattice", example("l1.alg"), "--rule", "bogus"}).code == 1);
}
