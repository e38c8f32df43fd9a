#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <interact/cli/app.hpp>

using interact::cli::json;

namespace {

struct Result {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "interact");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = interact::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(INTERACT_SAMPLES) + "/" + name; }
std::string data(const std::string& name) { return std::string(INTERACT_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct EnvGuard {
  EnvGuard(const char* v) { setenv("INTERACT_TOL", v, 1); }
  ~EnvGuard() { unsetenv("INTERACT_TOL"); }
};

}  // namespace

TEST_CASE("flip passes every check", "[cli]") {
  auto r = call({"verify", sample("flip.json")});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["verdict"] == "pass");
  CHECK(j["failed"].empty());
  const auto& ids = interact::cli::checklist_ids();
  CHECK(j["checks"].size() == ids.size());
  for (const auto& id : ids) {
    INFO(id);
    const auto& c = j["checks"][id];
    if (id == "7.13") {
      CHECK(c["status"] == "skipped");
      CHECK(!c["reason"].get<std::string>().empty());
    } else {
      CHECK(c["status"] == "pass");
    }
  }
  CHECK(j["environment"]["dims"]["X"] == 1);
  CHECK(j["environment"]["tolerance_source"] == "default");
}

TEST_CASE("transpose is rejected with a witness", "[cli]") {
  auto r = call({"verify", sample("transpose_m2.json")});
  CHECK(r.code == 1);
  auto j = r.report();
  CHECK(j["verdict"] == "fail");
  const auto& c = j["checks"]["3.1.iv"];
  CHECK(c["status"] == "fail");
  CHECK(c["witness"] == "x=e12, y=e21");
  CHECK(j["checks"]["3.3"]["status"] == "fail");
  CHECK(j["checks"]["5.4"]["status"] == "skipped");
}

TEST_CASE("unusable input exits with 2", "[cli]") {
  CHECK(call({"verify", data("malformed.json")}).code == 2);
  CHECK(call({"verify", data("bad_shape.json")}).code == 2);
  CHECK(call({"verify", data("does_not_exist.json")}).code == 2);
  CHECK(call({"verify"}).code == 2);
  CHECK(call({"frobnicate", sample("flip.json")}).code == 2);
  CHECK(call({"build", sample("flip.json"), "--emit", "nonsense"}).code == 2);
  CHECK(call({"fuzz", sample("flip.json"), "--amplify", "2", "--samples", "5"}).code == 2);
  CHECK(call({"verify", sample("flip.json"), "--tol", "-1"}).code == 2);
}

TEST_CASE("a scaled partial isometry is not an interaction", "[cli]") {
  auto r = call({"verify", data("not_isometry.json")});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("other samples pass", "[cli]") {
  for (const char* s : {"identity_m2.json", "swap_endo_transfer.json", "flip_partial_isometry.json", "flip_complex.json"}) {
    INFO(s);
    auto r = call({"verify", sample(s)});
    CHECK(r.code == 0);
  }
  auto sw = call({"verify", sample("swap_endo_transfer.json")}).report();
  CHECK(sw["checks"]["7.13"]["status"] == "pass");
  auto cx = call({"verify", sample("flip_complex.json")}).report();
  CHECK(cx["environment"]["tolerance_source"] == "spec");
  CHECK(cx["environment"]["samples"] == 10);
  CHECK(cx["environment"]["seed"] == 3);
}

TEST_CASE("build emits the covariant representation", "[cli]") {
  auto r = call({"build", sample("flip.json"), "--emit", "covrep"});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["r"] == 1);
  CHECK(j["s"] == 1);
  CHECK(j["nondegenerate"] == true);
  // S = e12 in M2
  json e12 = json::parse("[[[0,0],[1,0]],[[0,0],[0,0]]]");
  CHECK(j["S"] == e12);
  for (auto& [k, v] : j["residuals"].items()) {
    INFO(k);
    CHECK(v.get<double>() == 0.0);
  }
  for (auto& [k, v] : j["gates"].items()) {
    INFO(k);
    CHECK(v.get<double>() >= 0.999);
  }
}

TEST_CASE("build emits the bimodule", "[cli]") {
  auto r = call({"build", sample("identity_m2.json"), "--emit", "bimodule"});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["r"] == 4);
  REQUIRE(j["gram_spectrum"].size() == 16);
  for (int k = 0; k < 4; ++k) CHECK(j["gram_spectrum"][k].get<double>() > 0.0);
  CHECK(j["kernel_dim"] == 12);
}

TEST_CASE("build of a degenerate or rejected input fails with a check id", "[cli]") {
  auto r = call({"build", sample("transpose_m2.json"), "--emit", "covrep"});
  CHECK(r.code == 1);
  CHECK(r.err.find("check 3.1") != std::string::npos);
}

TEST_CASE("reports are deterministic", "[cli]") {
  auto a = call({"fuzz", sample("flip.json"), "--amplify", "2", "--samples", "50", "--seed", "7"});
  auto b = call({"fuzz", sample("flip.json"), "--amplify", "2", "--samples", "50", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.report()["environment"]["amplify"] == 2);
}

TEST_CASE("fuzz with n = 1 matches the build report", "[cli]") {
  auto f = call({"fuzz", sample("flip.json"), "--amplify", "1", "--samples", "20", "--seed", "0"}).report();
  auto b = call({"build", sample("flip.json"), "--emit", "report"}).report();
  CHECK(f["checks"] == b["checks"]);
}

TEST_CASE("flip report matches the golden file", "[cli]") {
  auto r = call({"build", sample("flip.json"), "--emit", "report"});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(data("flip_report.json")));
}

TEST_CASE("tolerance precedence", "[cli]") {
  {
    EnvGuard g("1e-7");
    auto j = call({"verify", sample("flip.json")}).report();
    CHECK(j["environment"]["tolerance_source"] == "environment");
    CHECK(j["environment"]["tolerance"].get<double>() == 1e-7);
    auto k = call({"verify", sample("flip.json"), "--tol", "1e-8"}).report();
    CHECK(k["environment"]["tolerance_source"] == "flag");
    CHECK(k["environment"]["tolerance"].get<double>() == 1e-8);
    auto c = call({"verify", sample("flip_complex.json")}).report();
    CHECK(c["environment"]["tolerance_source"] == "spec");
  }
  {
    EnvGuard g("not-a-number");
    CHECK(call({"verify", sample("flip.json")}).code == 2);
  }
}

TEST_CASE("summary and out file", "[cli]") {
  std::string path = "test_cli_out.json";
  auto r = call({"verify", sample("flip.json"), "--out", path, "--summary"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("pass 2.2") != std::string::npos);
  CHECK(r.err.find("skipped 7.13") != std::string::npos);
  CHECK(json::parse(slurp(path))["verdict"] == "pass");
  std::remove(path.c_str());
}
