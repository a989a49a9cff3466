#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"

using namespace casimir_cli;

namespace {

RunConfig make(std::initializer_list<std::pair<std::string, std::string>> keys) {
  RunConfig cfg;
  for (const auto& [k, v] : keys) apply_key(cfg, k, v);
  validate(cfg);
  return cfg;
}

struct Outcome {
  int status;
  std::string out, err;
};

Outcome execute(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int status = run(cfg, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mirror specs") {
  CHECK(parse_mirror("perfect").kind == MirrorSpec::Kind::Perfect);
  const auto l = parse_mirror("lorentzian:omega=12.5");
  CHECK(l.kind == MirrorSpec::Kind::Lorentzian);
  REQUIRE(l.omega.has_value());
  CHECK(*l.omega == 12.5);
  CHECK_FALSE(parse_mirror("lorentzian").omega.has_value());
  CHECK(parse_mirror("file:data/r.csv").path == "data/r.csv");
  CHECK_THROWS_AS(parse_mirror("silver"), UsageError);
  CHECK_THROWS_AS(parse_mirror("lorentzian:omega=abc"), UsageError);
  CHECK_THROWS_AS(parse_mirror("file:"), UsageError);
}

TEST_CASE("motion specs") {
  const auto p = parse_motion("pulse:amplitude=1e-6,center=30,width=2");
  CHECK(p.kind == "pulse");
  CHECK(p.get("center", 0.0) == 30.0);
  CHECK(p.get("missing", 7.0) == 7.0);
  CHECK(parse_motion("rest").kind == "rest");
  CHECK(parse_motion("poly:a=1e-4").get("a", 0.0) == 1e-4);
  CHECK_THROWS_AS(parse_motion("jump:x=1"), UsageError);
  CHECK_THROWS_AS(parse_motion("pulse:height=1"), UsageError);
}

TEST_CASE("sweep specs") {
  const auto s = parse_sweep("Omega:1:1000:4:log");
  CHECK(s.parameter == "Omega");
  CHECK(s.log);
  const auto v = s.values();
  REQUIRE(v.size() == 4);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(v[3] == 1000.0);
  const auto lin = parse_sweep("q:1:2:3").values();
  REQUIRE(lin.size() == 3);
  CHECK(lin[1] == 1.5);
  CHECK_THROWS_AS(parse_sweep("tau:1:2:3"), UsageError);
  CHECK_THROWS_AS(parse_sweep("q:0:2:3:log"), UsageError);
  CHECK_THROWS_AS(parse_sweep("q:1:2"), UsageError);
}

TEST_CASE("keys and config files") {
  RunConfig cfg;
  apply_key(cfg, "omega_tau_max", "6");
  apply_key(cfg, "omega-tau-max", "7");
  CHECK(cfg.omega_tau_max == 7.0);
  CHECK_THROWS_AS(apply_key(cfg, "colour", "red"), UsageError);
  CHECK_THROWS_AS(apply_key(cfg, "q", "one"), UsageError);
  CHECK_THROWS_AS(apply_key(cfg, "format", "xml"), UsageError);
  CHECK(std::find(known_keys().begin(), known_keys().end(), "quad_tol") != known_keys().end());

  const char* path = "cli_test.conf";
  {
    std::ofstream f(path);
    f << "# comment\n\ncommand = coeffs\nq = 2\nmirror = lorentzian:omega=5\n";
  }
  const auto kv = read_config_file(path);
  REQUIRE(kv.size() == 3);
  CHECK(kv[1].first == "q");
  CHECK(kv[1].second == "2");
  std::remove(path);
  CHECK_THROWS_AS(read_config_file("nope.conf"), UsageError);
}

TEST_CASE("cross-key validation") {
  CHECK_THROWS_AS(make({{"command", "force"}, {"sweep", "q:1:2:3"}}), UsageError);
  CHECK_THROWS_AS(make({{"command", "coeffs"}, {"sweep", "Omega:1:2:3"}}), UsageError);
  CHECK_THROWS_AS(make({{"command", "coeffs"}, {"mirror", "lorentzian"}}), UsageError);
  CHECK_NOTHROW(make({{"command", "coeffs"}, {"mirror", "lorentzian"}, {"omega", "3"}}));
  CHECK_THROWS_AS(make({{"command", "force"}, {"trajectory", "t.csv"}, {"motion1", "pulse:amplitude=1e-6"}}), UsageError);
  CHECK_THROWS_AS(make({{"command", "launch"}}), UsageError);
}

TEST_CASE("checks and number formatting") {
  const Check c{"x", 1.0 + 1e-9, 1.0, 0.0, 1e-8};
  CHECK(c.gap() == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK(c.pass());
  const Check d{"y", 2.0, 1.0, 4.0, 0.2};
  CHECK(d.gap() == 0.25);
  CHECK_FALSE(d.pass());
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(fmt(std::nan("")) == "nan");
  CHECK(fmt(-INFINITY) == "-inf");
}

TEST_CASE("coeffs for perfect mirrors passes the energy identity") {
  const auto r = execute(make({{"command", "coeffs"}, {"mirror", "perfect"}, {"q", "1"}}));
  CHECK(r.status == 0);
  CHECK(r.out.find("mu_c2_eq_2U: pass") != std::string::npos);
  CHECK(r.out.find("mu_eq_minus_2Fq_c2: pass") != std::string::npos);
}

TEST_CASE("a failed check gives exit status 1") {
  const auto r = execute(make({{"command", "verify"}, {"suite", "static"}, {"mirror", "lorentzian:omega=10"},
                               {"tol", "1e-15"}}));
  CHECK(r.status == 1);
  CHECK(r.out.find(": fail") != std::string::npos);
}

TEST_CASE("force without cross-check requests no checks") {
  const auto r = execute(make({{"command", "force"}, {"mirror", "perfect"}, {"duration", "32"}}));
  CHECK(r.status == 0);
  CHECK(r.out.find("no checks requested") != std::string::npos);
}

TEST_CASE("numerical failures are reported, not thrown") {
  // a huge pulse breaks the linear-response bound
  const auto r = execute(
      make({{"command", "force"}, {"mirror", "perfect"}, {"motion1", "pulse:amplitude=0.5,center=32,width=2"}}));
  CHECK(r.status == 1);
  CHECK(r.err.find("casimir:") != std::string::npos);
}

TEST_CASE("data files and manifests are deterministic") {
  const std::string a = "cli_det_a.csv", b = "cli_det_b.csv";
  auto cfg = make({{"command", "coeffs"}, {"mirror", "lorentzian"}, {"sweep", "Omega:1:100:3:log"}, {"threads", "4"},
                   {"out", a}});
  REQUIRE(execute(cfg).status == 0);
  apply_key(cfg, "out", b);
  apply_key(cfg, "threads", "1");
  REQUIRE(execute(cfg).status == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("q,omega_cutoff,kappa11,kappa12,lambda11,lambda12,mu11,mu12,mu_sum,F", 0) == 0);

  const auto manifest = nlohmann::json::parse(slurp(a + ".manifest.json"));
  CHECK(manifest["command"] == "coeffs");
  CHECK(manifest["all_pass"] == true);
  CHECK(manifest["points"].size() == 3);
  for (const auto& f : {a, b, a + ".manifest.json", b + ".manifest.json"}) std::remove(f.c_str());
}

TEST_CASE("json output") {
  const std::string path = "cli_spectrum.json";
  const auto r = execute(make({{"command", "spectrum"}, {"mirror", "perfect"}, {"omega-tau-max", "10"},
                               {"steps", "100"}, {"format", "json"}, {"out", path}}));
  CHECK(r.status == 0);
  const auto rows = nlohmann::json::parse(slurp(path));
  REQUIRE(rows.is_array());
  CHECK(rows.size() == 101);
  CHECK(rows[0].contains("re_chi_sum"));
  std::remove(path.c_str());
  std::remove((path + ".manifest.json").c_str());
}
