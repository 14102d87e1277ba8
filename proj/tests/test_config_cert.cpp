#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "conefield/certificate.hpp"
#include "conefield/config.hpp"
#include "properties.hpp"

using namespace conefield;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kDefaultIni = std::string(CONEFIELD_SOURCE_DIR) + "/config/default.ini";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("default config is hash pinned") {
  // FNV-1a of the shipped config/default.ini, computed outside this code base
  CHECK(config_hash(ProofConfig::defaults()) == 0xb422a2ba56d2bc78ULL);
  CHECK(to_ini(ProofConfig::defaults()) == slurp(kDefaultIni));
}

TEST_CASE("defaults hold the published data") {
  ProofConfig c = ProofConfig::defaults();
  const ProofSettings& s = c.settings;
  CHECK(s.db1 == 0.125);
  CHECK(s.de1 == 0.0015);
  CHECK(s.de2 == 0.01);
  CHECK(s.r_star == 6.0);
  CHECK(s.a == 1.0);
  CHECK(s.r_subdivisions == 1);
  CHECK(s.y_subdivisions == 1);
  CHECK(c.refine_r_subdivisions == 100);
  REQUIRE(c.candidates.size() == 6);
  const double r_hat[] = {0.003288250, 0.001184020, 0.000650050, 0.000424204, 0.000304427, 0.000232050};
  const double dr[] = {4e-7, 6e-8, 3e-8, 2e-8, 1e-8, 8e-9};
  for (int i = 0; i < 6; ++i) {
    CHECK(c.candidates[i].n == i + 1);
    CHECK(c.candidates[i].r_hat == r_hat[i]);
    CHECK(c.candidates[i].delta_r == dr[i]);
  }
  // rho_star follows the first candidate
  CHECK(c.resolved().rho_star == c.candidates[0].rho_cover());
  CHECK(c.resolved().rho_star >= std::log(0.00328865));
}

TEST_CASE("parse round trip") {
  ProofConfig c = parse_config(slurp(kDefaultIni));
  CHECK(config_hash(c) == config_hash(ProofConfig::defaults()));
  c.settings.tol = 1e-12;
  c.settings.threads = 3;
  c.candidates = {{2, 0.00118402, 6e-8}};
  ProofConfig back = parse_config(to_ini(c));
  CHECK(to_ini(back) == to_ini(c));
  CHECK(back.settings.tol == 1e-12);
  CHECK(back.settings.threads == 3);
  REQUIRE(back.candidates.size() == 1);
  CHECK(back.candidates[0].n == 2);
}

TEST_CASE("partial files keep defaults") {
  ProofConfig c = parse_config("[integrator]\norder = 24\n");
  CHECK(c.settings.order == 24);
  CHECK(c.settings.db1 == 0.125);
  CHECK(c.candidates.size() == 6);
}

TEST_CASE("parse errors name the line or key") {
  CHECK(error_of("[blocks]\ndb1 = abc\n").find("blocks.db1") != std::string::npos);
  CHECK(error_of("[blocks]\ndb3 = 1\n").find("blocks.db3") != std::string::npos);
  CHECK(error_of("[wrong]\nx = 1\n").find("[wrong]") != std::string::npos);
  CHECK(error_of("[blocks]\ndb1 = 0.1\n[blocks\n").find("line 3") != std::string::npos);
  CHECK(error_of("[candidates]\nm1 = 0.1, 0.01\n").find("m1") != std::string::npos);
  CHECK(error_of("[candidates]\nn1 = 0.1\n").find("candidates.n1") != std::string::npos);
  CHECK(error_of("[candidates]\nn1 = 0.001, 0.002\n").find("candidates.n1") != std::string::npos);
  CHECK(error_of("[blocks]\nde2 = -1\n").find("blocks.de2") != std::string::npos);
  CHECK(error_of("[integrator]\norder = 2.5\n").find("integrator.order") != std::string::npos);
  CHECK(error_of("[subdivisions]\nr = 0\n").find("subdivision") != std::string::npos);
}

TEST_CASE("config resolution order") {
  const std::string path = "conefield_test_config.ini";
  std::ofstream(path) << "[integrator]\norder = 22\n";
  ::setenv("CONEFIELD_CONFIG", path.c_str(), 1);
  CHECK(resolve_config("").settings.order == 22);
  CHECK(resolve_config(kDefaultIni).settings.order == 20);
  ::unsetenv("CONEFIELD_CONFIG");
  CHECK(resolve_config("").settings.order == 20);
  CHECK_THROWS_AS(resolve_config("does/not/exist.ini"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("certificate round trip and report") {
  props::Result r = props::certificate_round_trip();
  INFO(r.first_failure);
  CHECK(r.ok());

  ProofConfig cfg;
  ProofSettings s = cfg.resolved();
  CertificateFile f{cfg, {prove_orbit(cfg.candidates[1], s)}};
  const std::string text = serialize(f);
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  const std::string rep = report(parse_certificates(text));
  const auto& c = f.certificates[0];
  for (const Interval& x : {c.return_time, c.cover_minus, c.cover_plus, c.F_prime}) {
    CHECK(rep.find(to_decimal(x.lo())) != std::string::npos);
    CHECK(rep.find(to_decimal(x.hi())) != std::string::npos);
    CHECK(parse_decimal(to_decimal(x.lo())) == x.lo());
    CHECK(parse_decimal(to_decimal(x.hi())) == x.hi());
  }
  CHECK(rep.find("published") != std::string::npos);
}

TEST_CASE("malformed certificate files are rejected") {
  CHECK_THROWS(parse_certificates("{"));
  CHECK_THROWS(parse_certificates("{\"schema_version\": 99, \"config\": \"\", \"certificates\": []}"));
}
