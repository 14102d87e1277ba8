#include "conefield/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace conefield {

namespace pt = boost::property_tree;

ProofConfig ProofConfig::defaults() { return ProofConfig{}; }

ProofSettings ProofConfig::resolved() const {
  ProofSettings s = settings;
  if (s.rho_star == 0 && !candidates.empty()) s.rho_star = candidates.front().rho_cover();
  return s;
}

void ProofConfig::validate() const {
  const ProofSettings& s = settings;
  auto pos = [](double v, const char* k) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(k) + " must be positive");
  };
  pos(s.db1, "blocks.db1");
  pos(s.db2, "blocks.db2");
  pos(s.de1, "blocks.de1");
  pos(s.de2, "blocks.de2");
  pos(s.r_star, "blocks.r_star");
  pos(s.a, "blocks.a");
  pos(s.tol, "integrator.tol");
  pos(s.t_max, "integrator.t_max");
  if (s.order < 1 || s.order > 60) throw ConfigError("integrator.order must be in 1..60");
  if (s.max_steps < 1) throw ConfigError("integrator.max_steps must be positive");
  if (s.r_subdivisions < 1 || s.y_subdivisions < 1 || s.max_y_subdivisions < 1 || refine_r_subdivisions < 1)
    throw ConfigError("subdivision counts must be >= 1");
  for (const auto& c : candidates) {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("candidates.n" + std::to_string(c.n) + ": " + e.what());
    }
  }
}

namespace {

template <class T>
void read(const pt::ptree& t, const std::string& key, T& out) {
  auto v = t.get_optional<std::string>(key);
  if (!v) return;
  std::istringstream is(*v);
  T x{};
  is >> x;
  if (!is || !(is >> std::ws).eof()) throw ConfigError("bad value for " + key + ": '" + *v + "'");
  out = x;
}

}  // namespace

ProofConfig parse_config(const std::string& text) {
  pt::ptree t;
  std::istringstream is(text);
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }
  static const std::vector<std::string> known = {"blocks", "integrator", "subdivisions", "candidates"};
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"blocks", {"db1", "db2", "de1", "de2", "r_star", "a", "rho_star"}},
      {"integrator", {"order", "tol", "max_steps", "t_max"}},
      {"subdivisions", {"r", "y", "y_max", "threads", "refine"}}};
  for (const auto& [sec, body] : t) {
    if (std::find(known.begin(), known.end(), sec) == known.end()) throw ConfigError("unknown section [" + sec + "]");
    auto it = keys.find(sec);
    if (it == keys.end()) continue;
    for (const auto& [k, _] : body)
      if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw ConfigError("unknown key " + sec + "." + k);
  }

  ProofConfig c;
  ProofSettings& s = c.settings;
  read(t, "blocks.db1", s.db1);
  read(t, "blocks.db2", s.db2);
  read(t, "blocks.de1", s.de1);
  read(t, "blocks.de2", s.de2);
  read(t, "blocks.r_star", s.r_star);
  read(t, "blocks.a", s.a);
  read(t, "blocks.rho_star", s.rho_star);
  read(t, "integrator.order", s.order);
  read(t, "integrator.tol", s.tol);
  read(t, "integrator.max_steps", s.max_steps);
  read(t, "integrator.t_max", s.t_max);
  read(t, "subdivisions.r", s.r_subdivisions);
  read(t, "subdivisions.y", s.y_subdivisions);
  read(t, "subdivisions.y_max", s.max_y_subdivisions);
  read(t, "subdivisions.threads", s.threads);
  read(t, "subdivisions.refine", c.refine_r_subdivisions);

  if (auto cands = t.get_child_optional("candidates")) {
    c.candidates.clear();
    static const std::regex key_re(R"(n([0-9]+))");
    static const std::regex val_re(R"(\s*([^,\s]+)\s*,\s*([^,\s]+)\s*)");
    for (const auto& [k, v] : *cands) {
      std::smatch km, vm;
      std::string val = v.data();
      if (!std::regex_match(k, km, key_re)) throw ConfigError("candidates: bad key '" + k + "', expected n<k>");
      if (!std::regex_match(val, vm, val_re)) throw ConfigError("candidates." + k + ": expected 'r_hat, delta_r'");
      try {
        c.candidates.push_back({std::stoi(km[1]), parse_decimal(vm[1]), parse_decimal(vm[2])});
      } catch (const std::exception&) {
        throw ConfigError("candidates." + k + ": bad number in '" + val + "'");
      }
    }
    std::sort(c.candidates.begin(), c.candidates.end(), [](auto& a, auto& b) { return a.n < b.n; });
  }
  c.validate();
  return c;
}

ProofConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string to_ini(const ProofConfig& c) {
  const ProofSettings& s = c.settings;
  std::ostringstream o;
  auto d = [](double x) { return to_decimal(x); };
  o << "[blocks]\n"
    << "db1 = " << d(s.db1) << "\ndb2 = " << d(s.db2) << "\nde1 = " << d(s.de1) << "\nde2 = " << d(s.de2)
    << "\nr_star = " << d(s.r_star) << "\na = " << d(s.a) << "\n";
  if (s.rho_star != 0) o << "rho_star = " << d(s.rho_star) << "\n";
  o << "\n[integrator]\norder = " << s.order << "\ntol = " << d(s.tol) << "\nmax_steps = " << s.max_steps
    << "\nt_max = " << d(s.t_max) << "\n";
  o << "\n[subdivisions]\nr = " << s.r_subdivisions << "\ny = " << s.y_subdivisions
    << "\ny_max = " << s.max_y_subdivisions << "\nrefine = " << c.refine_r_subdivisions << "\n";
  if (s.threads) o << "threads = " << s.threads << "\n";
  o << "\n[candidates]\n";
  for (const auto& k : c.candidates) o << "n" << k.n << " = " << d(k.r_hat) << ", " << d(k.delta_r) << "\n";
  return o.str();
}

ProofConfig resolve_config(const std::string& cli_path) {
  if (!cli_path.empty()) return load_config(cli_path);
  if (const char* env = std::getenv("CONEFIELD_CONFIG"); env && *env) return load_config(env);
  return ProofConfig::defaults();
}

std::uint64_t config_hash(const ProofConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_ini(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace conefield
