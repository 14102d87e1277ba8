#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "conefield/shooting.hpp"

namespace conefield {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProofConfig {
  ProofSettings settings;
  std::vector<OrbitCandidate> candidates = default_candidates();
  int refine_r_subdivisions = 100;

  static ProofConfig defaults();
  // rho_star filled from the first candidate when unset
  ProofSettings resolved() const;
  void validate() const;
};

// INI-style key/value file:
//   [blocks] db1 db2 de1 de2 r_star a
//   [integrator] order tol max_steps t_max
//   [subdivisions] r y y_max refine threads
//   [candidates] n<k> = r_hat, delta_r
// Missing keys keep their defaults. Errors carry line or key names.
ProofConfig parse_config(const std::string& text);
ProofConfig load_config(const std::string& path);
std::string to_ini(const ProofConfig& c);

// --config path, else $CONEFIELD_CONFIG, else defaults.
ProofConfig resolve_config(const std::string& cli_path);

// 64-bit FNV-1a of to_ini; pinned by a golden test.
std::uint64_t config_hash(const ProofConfig& c);

}  // namespace conefield
