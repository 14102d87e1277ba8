#pragma once
// Randomized property suites shared by the unit tests and the acceptance
// binary. Each returns how many cases ran and how many violated the property.

#include <cstdint>
#include <string>

namespace props {

struct Result {
  long cases = 0;
  long violations = 0;
  std::string first_failure;
  bool ok() const { return cases > 0 && violations == 0; }
};

Result interval_containment(long n, std::uint64_t seed);
Result interval_monotonicity(long n, std::uint64_t seed);
Result pd_vs_eigen_oracle(long n, std::uint64_t seed);
Result integrator_vs_reference(int per_field, std::uint64_t seed);
Result variational_vs_fd(int n, std::uint64_t seed);
Result certificate_round_trip();

}  // namespace props
