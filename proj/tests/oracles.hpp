#pragma once
// Independent reference computations used by the test suites. Nothing here
// calls into the interval code paths it is used to check.

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace oracle {

using Exact = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;
using Dec50 = boost::multiprecision::cpp_dec_float_50;

// Smallest eigenvalue of a symmetric 2x2 matrix, closed form.
inline double min_eig_2x2(double a, double b, double d) {
  double m = 0.5 * (a + d);
  double r = std::hypot(0.5 * (a - d), b);
  return m - r;
}

// Smallest eigenvalue of a symmetric 3x3 matrix by bisection on the
// characteristic polynomial (Sturm count via LDL^T pivots).
inline double min_eig_3x3(const std::array<std::array<double, 3>, 3>& s) {
  auto count_below = [&](long double x) {
    // Number of eigenvalues < x from the inertia of S - xI.
    long double a00 = s[0][0] - x, a01 = s[0][1], a02 = s[0][2];
    long double a11 = s[1][1] - x, a12 = s[1][2], a22 = s[2][2] - x;
    int neg = 0;
    long double d0 = a00;
    if (d0 == 0) d0 = 1e-300L;
    if (d0 < 0) ++neg;
    long double l10 = a01 / d0, l20 = a02 / d0;
    long double d1 = a11 - l10 * l10 * d0;
    if (d1 == 0) d1 = 1e-300L;
    if (d1 < 0) ++neg;
    long double l21 = (a12 - l20 * l10 * d0) / d1;
    long double d2 = a22 - l20 * l20 * d0 - l21 * l21 * d1;
    if (d2 < 0) ++neg;
    return neg;
  };
  double bound = 0;
  for (auto& row : s)
    for (double v : row) bound += std::fabs(v);
  long double lo = -bound - 1, hi = bound + 1;
  for (int i = 0; i < 200; ++i) {
    long double mid = 0.5L * (lo + hi);
    if (count_below(mid) >= 1) hi = mid; else lo = mid;
  }
  return static_cast<double>(lo);
}

// Random double with a random binary exponent, sign included.
inline double wide_double(std::mt19937_64& g, int emin = -30, int emax = 30) {
  std::uniform_real_distribution<double> m(1.0, 2.0);
  std::uniform_int_distribution<int> e(emin, emax);
  std::bernoulli_distribution sgn(0.5);
  double v = std::ldexp(m(g), e(g));
  return sgn(g) ? -v : v;
}

}  // namespace oracle
