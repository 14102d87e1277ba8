#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace conefield {

struct IntervalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInterval : IntervalError {
  using IntervalError::IntervalError;
};
struct DivisionByZeroInterval : IntervalError {
  using IntervalError::IntervalError;
};
struct DomainError : IntervalError {
  using IntervalError::IntervalError;
};

// Directed scalar operations. The round-to-nearest result is corrected by one
// ulp only when an error-free transformation shows it lies on the wrong side.
namespace rnd {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
double down(double x);  // one ulp towards -inf
double up(double x);    // one ulp towards +inf
}  // namespace rnd

class Interval {
 public:
  Interval() = default;
  Interval(double x);  // NOLINT: point intervals convert implicitly
  Interval(double lo, double hi);

  // Allows one infinite endpoint; used for half-infinite time domains.
  static Interval time_domain(double lo, double hi);
  static Interval entire_sym(double r) { return Interval(-r, r); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double rad() const;  // upper bound of half-width
  double width() const { return rnd::sub_up(hi_, lo_); }
  double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const;
  bool is_point() const { return lo_ == hi_; }
  bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool interior_of(const Interval& o) const { return o.lo_ < lo_ && hi_ < o.hi_; }
  bool positive() const { return lo_ > 0.0; }
  bool negative() const { return hi_ < 0.0; }
  // +1, -1, or 0 when the sign is not determined.
  int sign() const { return lo_ > 0.0 ? 1 : (hi_ < 0.0 ? -1 : 0); }

  Interval operator-() const { return Interval(-hi_, -lo_, Raw{}); }
  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  struct Raw {};
  Interval(double lo, double hi, Raw) : lo_(lo), hi_(hi) {}
  friend Interval make_raw(double lo, double hi);
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval make_interval(double lo, double hi);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& x);
Interval powi(const Interval& x, int k);
Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval abs(const Interval& x);

Interval hull(const Interval& a, const Interval& b);
// Intersection; nullopt means disjoint. There is no empty interval.
std::optional<Interval> intersect(const Interval& a, const Interval& b);
// Widen by r on both sides (outward).
Interval inflate(const Interval& x, double r);

// Exact shortest round-trip decimal for a double.
std::string to_decimal(double x);
double parse_decimal(const std::string& s);
// "[lo, hi]" with round-trip decimals.
std::string to_string(const Interval& x);
// Bracketed-digits form, e.g. [0.003289, 0.003297] -> "0.0032[89,97]".
// The printed interval contains x. Negative intervals list magnitudes in
// increasing order: [-0.003226, -0.003219] -> "-0.0032[19,26]".
std::string to_compressed(const Interval& x, int extra_digits = 2);
Interval parse_compressed(const std::string& s);

}  // namespace conefield
