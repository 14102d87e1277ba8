#include "conefield/interval.hpp"

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cstdio>
#include <regex>

namespace conefield {

namespace rnd {
namespace {

constexpr double kTiny = 0x1p-968;  // below this, fma residuals may be inexact

bool finite(double x) { return std::isfinite(x); }

// Overflowed sums/products: the true value is finite, so the directed bound
// towards zero is the largest finite double.
double overflow_down(double r) { return r > 0 ? DBL_MAX : r; }
double overflow_up(double r) { return r < 0 ? -DBL_MAX : r; }

}  // namespace

double down(double x) { return std::nextafter(x, -INFINITY); }
double up(double x) { return std::nextafter(x, INFINITY); }

double add_down(double a, double b) {
  double s = a + b;
  if (!finite(s)) return (finite(a) && finite(b)) ? overflow_down(s) : s;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return err < 0 ? down(s) : s;
}

double add_up(double a, double b) {
  double s = a + b;
  if (!finite(s)) return (finite(a) && finite(b)) ? overflow_up(s) : s;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return err > 0 ? up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (!finite(p)) return (finite(a) && finite(b)) ? overflow_down(p) : p;
  if (std::fabs(p) < kTiny) return down(p);
  double e = std::fma(a, b, -p);
  return e < 0 ? down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (!finite(p)) return (finite(a) && finite(b)) ? overflow_up(p) : p;
  if (std::fabs(p) < kTiny) return up(p);
  double e = std::fma(a, b, -p);
  return e > 0 ? up(p) : p;
}

namespace {
// Sign of (a/b - fl(a/b)); 2 when the residual cannot be trusted.
int div_residual_sign(double a, double b, double q) {
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return 2;
  double r = std::fma(-q, b, a);
  if (r == 0) return 0;
  return ((r > 0) == (b > 0)) ? 1 : -1;
}
}  // namespace

double div_down(double a, double b) {
  double q = a / b;
  if (!finite(b) || !finite(a)) return q;
  if (!finite(q)) return overflow_down(q);
  int s = div_residual_sign(a, b, q);
  return (s < 0 || s == 2) ? down(q) : q;
}

double div_up(double a, double b) {
  double q = a / b;
  if (!finite(b) || !finite(a)) return q;
  if (!finite(q)) return overflow_up(q);
  int s = div_residual_sign(a, b, q);
  return (s > 0 || s == 2) ? up(q) : q;
}

double sqrt_down(double a) {
  double s = std::sqrt(a);
  if (!finite(s) || s == 0.0) return s;
  if (a < kTiny) return down(s);
  double r = std::fma(-s, s, a);
  return r < 0 ? down(s) : s;
}

double sqrt_up(double a) {
  double s = std::sqrt(a);
  if (!finite(s) || s == 0.0) return s;
  if (a < kTiny) return up(s);
  double r = std::fma(-s, s, a);
  return r > 0 ? up(s) : s;
}

}  // namespace rnd

Interval make_raw(double lo, double hi) { return Interval(lo, hi, Interval::Raw{}); }

Interval::Interval(double x) : lo_(x), hi_(x) {
  if (!std::isfinite(x)) throw InvalidInterval("point interval must be finite");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw InvalidInterval("NaN endpoint");
  if (lo > hi) throw InvalidInterval("lo > hi");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidInterval("infinite endpoint outside a time domain");
}

Interval Interval::time_domain(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw InvalidInterval("NaN endpoint");
  if (lo > hi) throw InvalidInterval("lo > hi");
  if (!std::isfinite(lo) && !std::isfinite(hi))
    throw InvalidInterval("time domain needs one finite endpoint");
  return make_raw(lo, hi);
}

Interval make_interval(double lo, double hi) { return Interval(lo, hi); }

double Interval::mid() const {
  if (!std::isfinite(lo_)) return hi_;
  if (!std::isfinite(hi_)) return lo_;
  if (lo_ == hi_) return lo_;
  double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::rad() const {
  double m = mid();
  return std::fmax(rnd::sub_up(m, lo_), rnd::sub_up(hi_, m));
}

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::fmin(std::fabs(lo_), std::fabs(hi_));
}

Interval operator+(const Interval& a, const Interval& b) {
  return make_raw(rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return make_raw(rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) {
    return make_raw(rnd::mul_down(a.lo(), b.lo()), rnd::mul_up(a.lo(), b.lo()));
  }
  double l1 = rnd::mul_down(a.lo(), b.lo()), l2 = rnd::mul_down(a.lo(), b.hi());
  double l3 = rnd::mul_down(a.hi(), b.lo()), l4 = rnd::mul_down(a.hi(), b.hi());
  double u1 = rnd::mul_up(a.lo(), b.lo()), u2 = rnd::mul_up(a.lo(), b.hi());
  double u3 = rnd::mul_up(a.hi(), b.lo()), u4 = rnd::mul_up(a.hi(), b.hi());
  return make_raw(std::min({l1, l2, l3, l4}), std::max({u1, u2, u3, u4}));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DivisionByZeroInterval("divisor contains zero");
  double l1 = rnd::div_down(a.lo(), b.lo()), l2 = rnd::div_down(a.lo(), b.hi());
  double l3 = rnd::div_down(a.hi(), b.lo()), l4 = rnd::div_down(a.hi(), b.hi());
  double u1 = rnd::div_up(a.lo(), b.lo()), u2 = rnd::div_up(a.lo(), b.hi());
  double u3 = rnd::div_up(a.hi(), b.lo()), u4 = rnd::div_up(a.hi(), b.hi());
  return make_raw(std::min({l1, l2, l3, l4}), std::max({u1, u2, u3, u4}));
}

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

namespace {
double pow_down(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = rnd::mul_down(r, a);
  return r;
}
double pow_up(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = rnd::mul_up(r, a);
  return r;
}
}  // namespace

Interval sqr(const Interval& x) { return powi(x, 2); }

Interval powi(const Interval& x, int k) {
  if (k == 0) return Interval(1.0);
  if (k < 0) return Interval(1.0) / powi(x, -k);
  if (k == 1) return x;
  if (k % 2 == 0) {
    return make_raw(pow_down(x.mig(), k), pow_up(x.mag(), k));
  }
  double lo = x.lo() >= 0 ? pow_down(x.lo(), k) : -pow_up(-x.lo(), k);
  double hi = x.hi() >= 0 ? pow_up(x.hi(), k) : -pow_down(-x.hi(), k);
  return make_raw(lo, hi);
}

Interval sqrt(const Interval& x) {
  if (x.lo() < 0) throw DomainError("sqrt of negative values");
  return make_raw(rnd::sqrt_down(x.lo()), rnd::sqrt_up(x.hi()));
}

Interval exp(const Interval& x) {
  double lo = 0.0;
  if (std::isfinite(x.lo())) lo = std::fmax(0.0, rnd::down(rnd::down(std::exp(x.lo()))));
  double hi = std::exp(x.hi());
  if (std::isfinite(hi)) hi = rnd::up(rnd::up(hi));
  return make_raw(lo, hi);
}

Interval log(const Interval& x) {
  if (x.lo() <= 0) throw DomainError("log of nonpositive values");
  double lo = rnd::down(rnd::down(std::log(x.lo())));
  double hi = std::log(x.hi());
  if (std::isfinite(hi)) hi = rnd::up(rnd::up(hi));
  return make_raw(lo, hi);
}

Interval abs(const Interval& x) { return make_raw(x.mig(), x.mag()); }

Interval hull(const Interval& a, const Interval& b) {
  return make_raw(std::fmin(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  double lo = std::fmax(a.lo(), b.lo()), hi = std::fmin(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return make_raw(lo, hi);
}

Interval inflate(const Interval& x, double r) {
  return make_raw(rnd::sub_down(x.lo(), r), rnd::add_up(x.hi(), r));
}

std::string to_decimal(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0;
  const char* b = s.data();
  if (!s.empty() && s[0] == '+') ++b;
  auto res = std::from_chars(b, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidInterval("bad decimal: " + s);
  return v;
}

std::string to_string(const Interval& x) {
  return "[" + to_decimal(x.lo()) + ", " + to_decimal(x.hi()) + "]";
}

namespace {

// Exact fixed-point expansion of |x| (glibc prints exact digits), split into
// integer digits and `dec` fractional digits, truncated or rounded up.
std::string fixed_digits(double x, int dec, bool round_up) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.120f", std::fabs(x));
  std::string s(buf);
  auto dot = s.find('.');
  std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
  bool rest_nonzero = fp.find_first_not_of('0', dec) != std::string::npos;
  std::string digits = ip + fp.substr(0, dec);
  if (round_up && rest_nonzero) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[i] == '9') digits[i--] = '0';
    if (i < 0) {
      digits.insert(digits.begin(), '1');
    } else {
      ++digits[i];
    }
  }
  return digits;  // last `dec` chars are fractional
}

std::string with_point(const std::string& digits, int dec) {
  std::string ip = digits.substr(0, digits.size() - dec);
  if (ip.empty()) ip = "0";
  return ip + "." + digits.substr(digits.size() - dec);
}

}  // namespace

std::string to_compressed(const Interval& x, int extra_digits) {
  if (!x.is_finite() || x.contains_zero() || x.is_point()) return to_string(x);
  bool neg = x.hi() < 0;
  double a = std::fabs(neg ? x.hi() : x.lo());
  double b = std::fabs(neg ? x.lo() : x.hi());
  // First decimal position where a and b differ.
  int dec = 0;
  for (; dec < 60; ++dec) {
    if (fixed_digits(a, dec, false) != fixed_digits(b, dec, false)) break;
  }
  dec = std::max(dec, 1) + extra_digits - 1;
  std::string da = fixed_digits(a, dec, false), db = fixed_digits(b, dec, true);
  std::string pa = with_point(da, dec), pb = with_point(db, dec);
  if (pa.size() != pb.size()) return to_string(x);
  size_t k = 0;
  while (k < pa.size() && pa[k] == pb[k]) ++k;
  if (k == pa.size()) return to_string(x);
  // Keep the decimal point in the prefix.
  size_t dot = pa.find('.');
  if (k <= dot) return to_string(x);
  return std::string(neg ? "-" : "") + pa.substr(0, k) + "[" + pa.substr(k) + "," +
         pb.substr(k) + "]";
}

Interval parse_compressed(const std::string& s) {
  static const std::regex re(R"(^\s*([+-]?)([0-9]*\.?[0-9]*)\[([0-9]+),([0-9]+)\]\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) {
    static const std::regex pair(R"(^\s*\[\s*([^,\s]+)\s*,\s*([^\]\s]+)\s*\]\s*$)");
    if (std::regex_match(s, m, pair)) {
      return Interval(parse_decimal(m[1]), parse_decimal(m[2]));
    }
    return Interval(parse_decimal(s));
  }
  std::string prefix = m[2];
  double a = std::stod(prefix + std::string(m[3]));
  double b = std::stod(prefix + std::string(m[4]));
  if (a > b) std::swap(a, b);
  // Decimal inputs are not exact binaries: widen by one ulp.
  a = rnd::down(a);
  b = rnd::up(b);
  if (m[1] == "-") return Interval(-b, -a);
  return Interval(a, b);
}

}  // namespace conefield
