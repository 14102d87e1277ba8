#include "conefield/systems.hpp"

namespace conefield {

const char* field_name(FieldId id) {
  switch (id) {
    case FieldId::Begin: return "begin";
    case FieldId::End: return "end";
    case FieldId::Original: return "original";
  }
  return "?";
}

Chart chart_of(FieldId id) {
  switch (id) {
    case FieldId::Begin: return Chart::Begin;
    case FieldId::End: return Chart::End;
    case FieldId::Original: return Chart::Original;
  }
  return Chart::Original;
}

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::Begin: return "begin";
    case Chart::End: return "end";
    case Chart::Original: return "original";
    case Chart::Rho: return "rho";
  }
  return "?";
}

std::array<const char*, 2> chart_labels(Chart c) {
  switch (c) {
    case Chart::Begin: return {"x_b", "y_b"};
    case Chart::End: return {"x_e", "y_e"};
    case Chart::Original: return {"A", "A'"};
    case Chart::Rho: return {"w", "w'"};
  }
  return {"?", "?"};
}

namespace {

void check(FieldId id, const TimeBox& t, const StateBox& z) {
  if (z.chart != chart_of(id))
    throw ChartMismatch(std::string("state chart ") + chart_name(z.chart) + " does not match field " +
                        field_name(id));
  if (z.coords.dim() != 2) throw ShapeError("state box must be 2-dimensional");
  TimeScale want = id == FieldId::Begin ? TimeScale::Rho : TimeScale::R;
  if (t.scale != want) throw ChartMismatch("time scale does not match field");
}

// g(S) = S - S^3, intersected with the factored form S(1 - S^2).
Interval cubic_g(const Interval& s) {
  Interval a = s - powi(s, 3);
  Interval b = s * (Interval(1.0) - sqr(s));
  return intersect(a, b).value_or(a);
}

}  // namespace

Interval exp2rho(const TimeBox& t) {
  if (t.scale != TimeScale::Rho) throw ChartMismatch("e^{2 rho} needs a rho time box");
  if (!std::isfinite(t.value.hi())) throw DomainError("rho must be bounded above");
  return exp(Interval(2.0) * t.value);
}

Interval inv_r(const TimeBox& t) {
  if (t.scale != TimeScale::R) throw ChartMismatch("1/r needs an r time box");
  if (!(t.value.lo() > 0)) throw DivisionByZeroInterval("r-interval touches 0");
  if (!std::isfinite(t.value.hi())) return Interval(0.0, rnd::div_up(1.0, t.value.lo()));
  return Interval(1.0) / t.value;
}

IntervalVector field_eval(FieldId id, const TimeBox& t, const StateBox& z) {
  check(id, t, z);
  const Interval& x = z.coords[0];
  const Interval& y = z.coords[1];
  switch (id) {
    case FieldId::Begin: {
      Interval s = exp2rho(t);
      Interval sg = s * cubic_g(x + y);
      return {Interval(0.5) * x + sg, Interval(-0.5) * y - sg};
    }
    case FieldId::End: {
      Interval u = inv_r(t);
      Interval sum = x + y;
      Interval g = Interval(-0.5) * (x - y) * u + Interval(0.125) * sum * sqr(u) -
                   Interval(0.125) * powi(sum, 3);
      return {x + g, -y - g};
    }
    case FieldId::Original: {
      Interval u = inv_r(t);
      Interval a2 = -y * u + Interval(0.25) * x * sqr(u) + x - powi(x, 3);
      return {y, a2};
    }
  }
  return {};
}

AffineJacobian field_jacobian_affine(FieldId id, const TimeBox& t, const StateBox& z) {
  check(id, t, z);
  const Interval& x = z.coords[0];
  const Interval& y = z.coords[1];
  AffineJacobian j;
  switch (id) {
    case FieldId::Begin: {
      Interval s = exp2rho(t);
      j.base = {{0.5, 0.0}, {0.0, -0.5}};
      j.dirs = {IntervalMatrix{{1.0, 1.0}, {-1.0, -1.0}}};
      j.coeffs = {s * (Interval(1.0) - Interval(3.0) * sqr(x + y))};
      break;
    }
    case FieldId::End: {
      Interval u = inv_r(t);
      j.base = {{1.0, 0.0}, {0.0, -1.0}};
      j.dirs = {IntervalMatrix{{1.0, 1.0}, {-1.0, -1.0}}, IntervalMatrix{{-1.0, 1.0}, {1.0, -1.0}}};
      j.coeffs = {Interval(0.125) * sqr(u) - Interval(0.375) * sqr(x + y), Interval(0.5) * u};
      break;
    }
    case FieldId::Original: {
      Interval u = inv_r(t);
      j.base = {{0.0, 1.0}, {1.0, 0.0}};
      j.dirs = {IntervalMatrix{{0.0, 0.0}, {1.0, 0.0}}, IntervalMatrix{{0.0, 0.0}, {0.0, 1.0}}};
      j.coeffs = {Interval(0.25) * sqr(u) - Interval(3.0) * sqr(x), -u};
      break;
    }
  }
  return j;
}

IntervalMatrix AffineJacobian::at(const std::vector<Interval>& c) const {
  IntervalMatrix m = base;
  for (size_t k = 0; k < dirs.size(); ++k) m = m + c[k] * dirs[k];
  return m;
}

IntervalMatrix field_jacobian_z(FieldId id, const TimeBox& t, const StateBox& z) {
  AffineJacobian j = field_jacobian_affine(id, t, z);
  return j.at(j.coeffs);
}

IntervalVector field_dt(FieldId id, const TimeBox& t, const StateBox& z) {
  check(id, t, z);
  const Interval& x = z.coords[0];
  const Interval& y = z.coords[1];
  switch (id) {
    case FieldId::Begin: {
      Interval v = Interval(2.0) * exp2rho(t) * cubic_g(x + y);
      return {v, -v};
    }
    case FieldId::End: {
      Interval u = inv_r(t);
      Interval u2 = sqr(u), u3 = powi(u, 3);
      Interval v = x * (Interval(0.5) * u2 - Interval(0.25) * u3) -
                   y * (Interval(0.5) * u2 + Interval(0.25) * u3);
      return {v, -v};
    }
    case FieldId::Original:
      throw std::invalid_argument("field_dt is not provided for the original field");
  }
  return {};
}

IntervalVector chart_map(ChartMap which, const Interval& t, const IntervalVector& z) {
  if (z.dim() != 2) throw ShapeError("chart_map expects a 2-vector");
  const Interval& a = z[0];
  const Interval& b = z[1];
  const Interval half(0.5);
  switch (which) {
    case ChartMap::Tb: return {t, a + b, half * (a - b)};
    case ChartMap::Tb_inv: return {t, half * a + b, half * a - b};
    case ChartMap::Te: return {t, a + b, a - b};
    case ChartMap::Te_inv: return {t, half * (a + b), half * (a - b)};
    case ChartMap::C:
      if (t.contains_zero()) throw DivisionByZeroInterval("C: r-interval touches 0");
      return {t, a, b / t};
    case ChartMap::C_inv:
      if (t.contains_zero()) throw DivisionByZeroInterval("C_inv: r-interval touches 0");
      return {t, a, b * t};
  }
  return {};
}

}  // namespace conefield
