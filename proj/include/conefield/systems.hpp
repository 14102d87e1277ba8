#pragma once

#include <array>
#include <string>
#include <vector>

#include "conefield/linalg.hpp"

namespace conefield {

// Begin: (x_b, y_b) in time rho = ln r.  End: (x_e, y_e) in time r.
// Original: (A, A') in time r.
enum class FieldId { Begin, End, Original };
enum class TimeScale { Rho, R };
enum class Chart { Begin, End, Original, Rho };

const char* field_name(FieldId id);
Chart chart_of(FieldId id);
const char* chart_name(Chart c);
std::array<const char*, 2> chart_labels(Chart c);

struct ChartMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TimeBox {
  Interval value;
  TimeScale scale;

  static TimeBox rho(double lo, double hi) { return {Interval::time_domain(lo, hi), TimeScale::Rho}; }
  static TimeBox r(double lo, double hi) { return {Interval::time_domain(lo, hi), TimeScale::R}; }
  static TimeBox of(FieldId id, const Interval& v) {
    return {v, id == FieldId::Begin ? TimeScale::Rho : TimeScale::R};
  }
};

struct StateBox {
  IntervalVector coords;
  Chart chart;
};

// s = e^{2 rho} for Begin; u = 1/r for End and Original. Half-infinite
// domains map to [0, e^{2 rho_max}] and [0, 1/r_min].
Interval exp2rho(const TimeBox& t);
Interval inv_r(const TimeBox& t);

IntervalVector field_eval(FieldId id, const TimeBox& t, const StateBox& z);
IntervalMatrix field_jacobian_z(FieldId id, const TimeBox& t, const StateBox& z);
IntervalVector field_dt(FieldId id, const TimeBox& t, const StateBox& z);

// Df = base + sum_k coeff[k] * dirs[k] with scalar coefficient enclosures.
// Every pointwise Jacobian over the box is obtained for some coefficient
// vector inside the coefficient box.
struct AffineJacobian {
  IntervalMatrix base;
  std::vector<IntervalMatrix> dirs;
  std::vector<Interval> coeffs;
  IntervalMatrix at(const std::vector<Interval>& c) const;
};
AffineJacobian field_jacobian_affine(FieldId id, const TimeBox& t, const StateBox& z);

enum class ChartMap { Tb, Tb_inv, Te, Te_inv, C, C_inv };
// Returns (t, z1', z2').
IntervalVector chart_map(ChartMap which, const Interval& t, const IntervalVector& z);

}  // namespace conefield
