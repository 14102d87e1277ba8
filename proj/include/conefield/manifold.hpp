#pragma once

#include <array>
#include <optional>

#include "conefield/systems.hpp"

namespace conefield {

enum class BlockSide { UnstablePast, StableFuture };

// [-d1, d1] x [-d2, d2] in the chart of its field; x is the unstable
// coordinate. face_subdivisions splits each face into that many segments.
struct HSetBlock {
  double d1 = 0;
  double d2 = 0;
  Chart chart = Chart::End;
  TimeBox time_domain{Interval(0.0), TimeScale::R};
  BlockSide side = BlockSide::StableFuture;
  int face_subdivisions = 1;

  // Begin blocks live on rho in (-inf, rho_max]; end blocks on r in [r_min, inf).
  static HSetBlock begin(double d1, double d2, double rho_max);
  static HSetBlock end(double d1, double d2, double r_min);
  void validate() const;
};

struct ConeForm {
  double a = 1.0;  // Q = diag(a, -1)
};

struct PreconditionNotCertified : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Faces in order: x = +d1, x = -d1 (normal component f1), y = +d2, y = -d2 (f2).
struct BlockCertificate {
  std::array<Interval, 4> face_bounds{Interval(0.0), Interval(0.0), Interval(0.0), Interval(0.0)};
  bool verdict = false;
};

enum class ConeMethod { Gershgorin, Sylvester };

struct ManifoldCertificate {
  Interval E{0.0};
  Interval m{0.0};
  Interval lip_t{0.0};
  Interval delta{0.0};
  double cone_slope = 1.0;
};

BlockCertificate verify_block(FieldId id, const HSetBlock& block);

// Largest certified E with Df^T Q + Q Df >= E Id over block x time. The
// cone matrix is affine in the scalar Jacobian coefficients, so its least
// eigenvalue (and the Geršgorin row bounds) are concave there and the
// minimum over the coefficient box sits at a vertex. Returns [E_cert, E_up]:
// E_cert is certified, E_up is the first value the criterion rejected.
Interval cone_E(FieldId id, const HSetBlock& block, const ConeForm& q,
                ConeMethod method = ConeMethod::Sylvester);

// m = 2 sup ||Q df/dt|| over block x time (the norm of the off-diagonal
// column of the extended cone matrix). Returned as [0, m_up].
Interval m_constant(FieldId id, const HSetBlock& block, const ConeForm& q);

ManifoldCertificate manifold_bounds(FieldId id, const HSetBlock& block, const ConeForm& q,
                                    ConeMethod method = ConeMethod::Sylvester);

enum class AnalyticKind { EndBlock, EndCone, EndM, BeginBlock, BeginCone2, BeginM };

struct AnalyticParams {
  double d1 = 0.25;
  double d2 = 0.25;
  double r_star = 2.0;
  Interval rho0{0.0};
  double a = 1.0;
  double E = 0.0;
};

struct AnalyticResult {
  bool holds = false;
  std::optional<Interval> bound;
};

// The hand-derived closed forms: block isolation, Geršgorin cone test and
// the m estimates, evaluated rigorously.
AnalyticResult analytic_check(AnalyticKind which, const AnalyticParams& p);

// 4 sqrt2 e^{2 rho*} (d1 + d2): the begin-side m/E with E -> 1.
Interval begin_lip_closed_form(double d1, double d2, const Interval& rho_star);

}  // namespace conefield
