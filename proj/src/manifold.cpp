#include "conefield/manifold.hpp"

#include <algorithm>

namespace conefield {

HSetBlock HSetBlock::begin(double d1, double d2, double rho_max) {
  HSetBlock b;
  b.d1 = d1;
  b.d2 = d2;
  b.chart = Chart::Begin;
  b.time_domain = TimeBox::rho(-INFINITY, rho_max);
  b.side = BlockSide::UnstablePast;
  return b;
}

HSetBlock HSetBlock::end(double d1, double d2, double r_min) {
  HSetBlock b;
  b.d1 = d1;
  b.d2 = d2;
  b.chart = Chart::End;
  b.time_domain = TimeBox::r(r_min, INFINITY);
  b.side = BlockSide::StableFuture;
  return b;
}

void HSetBlock::validate() const {
  if (!(d1 > 0) || !(d2 > 0)) throw std::invalid_argument("block radii must be positive");
  if (face_subdivisions < 1) throw std::invalid_argument("face_subdivisions must be >= 1");
  const Interval& t = time_domain.value;
  if (side == BlockSide::UnstablePast && !(std::isinf(t.lo()) && t.lo() < 0))
    throw std::invalid_argument("unstable block needs a time domain (-inf, t0]");
  if (side == BlockSide::StableFuture && !(std::isinf(t.hi()) && t.hi() > 0))
    throw std::invalid_argument("stable block needs a time domain [t0, inf)");
}

namespace {

void check_chart(FieldId id, const HSetBlock& b) {
  if (b.chart != chart_of(id)) throw ChartMismatch("block chart does not match field");
  b.validate();
}

StateBox box(const HSetBlock& b, const Interval& x, const Interval& y) {
  return {IntervalVector{x, y}, b.chart};
}

// Hull of a field component over one face, split into k segments along the
// free coordinate.
Interval face_bound(FieldId id, const HSetBlock& b, bool x_face, double fixed, int comp) {
  const int k = b.face_subdivisions;
  const double r = x_face ? b.d2 : b.d1;
  std::optional<Interval> acc;
  for (int i = 0; i < k; ++i) {
    double lo = -r + 2.0 * r * i / k, hi = (i + 1 == k) ? r : -r + 2.0 * r * (i + 1) / k;
    Interval seg(lo, hi);
    StateBox z = x_face ? box(b, Interval(fixed), seg) : box(b, seg, Interval(fixed));
    Interval v = field_eval(id, b.time_domain, z)[comp];
    acc = acc ? hull(*acc, v) : v;
  }
  return *acc;
}

std::vector<std::vector<Interval>> vertices(const std::vector<Interval>& c) {
  std::vector<std::vector<Interval>> out{{}};
  for (const auto& ci : c) {
    std::vector<std::vector<Interval>> next;
    for (const auto& v : out) {
      auto a = v;
      a.push_back(Interval(ci.lo()));
      next.push_back(a);
      if (ci.hi() != ci.lo()) {
        auto b = v;
        b.push_back(Interval(ci.hi()));
        next.push_back(b);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

BlockCertificate verify_block(FieldId id, const HSetBlock& block) {
  check_chart(id, block);
  BlockCertificate c;
  c.face_bounds[0] = face_bound(id, block, true, block.d1, 0);
  c.face_bounds[1] = face_bound(id, block, true, -block.d1, 0);
  c.face_bounds[2] = face_bound(id, block, false, block.d2, 1);
  c.face_bounds[3] = face_bound(id, block, false, -block.d2, 1);
  c.verdict = c.face_bounds[0].lo() > 0 && c.face_bounds[1].hi() < 0 && c.face_bounds[2].hi() < 0 &&
              c.face_bounds[3].lo() > 0;
  return c;
}

Interval cone_E(FieldId id, const HSetBlock& block, const ConeForm& q, ConeMethod method) {
  check_chart(id, block);
  if (!(q.a > 0)) throw std::invalid_argument("cone coefficient a must be positive");
  StateBox z = box(block, Interval(-block.d1, block.d1), Interval(-block.d2, block.d2));
  AffineJacobian aff = field_jacobian_affine(id, block.time_domain, z);
  std::vector<IntervalMatrix> mats;
  for (const auto& v : vertices(aff.coeffs)) mats.push_back(cone_matrix(aff.at(v), {q.a, -1.0}));

  double gersh = INFINITY;
  for (const auto& s : mats) gersh = std::fmin(gersh, pd_lower_bound(s).lo());
  if (method == ConeMethod::Gershgorin || mats.front().rows() != 2) return Interval(gersh);

  auto certified = [&](double e) {
    return std::all_of(mats.begin(), mats.end(), [&](const IntervalMatrix& s) { return pd_sylvester_2x2(s, e); });
  };
  double lo = std::fmax(gersh, 0.0);
  if (!certified(lo)) return Interval(gersh);
  double hi = INFINITY;
  for (const auto& s : mats) hi = std::fmin(hi, std::fmin(s(0, 0).hi(), s(1, 1).hi()));
  hi = rnd::up(hi);
  if (certified(hi)) return Interval(hi);
  while (hi - lo > 1e-6 * std::fabs(hi)) {
    double mid = 0.5 * (lo + hi);
    if (certified(mid)) lo = mid; else hi = mid;
  }
  return Interval(lo, hi);
}

Interval m_constant(FieldId id, const HSetBlock& block, const ConeForm& q) {
  check_chart(id, block);
  StateBox z = box(block, Interval(-block.d1, block.d1), Interval(-block.d2, block.d2));
  IntervalVector dt = field_dt(id, block.time_domain, z);
  IntervalVector v{Interval(q.a) * dt[0], -dt[1]};
  return Interval(0.0, 2.0 * norm2_upper(v));
}

ManifoldCertificate manifold_bounds(FieldId id, const HSetBlock& block, const ConeForm& q, ConeMethod method) {
  BlockCertificate bc = verify_block(id, block);
  if (!bc.verdict) throw PreconditionNotCertified("isolating block not certified");
  ManifoldCertificate c;
  c.E = cone_E(id, block, q, method);
  if (!(c.E.lo() > 0)) throw PreconditionNotCertified("cone condition not certified");
  c.m = m_constant(id, block, q);
  c.lip_t = Interval(rnd::div_down(c.m.lo(), c.E.hi()), rnd::div_up(c.m.hi(), c.E.lo()));
  double m2 = rnd::mul_up(c.m.hi(), c.m.hi()), e2 = rnd::mul_down(c.E.lo(), c.E.lo());
  c.delta = Interval(0.0, rnd::div_up(rnd::mul_up(q.a, m2), e2));
  c.cone_slope = std::sqrt(q.a);
  return c;
}

AnalyticResult analytic_check(AnalyticKind which, const AnalyticParams& p) {
  const Interval one(1.0);
  const Interval d = Interval(p.d1) + Interval(p.d2);
  const Interval r(p.r_star);
  const Interval qa = sqrt(sqr(Interval(p.a)) + one);
  AnalyticResult res;
  switch (which) {
    case AnalyticKind::EndBlock: {
      Interval rhs = d * (one / (Interval(2.0) * r) + one / (Interval(8.0) * sqr(r)) + sqr(d) / Interval(8.0));
      res.holds = std::fmin(p.d1, p.d2) > rhs.hi();
      res.bound = rhs;
      break;
    }
    case AnalyticKind::EndCone: {
      Interval lhs = one / (Interval(2.0) * r) + Interval(0.75) * sqr(d) + Interval(p.E) / Interval(2.0);
      res.holds = lhs.hi() < 1.0;
      res.bound = Interval(2.0) - one / r - Interval(1.5) * sqr(d);  // supremum of admissible E
      break;
    }
    case AnalyticKind::EndM: {
      res.bound = d / (Interval(2.0) * sqr(r)) * (one + Interval(3.0) / (Interval(4.0) * r)) * qa;
      res.holds = p.d1 > 0 && p.d2 > 0 && p.r_star > 0;
      break;
    }
    case AnalyticKind::BeginBlock: {
      res.holds = std::fmax(p.d1, p.d2) < 0.5;
      break;
    }
    case AnalyticKind::BeginCone2: {
      Interval s = exp(Interval(2.0) * p.rho0);
      Interval val = Interval(p.a) * (s + one) - s;
      bool pre = sqr(d).hi() <= 1.0 / 3.0 && p.a > 0 && p.a <= 1.0;
      res.holds = pre && val.lo() > p.E;
      res.bound = val;
      break;
    }
    case AnalyticKind::BeginM: {
      double dm = std::fmax(p.d1, p.d2);
      res.holds = dm <= 0.5;
      res.bound = Interval(8.0) * Interval(dm) * exp(Interval(2.0) * p.rho0) * qa;
      break;
    }
  }
  return res;
}

Interval begin_lip_closed_form(double d1, double d2, const Interval& rho_star) {
  return Interval(4.0) * sqrt(Interval(2.0)) * exp(Interval(2.0) * rho_star) * (Interval(d1) + Interval(d2));
}

}  // namespace conefield
