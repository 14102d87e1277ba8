#include "conefield/integrator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <numeric>

namespace conefield {

namespace {

PointMatrix identity_point(size_t n) {
  PointMatrix m(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

IntervalVector from_point(const PointVector& v) {
  IntervalVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Interval(v[i]);
  return out;
}

Interval dot(const std::vector<double>& l, const IntervalVector& x) {
  Interval s(0.0);
  for (size_t i = 0; i < l.size(); ++i)
    if (l[i] != 0.0) s += Interval(l[i]) * x[i];
  return s;
}

// Contracts x to its part on the hyperplane l.x = c (two sweeps of
// constraint propagation). Returns nullopt when the box misses it.
std::optional<IntervalVector> section_slice(const IntervalVector& x, const std::vector<double>& l, double c) {
  IntervalVector y = x;
  for (int sweep = 0; sweep < 2; ++sweep)
    for (size_t i = 0; i < l.size(); ++i) {
      if (l[i] == 0.0) continue;
      Interval rest(c);
      for (size_t j = 0; j < l.size(); ++j)
        if (j != i && l[j] != 0.0) rest -= Interval(l[j]) * y[j];
      auto v = intersect(y[i], rest / Interval(l[i]));
      if (!v) return std::nullopt;
      y[i] = *v;
    }
  return y;
}

// Box centred at its midpoint: returns (mid, box - mid).
std::pair<PointVector, IntervalVector> split_mid(const IntervalVector& y) {
  PointVector c = y.mid();
  return {c, y - from_point(c)};
}

std::pair<PointMatrix, IntervalMatrix> split_mid(const IntervalMatrix& y) {
  PointMatrix c = y.mid();
  return {c, y - IntervalMatrix::from_point(c)};
}

// Orthonormal frame from the point matrix A. Columns are ordered by
// |A e_j| * weight_j, the largest first, before the QR factorization.
PointMatrix qr_frame(const PointMatrix& a, const std::vector<double>& weight) {
  const size_t n = a.size();
  std::vector<double> key(n);
  for (size_t j = 0; j < n; ++j) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += a[i][j] * a[i][j];
    key[j] = std::sqrt(s) * weight[j];
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return key[x] > key[y]; });
  Eigen::MatrixXd m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m(i, j) = a[i][order[j]];
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  PointMatrix out(n, std::vector<double>(n));
  bool ok = true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      out[i][j] = q(i, j);
      ok = ok && std::isfinite(q(i, j));
    }
  return ok ? out : identity_point(n);
}

IntervalVector box_inflate(const IntervalVector& w, double rel, double abs) {
  IntervalVector out(w.dim());
  for (size_t i = 0; i < w.dim(); ++i) out[i] = inflate(w[i], rel * w[i].width() + abs * std::fmax(1.0, w[i].mag()));
  return out;
}

IntervalMatrix box_inflate(const IntervalMatrix& w, double rel, double abs) {
  IntervalMatrix out = w;
  for (size_t i = 0; i < w.rows(); ++i)
    for (size_t j = 0; j < w.cols(); ++j)
      out(i, j) = inflate(w(i, j), rel * w(i, j).width() + abs * std::fmax(1.0, w(i, j).mag()));
  return out;
}

IntervalVector intersect_or_keep(const IntervalVector& a, const IntervalVector& b) {
  IntervalVector out = a;
  for (size_t i = 0; i < a.dim(); ++i)
    if (auto x = intersect(a[i], b[i])) out[i] = *x;
  return out;
}

IntervalMatrix intersect_or_keep(const IntervalMatrix& a, const IntervalMatrix& b) {
  IntervalMatrix out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (auto x = intersect(a(i, j), b(i, j))) out(i, j) = *x;
  return out;
}

bool interior(const IntervalVector& z, const IntervalVector& w) {
  for (size_t i = 0; i < z.dim(); ++i)
    if (!z[i].subset_of(w[i])) return false;
  return true;
}

bool interior(const IntervalMatrix& z, const IntervalMatrix& w) { return z.subset_of(w); }

// First-order Picard: find W with X0 + [0,h] f(W) inside W.
std::optional<IntervalVector> apriori(FieldId id, const IntervalVector& x0, double h) {
  const Interval H(0.0, h);
  try {
    IntervalVector w = x0 + H * ext_field(id, x0);
    for (int it = 0; it < 20; ++it) {
      IntervalVector trial = box_inflate(w, 0.2, 1e-15);
      IntervalVector z = x0 + H * ext_field(id, trial);
      if (interior(z, trial)) {
        // contract a little; each iterate is again an enclosure
        for (int k = 0; k < 3; ++k) z = intersect_or_keep(z, x0 + H * ext_field(id, z));
        return z;
      }
      w = hull(z, w);
    }
  } catch (const IntervalError&) {
  }
  return std::nullopt;
}

// Linear Picard for the variational tube: W_V = I + [0,h] Df(W) W_V.
std::optional<IntervalMatrix> apriori_var(const IntervalMatrix& df, double h) {
  const Interval H(0.0, h);
  const IntervalMatrix I = IntervalMatrix::identity(df.rows());
  IntervalMatrix hd = H * df;
  IntervalMatrix w = I + hd;
  for (int it = 0; it < 30; ++it) {
    IntervalMatrix trial = box_inflate(w, 0.2, 1e-15);
    IntervalMatrix z = I + hd * trial;
    if (interior(z, trial)) {
      for (int k = 0; k < 3; ++k) z = intersect_or_keep(z, I + hd * z);
      return z;
    }
    w = hull(z, w);
  }
  return std::nullopt;
}

double max_mag(const IntervalVector& v) {
  double m = 0;
  for (const auto& x : v) m = std::fmax(m, x.mag());
  return m;
}

struct Attempt {
  std::optional<StepEnclosure> result;
  double err = 0;
};

Attempt try_step(const FlowJob& job, const StepEnclosure& cur, double h) {
  Attempt at;
  const int p = job.order;
  const LohnerSet& X = cur.end;
  const IntervalVector x0 = X.hull();
  auto w = apriori(job.id, x0, h);
  if (!w) return at;
  IntervalVector W = *w;
  const Interval H(0.0, h), hI(h);
  const IntervalMatrix I3 = IntervalMatrix::identity(3);
  try {
    Jet jc = taylor_jet(job.id, from_point(X.center), p);
    Jet jx = taylor_jet(job.id, x0, p, &I3);
    // Higher-order tube from the jet of the start set refines W.
    Jet jw = taylor_jet(job.id, W, p + 1);
    IntervalVector rem_c = jw.x[p + 1];
    IntervalVector tube2 = horner(std::vector<IntervalVector>(jx.x.begin(), jx.x.end()), H) + powi(H, p + 1) * rem_c;
    W = intersect_or_keep(W, tube2);

    std::optional<IntervalMatrix> wv;
    if (job.with_variational) {
      wv = apriori_var(ext_jacobian(job.id, W), h);
      if (!wv) return at;
    }
    jw = taylor_jet(job.id, W, p + 1, wv ? &*wv : nullptr);
    rem_c = jw.x[p + 1];
    const Interval hp = powi(hI, p + 1);
    IntervalVector rem = hp * rem_c;
    at.err = max_mag(rem);
    if (!std::isfinite(at.err)) return at;
    if (at.err > job.tol * std::fmax(1.0, max_mag(x0))) return at;

    StepEnclosure s;
    s.h = h;
    s.err = at.err;
    s.t_step = Interval(cur.t_step.hi(), rnd::add_up(cur.t_step.hi(), h));
    s.start = X;
    s.V_start = cur.V_end;
    s.tube = W;
    s.center_coeffs = jc.x;
    s.dcoeffs = jx.V;
    s.rem_coeff = rem_c;

    // Lohner step for the set, doubleton form: the image of the initial
    // box is carried exactly by C r0, only errors go into the QR frame.
    IntervalVector y = horner(jc.x, hI) + rem;
    IntervalMatrix dt = horner(jx.V, hI);
    IntervalMatrix MC = dt * IntervalMatrix::from_point(X.C);
    IntervalMatrix MB = dt * IntervalMatrix::from_point(X.B);
    auto [c_new, e] = split_mid(y);
    auto [C_new, dC] = split_mid(MC);
    e = e + dC * X.r0;
    std::vector<double> wts(3);
    for (int j = 0; j < 3; ++j) wts[j] = std::fmax(X.r[j].mag(), 1e-300);
    PointMatrix B_new = qr_frame(MB.mid(), wts);
    IntervalMatrix Binv = verified_inverse(B_new);
    LohnerSet nx;
    nx.center = c_new;
    nx.C = C_new;
    nx.r0 = X.r0;
    nx.B = B_new;
    nx.Binv = Binv;
    nx.r = (Binv * MB) * X.r + Binv * e;
    s.end = nx;

    if (job.with_variational) {
      s.var_rem_coeff = jw.V[p + 1];
      IntervalMatrix A = dt + hp * jw.V[p + 1];
      const LohnerMatrix& V = *cur.V_end;
      IntervalMatrix AVc = A * IntervalMatrix::from_point(V.Vc);
      IntervalMatrix AB = A * IntervalMatrix::from_point(V.B);
      auto [vc_new, E] = split_mid(AVc);
      std::vector<double> vw(3);
      for (int j = 0; j < 3; ++j) {
        double m = 0;
        for (int i = 0; i < 3; ++i) m = std::fmax(m, V.R(j, i).mag());
        vw[j] = std::fmax(m, 1e-300);
      }
      PointMatrix VB = qr_frame(AB.mid(), vw);
      IntervalMatrix VBinv = verified_inverse(VB);
      LohnerMatrix nv;
      nv.Vc = vc_new;
      nv.B = VB;
      nv.Binv = VBinv;
      nv.R = (VBinv * AB) * V.R + VBinv * E;
      s.V_end = nv;
    }
    // the endpoint hull also lies in the tube
    at.result = std::move(s);
  } catch (const IntervalError&) {
    at.result.reset();
  } catch (const ShapeError&) {
    at.result.reset();
  }
  return at;
}

}  // namespace

LohnerSet LohnerSet::from_box(const IntervalVector& box) {
  LohnerSet s;
  auto [c, r] = split_mid(box);
  s.center = c;
  s.C = identity_point(box.dim());
  s.r0 = r;
  s.B = identity_point(box.dim());
  s.Binv = IntervalMatrix::identity(box.dim());
  s.r = IntervalVector(box.dim());
  return s;
}

IntervalVector LohnerSet::hull() const {
  return from_point(center) + IntervalMatrix::from_point(C) * r0 + IntervalMatrix::from_point(B) * r;
}

LohnerMatrix LohnerMatrix::from_interval(const IntervalMatrix& m) {
  LohnerMatrix v;
  auto [c, r] = split_mid(m);
  v.Vc = c;
  v.B = identity_point(m.rows());
  v.Binv = IntervalMatrix::identity(m.rows());
  v.R = r;
  return v;
}

IntervalMatrix LohnerMatrix::hull() const { return IntervalMatrix::from_point(Vc) + IntervalMatrix::from_point(B) * R; }

FlowJob FlowJob::make(FieldId id, const IntervalVector& x0, bool with_variational) {
  FlowJob j;
  j.id = id;
  j.x0 = x0;
  j.t0 = x0.dim() > 0 ? x0[0] : Interval(0.0);
  j.with_variational = with_variational;
  return j;
}

void FlowJob::validate() const {
  if (order < 5 || order > 40) throw std::invalid_argument("order must be in [5, 40]");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (!(h0 > 0) || !(h_max > 0)) throw std::invalid_argument("step sizes must be positive");
  if (!set0 && x0.dim() != 3) throw ShapeError("x0 must be (time, z1, z2)");
}

LohnerSet FlowJob::initial_set() const { return set0 ? *set0 : LohnerSet::from_box(x0); }

IntervalVector StepEnclosure::eval(const Interval& tau) const {
  const int p = static_cast<int>(center_coeffs.size()) - 1;
  IntervalVector c = horner(center_coeffs, tau);
  IntervalMatrix d = horner(dcoeffs, tau);
  IntervalVector x = c + (d * IntervalMatrix::from_point(start.C)) * start.r0 +
                     (d * IntervalMatrix::from_point(start.B)) * start.r + powi(tau, p + 1) * rem_coeff;
  return intersect_or_keep(x, tube);
}

Interval StepEnclosure::eval_functional(const std::vector<double>& l, const Interval& tau) const {
  const int p = static_cast<int>(center_coeffs.size()) - 1;
  const IntervalMatrix d = horner(dcoeffs, tau);
  const size_t n = l.size();
  Interval v = dot(l, horner(center_coeffs, tau)) + powi(tau, p + 1) * dot(l, rem_coeff);
  // l^T d first, then each frame
  IntervalVector ld(n);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      if (l[i] != 0.0) ld[j] += Interval(l[i]) * d(i, j);
  for (const auto* frame : {&start.C, &start.B}) {
    const IntervalVector& coef = frame == &start.C ? start.r0 : start.r;
    for (size_t k = 0; k < n; ++k) {
      Interval row(0.0);
      for (size_t j = 0; j < n; ++j) row += ld[j] * Interval((*frame)[j][k]);
      v += row * coef[k];
    }
  }
  if (auto w = intersect(v, dot(l, eval(tau)))) return *w;
  return v;
}

IntervalMatrix StepEnclosure::eval_variational(const Interval& tau) const {
  if (!V_start) throw std::logic_error("step has no variational data");
  const int p = static_cast<int>(dcoeffs.size()) - 1;
  IntervalMatrix d = horner(dcoeffs, tau) + powi(tau, p + 1) * var_rem_coeff;
  return d * IntervalMatrix::from_point(V_start->Vc) + (d * IntervalMatrix::from_point(V_start->B)) * V_start->R;
}

StepEnclosure initial_enclosure(const FlowJob& job) {
  job.validate();
  StepEnclosure s;
  s.start = s.end = job.initial_set();
  s.tube = s.end.hull();
  s.h_next = job.h0;
  if (job.with_variational) s.V_start = s.V_end = job.V0 ? *job.V0 : LohnerMatrix::from_interval(IntervalMatrix::identity(3));
  return s;
}

StepEnclosure step(const FlowJob& job, const StepEnclosure& cur) {
  double h = std::fmin(cur.h_next, job.h_max);
  const int p = job.order;
  for (int attempt = 0; attempt <= 40; ++attempt) {
    Attempt a = try_step(job, cur, h);
    if (a.result) {
      StepEnclosure s = std::move(*a.result);
      // PI controller on the remainder magnitude
      double prev = cur.err > 0 ? cur.err : job.tol;
      // a remainder below one rounding unit of the state says nothing about h
      const double scale = std::fmax(1.0, max_mag(s.end.hull()));
      const double target = job.tol * scale;
      double fac = 5.0;
      if (s.err > std::numeric_limits<double>::epsilon() * scale)
        fac = 0.9 * std::pow(target / s.err, 0.7 / (p + 1)) * std::pow(std::fmax(prev, s.err) / target, 0.4 / (p + 1));
      fac = std::clamp(fac, 0.2, 5.0);
      s.h_next = std::fmin(h * fac, job.h_max);
      if (job.step_log) {
        IntervalVector e = s.end.hull();
        *job.step_log << to_decimal(s.tube[0].lo()) << ',' << to_decimal(s.tube[0].hi());
        for (size_t i = 0; i < e.dim(); ++i) *job.step_log << ',' << to_decimal(e[i].lo()) << ',' << to_decimal(e[i].hi());
        *job.step_log << '\n';
      }
      return s;
    }
    if (a.err > 0 && std::isfinite(a.err))
      h *= std::clamp(0.9 * std::pow(job.tol / a.err, 1.0 / (p + 1)), 0.1, 0.9);
    else
      h *= 0.5;
  }
  throw EnclosureFailure("no validated enclosure after 40 step reductions");
}

std::vector<StepEnclosure> integrate_for(const FlowJob& job, double T) {
  std::vector<StepEnclosure> out;
  StepEnclosure cur = initial_enclosure(job);
  while (cur.t_step.hi() < T) {
    if (static_cast<int>(out.size()) >= job.max_steps) throw MaxTimeExceeded("step budget exhausted");
    double left = T - cur.t_step.hi();
    StepEnclosure prev = cur;
    if (prev.h_next > left) prev.h_next = left;
    cur = step(job, prev);
    out.push_back(cur);
    if (left - cur.h < 1e-15 * std::fmax(1.0, T)) break;
  }
  return out;
}

namespace {

struct Piece {
  size_t step;
  Interval tau;  // local time in the step
};

struct Zone {
  std::vector<Piece> pieces;
  int dir = 0;        // sign of l.f in the zone
  int before = 0;     // sign of s before the zone (0: unknown)
  int after = 0;
};

// Splits each step into pieces where s = l.x - c has a fixed sign or l.f
// has a fixed sign, and groups the latter into crossing zones.
class ZoneTracker {
 public:
  ZoneTracker(FieldId id, const SectionSpec& sec, bool axis) : id_(id), sec_(sec), axis_(axis) {}

  void start(const IntervalVector& x0) { sign_ = (dot(sec_.functional, x0) - Interval(sec_.level)).sign(); }

  // Local times beyond local_max are not examined.
  void feed(const std::vector<StepEnclosure>& steps, size_t idx, double local_max = INFINITY) {
    const StepEnclosure& st = steps[idx];
    classify(st, idx, Interval(0.0, std::fmin(st.h, std::fmax(local_max, 0.0))), 0);
  }

  std::vector<Zone> crossings;  // zones with a verified sign change
  bool in_zone() const { return open_.has_value(); }
  const std::optional<Zone>& open_zone() const { return open_; }

 private:
  void classify(const StepEnclosure& st, size_t idx, const Interval& T, int depth) {
    IntervalVector x = st.eval(T);
    int s = (st.eval_functional(sec_.functional, T) - Interval(sec_.level)).sign();
    if (s != 0) {
      definite(s);
      return;
    }
    // transversality is only needed where s = 0
    auto on = section_slice(x, sec_.functional, sec_.level);
    if (!on) {
      definite(s);  // unreachable: s contains 0
      return;
    }
    Interval lf = dot(sec_.functional, ext_field(id_, *on));
    if (lf.sign() != 0) {
      zone_piece({idx, T}, lf.sign());
      return;
    }
    if (depth >= kMaxDepth) {
      if (axis_) throw Inconclusive("axis crossing not isolated; subdivide the initial set");
      throw NonTransversalCrossing("l.f contains 0 at a candidate section crossing");
    }
    double m = T.mid();
    classify(st, idx, Interval(T.lo(), m), depth + 1);
    classify(st, idx, Interval(m, T.hi()), depth + 1);
  }

  void definite(int s) {
    if (open_) {
      Zone z = std::move(*open_);
      open_.reset();
      z.after = s;
      if (z.before != 0 && z.before != s) {
        if (z.dir != s) throw Inconclusive("inconsistent crossing zone");
        if (sec_.direction == Direction::Both || (sec_.direction == Direction::Increasing) == (s > 0))
          crossings.push_back(std::move(z));
      }
    }
    sign_ = s;
  }

  void zone_piece(const Piece& p, int dir) {
    if (!open_) {
      open_ = Zone{};
      open_->dir = dir;
      open_->before = sign_;
    } else if (open_->dir != dir) {
      if (axis_) throw Inconclusive("sign of the axis derivative changes inside a zone");
      throw NonTransversalCrossing("l.f changes sign inside a crossing zone");
    }
    open_->pieces.push_back(p);
  }

  static constexpr int kMaxDepth = 16;
  FieldId id_;
  SectionSpec sec_;
  bool axis_;
  int sign_ = 0;
  std::optional<Zone> open_;
};

Interval global_tau(const std::vector<StepEnclosure>& steps, const Piece& p) {
  return Interval(steps[p.step].t_step.lo()) + p.tau;
}

// Interval Newton on the crossing time inside one zone piece. Pieces where
// the derivative enclosure is too loose for contraction are bisected.
void newton_pieces(FieldId id, const SectionSpec& sec, const StepEnclosure& st, Interval T, int depth, int& budget,
                   std::vector<Interval>& out) {
  const Interval c(sec.level);
  auto split = [&](const Interval& t) {
    double mid = t.mid();
    newton_pieces(id, sec, st, Interval(t.lo(), mid), depth + 1, budget, out);
    newton_pieces(id, sec, st, Interval(mid, t.hi()), depth + 1, budget, out);
  };
  for (int it = 0; it < 30; ++it) {
    IntervalVector x = st.eval(T);
    if ((st.eval_functional(sec.functional, T) - c).sign() != 0) return;
    Interval lf = dot(sec.functional, ext_field(id, x));
    if (lf.sign() == 0) {
      // the zone guarantees transversality on the section; this is only a
      // loose derivative over the piece
      if (depth < 40 && budget-- > 0 && T.lo() < T.hi()) return split(T);
      break;
    }
    double m = T.mid();
    Interval sm = st.eval_functional(sec.functional, Interval(m)) - c;
    auto I = intersect(T, Interval(m) - sm / lf);
    if (!I) return;
    bool slow = I->width() > 0.5 * T.width();
    T = *I;
    if (!slow) continue;
    // Bisect only while the loose derivative, not the spread of the set,
    // stops the contraction.
    bool loose = sm.width() < 0.25 * T.width() * lf.mig();
    if (loose && depth < 40 && budget-- > 0 && T.lo() < T.hi()) return split(T);
    break;
  }
  out.push_back(T);
}

CrossingResult refine(FieldId id, const SectionSpec& sec, const std::vector<StepEnclosure>& steps, const Zone& z,
                      bool with_var) {
  CrossingResult out;
  out.id = id;
  out.transversal = true;
  std::optional<IntervalVector> state;
  std::optional<Interval> tau;
  std::optional<IntervalMatrix> jac;
  for (const Piece& p : z.pieces) {
    const StepEnclosure& st = steps[p.step];
    std::vector<Interval> roots;
    int budget = 256;
    newton_pieces(id, sec, st, p.tau, 0, budget, roots);
    for (const Interval& T : roots) {
      auto on = section_slice(st.eval(T), sec.functional, sec.level);
      if (!on) continue;
      const IntervalVector& x = *on;
      state = state ? hull(*state, x) : x;
      Interval g = Interval(st.t_step.lo()) + T;
      tau = tau ? hull(*tau, g) : g;
      if (with_var) {
        IntervalVector F = ext_field(id, x);
        IntervalMatrix V = st.eval_variational(T);
        Interval lf = dot(sec.functional, F);
        // V - F (l^T V) / (l.F)
        IntervalMatrix P = V;
        for (size_t j = 0; j < V.cols(); ++j) {
          Interval lv(0.0);
          for (size_t i = 0; i < V.rows(); ++i)
            if (sec.functional[i] != 0.0) lv += Interval(sec.functional[i]) * V(i, j);
          Interval k = lv / lf;
          for (size_t i = 0; i < V.rows(); ++i) P(i, j) = V(i, j) - F[i] * k;
        }
        jac = jac ? hull(*jac, P) : P;
      }
    }
  }
  if (!state) throw Inconclusive("crossing zone refined to nothing");
  out.state = *state;
  out.tau_cross = *tau;
  out.t_cross = out.state[0];
  out.jacobian = jac;
  return out;
}

}  // namespace

CrossingResult integrate_to_section(const FlowJob& job, const SectionSpec& sec, int n, double t_max) {
  if (n < 1) throw std::invalid_argument("crossing index must be positive");
  if (sec.functional.size() != 3) throw ShapeError("section functional must have 3 entries");
  auto steps = std::make_shared<std::vector<StepEnclosure>>();
  ZoneTracker tr(job.id, sec, false);
  StepEnclosure cur = initial_enclosure(job);
  tr.start(cur.end.hull());
  while (true) {
    if (static_cast<int>(steps->size()) >= job.max_steps) throw MaxTimeExceeded("step budget exhausted");
    StepEnclosure nx = step(job, cur);
    if (nx.tube[0].lo() > t_max) throw MaxTimeExceeded("time limit reached before the crossing");
    steps->push_back(nx);
    tr.feed(*steps, steps->size() - 1);
    if (static_cast<int>(tr.crossings.size()) >= n) break;
    cur = std::move(nx);
  }
  CrossingResult r = refine(job.id, sec, *steps, tr.crossings[n - 1], job.with_variational);
  r.steps = steps;
  return r;
}

int count_axis_crossings(const FlowJob& job, const CrossingResult& upto) {
  if (!upto.steps || upto.steps->empty()) throw std::invalid_argument("crossing result carries no steps");
  const auto& steps = *upto.steps;
  SectionSpec axis{{0.0, 0.0, 1.0}, 0.0, Direction::Both};
  ZoneTracker tr(upto.id, axis, true);
  tr.start(steps.front().start.hull());
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].t_step.lo() > upto.tau_cross.hi()) break;
    tr.feed(steps, i, rnd::sub_up(upto.tau_cross.hi(), steps[i].t_step.lo()));
  }
  int count = 0;
  auto zone_span = [&](const Zone& z) {
    Interval s = global_tau(steps, z.pieces.front());
    return hull(s, global_tau(steps, z.pieces.back()));
  };
  for (const Zone& z : tr.crossings) {
    Interval span = zone_span(z);
    if (span.hi() < upto.tau_cross.lo())
      ++count;
    else if (span.lo() <= upto.tau_cross.hi())
      throw Inconclusive("an A'=0 crossing overlaps the section crossing window");
  }
  if (tr.in_zone()) {
    Interval span = zone_span(*tr.open_zone());
    if (span.lo() < upto.tau_cross.lo()) throw Inconclusive("A'=0 zone still open at the section crossing");
  }
  (void)job;
  return count;
}

IntervalMatrix flow_derivative(const FlowJob& job, const SectionSpec& sec, int n, double t_max) {
  if (!job.with_variational) throw std::invalid_argument("flow_derivative needs with_variational");
  CrossingResult r = integrate_to_section(job, sec, n, t_max);
  return *r.jacobian;
}

}  // namespace conefield
