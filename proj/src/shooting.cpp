#include "conefield/shooting.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace conefield {

void OrbitCandidate::validate() const {
  if (n < 1) throw std::invalid_argument("candidate n must be positive");
  if (!(delta_r > 0) || !(r_hat - delta_r > 0)) throw std::invalid_argument("candidate needs 0 < r- < r+");
}

double OrbitCandidate::rho_cover() const {
  return log(Interval(rnd::up(r_plus()))).hi();
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Failed: return "Failed";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<OrbitCandidate> default_candidates() {
  return {{1, 0.003288250, 4e-7}, {2, 0.001184020, 6e-8}, {3, 0.000650050, 3e-8},
          {4, 0.000424204, 2e-8}, {5, 0.000304427, 1e-8}, {6, 0.000232050, 8e-9}};
}

std::pair<Interval, IntervalVector> initial_set(const OrbitCandidate& cand, const HSetBlock& block_b) {
  cand.validate();
  Interval r(cand.r_minus(), cand.r_plus());
  // r^- and r^+ are decimal data; widen by an ulp so the box holds them
  r = Interval(rnd::down(r.lo()), rnd::up(r.hi()));
  Interval y(-block_b.d2, block_b.d2), d1(block_b.d1);
  // Tb: w = x_b + y_b, w' = (x_b - y_b)/2; C: A = w, A' = w'/r
  Interval w = d1 + y, wp = (d1 - y) / Interval(2.0);
  return {r, IntervalVector{w, wp / r}};
}

FlowJob face_job(const ProofSettings& s, const Interval& R, const Interval& Y, bool with_variational) {
  const Interval d1(s.db1), two(2.0);
  const double rbar = R.mid(), ybar = Y.mid();
  const Interval rb(rbar), q = d1 - Interval(ybar);
  const double Abar = (d1 + Interval(ybar)).mid();
  const double Pbar = (q / (two * rb)).mid();
  const double a = -(q / (two * sqr(rb))).mid();
  const double b = -(Interval(1.0) / (two * rb)).mid();

  const Interval rho = R - rb, eta = Y - Interval(ybar);
  const Interval dA = d1 + Interval(ybar) - Interval(Abar);
  const Interval a_true = -q / (two * sqr(rb)), b_true = -(Interval(1.0) / (two * rb));
  // P0 = (d1 - y)/(2r) around (rbar, ybar); the last term is the exact
  // second-order remainder rho (q rho + eta rbar) / (2 rbar^2 (rbar + rho)).
  Interval c2 = (q / (two * rb) - Interval(Pbar)) + (a_true - Interval(a)) * rho + (b_true - Interval(b)) * eta -
                Interval(b) * dA + rho * (q * rho + eta * rb) / (two * sqr(rb) * R);

  LohnerSet set;
  set.center = {rbar, Abar, Pbar};
  set.C = {{1, 0, 0}, {0, 1, 0}, {a, b, 1}};
  set.r0 = IntervalVector{rho, eta + dA, c2};
  set.B = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  set.Binv = IntervalMatrix::identity(3);
  set.r = IntervalVector(3);

  FlowJob job;
  job.id = FieldId::Original;
  job.x0 = set.hull();
  job.t0 = job.x0[0];
  job.set0 = set;
  job.order = s.order;
  job.tol = s.tol;
  job.max_steps = s.max_steps;
  job.with_variational = with_variational;
  if (with_variational) {
    IntervalMatrix J(3, 3);
    J(0, 0) = Interval(1.0);
    J(1, 1) = Interval(1.0);
    J(2, 0) = -(d1 - Y) / (two * sqr(R));
    J(2, 1) = -(Interval(1.0) / (two * R));
    J(2, 2) = Interval(1.0);
    job.V0 = LohnerMatrix::from_interval(J);
  }
  return job;
}

SectionSpec end_section(const ProofSettings& s, int side) {
  // y_e = A - A' = side * d^e_2
  return SectionSpec{{0.0, 1.0, -1.0}, side * s.de2, Direction::Both};
}

IntervalMatrix section_jacobian(const IntervalMatrix& e) {
  return IntervalMatrix{{e(0, 0), e(0, 1)}, {e(1, 0) + e(2, 0), e(1, 1) + e(2, 1)}};
}

Transport transport(const OrbitCandidate& cand, const ProofSettings& s) {
  auto [R, box] = initial_set(cand, s.block_b());
  (void)box;
  const Interval Y(-s.db2, s.db2);
  const SectionSpec sec = end_section(s, cand.end_side());
  const int k = cand.crossings_to_section();
  Transport t;
  t.minus = integrate_to_section(face_job(s, Interval(R.lo()), Y, false), sec, k, s.t_max);
  t.plus = integrate_to_section(face_job(s, Interval(R.hi()), Y, false), sec, k, s.t_max);
  t.full = integrate_to_section(face_job(s, R, Y, true), sec, k, s.t_max);
  return t;
}

Interval derivative_enclosure(const DerivativeInputs& in) {
  const IntervalMatrix& D = in.DP;
  return D(1, 0) + D(1, 1) * in.yu_lip_rescaled - in.xs_lip * (D(0, 0) + D(0, 1) * in.yu_lip_rescaled);
}

namespace {

Interval sym(double b) { return Interval(-b, b); }

std::vector<Interval> split(const Interval& x, int k) {
  std::vector<Interval> out;
  for (int i = 0; i < k; ++i) {
    double lo = i == 0 ? x.lo() : x.lo() + (x.hi() - x.lo()) * i / k;
    double hi = i + 1 == k ? x.hi() : x.lo() + (x.hi() - x.lo()) * (i + 1) / k;
    out.emplace_back(lo, hi);
  }
  return out;
}

}  // namespace

OrbitProofCertificate prove_orbit(const OrbitCandidate& cand, const ProofSettings& s_in) {
  auto t0 = std::chrono::steady_clock::now();
  cand.validate();
  ProofSettings s = s_in;
  if (s.r_subdivisions < 1 || s.y_subdivisions < 1) throw std::invalid_argument("subdivision counts must be >= 1");
  if (s.rho_star == 0) s.rho_star = cand.rho_cover();
  OrbitProofCertificate c;
  c.candidate = cand;
  c.section_side = cand.end_side();
  c.r_subdivisions = s.r_subdivisions;
  c.y_subdivisions = s.y_subdivisions;
  auto done = [&](Verdict v, std::string why) {
    c.verdict = v;
    c.reason = std::move(why);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
  };
  if (cand.rho_cover() > s.rho_star)
    return done(Verdict::Failed, "r+ lies outside the begin block time domain");

  const HSetBlock nb = s.block_b(), ne = s.block_e();
  c.block_b = verify_block(FieldId::Begin, nb);
  c.block_e = verify_block(FieldId::End, ne);
  if (!c.block_b.verdict) return done(Verdict::Failed, "begin block is not isolating");
  if (!c.block_e.verdict) return done(Verdict::Failed, "end block is not isolating");
  try {
    c.bounds_b = manifold_bounds(FieldId::Begin, nb, {s.a});
    c.bounds_e = manifold_bounds(FieldId::End, ne, {s.a});
  } catch (const PreconditionNotCertified& e) {
    return done(Verdict::Failed, e.what());
  }
  c.xs_lip = sym(c.bounds_e.lip_t.hi());
  auto [R, box] = initial_set(cand, nb);
  (void)box;
  c.yu_lip_rescaled = sym(rnd::div_up(c.bounds_b.lip_t.hi(), R.lo()));

  const Interval Y(-s.db2, s.db2);
  const SectionSpec sec = end_section(s, cand.end_side());
  const int k = cand.crossings_to_section();
  try {
    CrossingResult m = integrate_to_section(face_job(s, Interval(R.lo()), Y, false), sec, k, s.t_max);
    CrossingResult p = integrate_to_section(face_job(s, Interval(R.hi()), Y, false), sec, k, s.t_max);
    c.cover_minus = m.state[1] + m.state[2];
    c.cover_plus = p.state[1] + p.state[2];

    // Slices are hull-combined. When only F' straddles 0 the y_b range is
    // split further, up to max_y_subdivisions.
    for (int ny = s.y_subdivisions;; ny *= 2) {
      std::optional<Interval> rt, fp;
      std::optional<IntervalMatrix> dp;
      int count = -1;
      for (const Interval& Rs : split(R, s.r_subdivisions))
        for (const Interval& Ys : split(Y, ny)) {
          FlowJob job = face_job(s, Rs, Ys, true);
          CrossingResult f = integrate_to_section(job, sec, k, s.t_max);
          int cnt = count_axis_crossings(job, f);
          if (count >= 0 && cnt != count)
            return done(Verdict::Inconclusive, "axis crossing counts differ between slices");
          count = cnt;
          IntervalMatrix D = section_jacobian(*f.jacobian);
          Interval F = derivative_enclosure({D, c.xs_lip, c.yu_lip_rescaled});
          rt = rt ? hull(*rt, f.t_cross) : f.t_cross;
          fp = fp ? hull(*fp, F) : F;
          dp = dp ? hull(*dp, D) : D;
        }
      c.return_time = *rt;
      c.F_prime = *fp;
      c.DP = *dp;
      c.crossing_count = count;
      c.y_subdivisions = ny;
      if (!c.F_prime.contains_zero() || ny * 2 > s.max_y_subdivisions) break;
    }
  } catch (const Inconclusive& e) {
    return done(Verdict::Inconclusive, std::string(e.what()) + "; subdivide the initial set");
  } catch (const NonTransversalCrossing& e) {
    return done(Verdict::Inconclusive, std::string(e.what()) + "; subdivide the initial set");
  } catch (const EnclosureFailure& e) {
    return done(Verdict::Inconclusive, std::string(e.what()) + "; lower tol or subdivide");
  } catch (const MaxTimeExceeded& e) {
    return done(Verdict::Failed, e.what());
  }

  std::string why = recheck(c, s);
  if (!why.empty()) {
    Verdict v = c.F_prime.contains_zero() && why.find("F'") != std::string::npos ? Verdict::Inconclusive
                                                                                   : Verdict::Failed;
    return done(v, why);
  }
  return done(Verdict::Proved, "all inequalities verified");
}

std::string recheck(const OrbitProofCertificate& c, const ProofSettings& s) {
  if (!c.block_b.verdict || !c.block_e.verdict) return "blocks not isolating";
  if (!(c.block_b.face_bounds[0].lo() > 0 && c.block_b.face_bounds[1].hi() < 0 && c.block_b.face_bounds[2].hi() < 0 &&
        c.block_b.face_bounds[3].lo() > 0))
    return "begin face bounds do not have the isolating signs";
  if (!(c.block_e.face_bounds[0].lo() > 0 && c.block_e.face_bounds[1].hi() < 0 && c.block_e.face_bounds[2].hi() < 0 &&
        c.block_e.face_bounds[3].lo() > 0))
    return "end face bounds do not have the isolating signs";
  if (!(c.bounds_b.E.lo() > 0) || !(c.bounds_e.E.lo() > 0)) return "cone constants not positive";
  if (c.xs_lip.hi() < rnd::div_up(c.bounds_e.m.hi(), c.bounds_e.E.lo()) * (1 - 1e-15)) return "x_s' bound too small";
  if (c.section_side != c.candidate.end_side()) return "wrong end section side";
  if (!(c.return_time.lo() >= s.r_star)) return "return time below r*";
  if (!(c.cover_minus.sign() * c.cover_plus.sign() < 0)) return "cover values do not change sign";
  if (!(c.cover_minus.mig() > s.de1 && c.cover_plus.mig() > s.de1)) return "cover magnitudes not above d^e_1";
  if (c.crossing_count != c.candidate.n) return "A'=0 crossing count differs from n";
  if (c.F_prime.contains_zero()) return "F' contains 0";
  return {};
}

std::vector<OrbitProofCertificate> prove_all(const std::vector<OrbitCandidate>& cands, const ProofSettings& s_in) {
  ProofSettings s = s_in;
  if (s.rho_star == 0 && !cands.empty()) s.rho_star = cands.front().rho_cover();
  std::vector<OrbitProofCertificate> out(cands.size());
  unsigned hw = s.threads > 0 ? static_cast<unsigned>(s.threads) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errs(cands.size());
  for (unsigned w = 0; w < std::min<size_t>(hw, cands.size()); ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < cands.size();) {
        try {
          out[i] = prove_orbit(cands[i], s);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace conefield
