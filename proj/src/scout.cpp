#include "conefield/scout.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <iomanip>

namespace conefield {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

void original(const State& z, State& dz, double r) {
  double A = z[0], P = z[1];
  dz[0] = P;
  dz[1] = -P / r + A / (4 * r * r) + A - A * A * A;
}

State face_point(double r0, double y_b, double d1) { return {d1 + y_b, (d1 - y_b) / (2 * r0)}; }

auto make_stepper(double tol) { return ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>()); }

double sample_time(double r, SimScale sc) {
  switch (sc) {
    case SimScale::Rho: return std::log(r);
    case SimScale::R: return r;
    case SimScale::Mixed: return r < 1 ? std::log(r) : r;
  }
  return r;
}

// Root of g along the dense output on [a, b] with g(a), g(b) of opposite sign.
template <class Stepper, class G>
double locate(Stepper& st, double a, double b, G g) {
  State z;
  st.calc_state(a, z);
  double ga = g(z);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::fabs(b); ++i) {
    double m = 0.5 * (a + b);
    st.calc_state(m, z);
    double gm = g(z);
    if ((gm < 0) == (ga < 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

int SimTrajectory::extrema() const {
  int n = 0;
  for (size_t i = 1; i < samples.size(); ++i)
    if ((samples[i - 1].Aprime > 0 && samples[i].Aprime <= 0) || (samples[i - 1].Aprime < 0 && samples[i].Aprime >= 0))
      ++n;
  return n;
}

SimTrajectory simulate(double r0, double y_b, double t_end, double tol, SimScale scale, double d1) {
  if (!(r0 > 0)) throw std::invalid_argument("simulate needs r0 > 0");
  if (!(t_end > r0)) throw std::invalid_argument("simulate needs t_end > r0");
  SimTrajectory tr;
  tr.scale = scale;
  State z = face_point(r0, y_b, d1);
  auto st = make_stepper(tol);
  st.initialize(z, r0, 1e-3 * r0);
  tr.samples.push_back({sample_time(r0, scale), z[0], z[1]});
  while (st.current_time() < t_end) {
    st.do_step(original);
    double r = std::min(st.current_time(), t_end);
    State w;
    st.calc_state(r, w);
    if (!(std::fabs(w[0]) <= 10.0)) throw BlowUp("|A| exceeded 10 at r = " + std::to_string(r));
    tr.samples.push_back({sample_time(r, scale), w[0], w[1]});
  }
  return tr;
}

namespace {

struct Run {
  std::optional<SectionHit> hit;
  double A_end = 0;
};

Run run_to_hit(double r0, double y_b, int k, double level, const ScoutSettings& s) {
  auto st = make_stepper(s.tol);
  st.initialize(face_point(r0, y_b, s.d1), r0, 1e-3 * r0);
  auto ye = [&](const State& z) { return z[0] - z[1] - level; };
  auto ap = [](const State& z) { return z[1]; };
  State prev = face_point(r0, y_b, s.d1);
  int hits = 0, axis = 0;
  while (st.current_time() < s.t_max) {
    auto [a, b] = st.do_step(original);
    const State& cur = st.current_state();
    if (!(std::fabs(cur[0]) <= s.blow_up)) return {std::nullopt, cur[0]};
    double axis_at = b + 1;
    if ((ap(prev) < 0) != (ap(cur) < 0)) axis_at = locate(st, a, b, ap);
    if ((ye(prev) < 0) != (ye(cur) < 0)) {
      double rc = locate(st, a, b, ye);
      if (axis_at < rc) ++axis;
      if (++hits == k) {
        State z;
        st.calc_state(rc, z);
        return {SectionHit{rc, z[0] + z[1], axis}, z[0]};
      }
      if (axis_at >= rc && axis_at <= b) ++axis;
    } else if (axis_at <= b) {
      ++axis;
    }
    prev = cur;
  }
  return {std::nullopt, st.current_state()[0]};
}

}  // namespace

std::optional<SectionHit> section_hit(double r0, double y_b, int k, double level, const ScoutSettings& s) {
  return run_to_hit(r0, y_b, k, level, s).hit;
}

double shooting_value(int n, double r0, const ScoutSettings& s) {
  OrbitCandidate c{n, r0, 0};
  Run run = run_to_hit(r0, 0.0, c.crossings_to_section(), c.end_side() * s.de2, s);
  if (run.hit) return run.hit->xe;
  return run.A_end < 0 ? -1.0 : 1.0;
}

std::vector<std::pair<double, double>> scan_brackets(int n, double lo, double hi, int samples,
                                                     const ScoutSettings& s) {
  if (!(0 < lo && lo < hi) || samples < 2) throw std::invalid_argument("scan_brackets needs 0 < lo < hi, samples >= 2");
  std::vector<std::pair<double, double>> out;
  double prev_r = lo, prev_v = 0;
  for (int i = 0; i < samples; ++i) {
    double r = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    double v = shooting_value(n, r, s);
    if (i > 0 && (prev_v < 0) != (v < 0)) out.emplace_back(prev_r, r);
    prev_r = r;
    prev_v = v;
  }
  return out;
}

OrbitCandidate bisect_candidates(int n, std::pair<double, double> bracket, const ScoutSettings& s) {
  auto [lo, hi] = bracket;
  if (!(0 < lo && lo < hi)) throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
  const double flo = shooting_value(n, lo, s), fhi = shooting_value(n, hi, s);
  if ((flo < 0) == (fhi < 0)) throw NoSignChange("shooting value has no sign change on the bracket");
  const bool lo_neg = flo < 0;
  double a = lo, b = hi;
  while (b - a > s.r_tol) {
    double m = 0.5 * (a + b);
    ((shooting_value(n, m, s) < 0) == lo_neg ? a : b) = m;
  }
  // A jump between a crossing and an escape is another orbit's boundary,
  // not a zero of x_e.
  OrbitCandidate c{n, a, 0};
  for (double r : {a, b}) {
    Run run = run_to_hit(r, 0.0, c.crossings_to_section(), c.end_side() * s.de2, s);
    if (!run.hit || run.hit->axis_crossings != n)
      throw NoSignChange("sign change is not a zero of x_e with " + std::to_string(n) + " extrema");
  }
  const double r_hat = 0.5 * (a + b);

  // distance to |x_e| = 2 de1 on each side, searched inside the bracket
  auto reach = [&](double edge) {
    if (std::fabs(shooting_value(n, edge, s)) < 2 * s.de1) return std::fabs(edge - r_hat);
    double near = r_hat, far = edge;
    while (std::fabs(far - near) > s.r_tol) {
      double m = 0.5 * (near + far);
      if (std::fabs(shooting_value(n, m, s)) >= 2 * s.de1)
        far = m;
      else
        near = m;
    }
    return std::fabs(far - r_hat);
  };
  double dr = std::min(reach(lo), reach(hi));
  if (s.delta_cap > 0) dr = std::min(dr, s.delta_cap);
  return OrbitCandidate{n, r_hat, dr};
}

void write_csv(std::ostream& os, const SimTrajectory& tr) {
  os << "scale,t,A,Aprime,xe,ye\n" << std::setprecision(17);
  for (const auto& p : tr.samples) {
    const char* tag = tr.scale == SimScale::R || (tr.scale == SimScale::Mixed && p.t >= 1) ? "r" : "rho";
    os << tag << ',' << p.t << ',' << p.A << ',' << p.Aprime << ',' << p.A + p.Aprime << ',' << p.A - p.Aprime << '\n';
  }
}

}  // namespace conefield
