#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <sstream>

#include "conefield/scout.hpp"

using namespace conefield;

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

// Independent oracle: Fehlberg 7(8) on the original system in r, from the
// exit face point (r0, x_b = d1, y_b). Counts sign changes of A'.
int oracle_extrema(double r0, double y_b, double r_end, double d1 = 0.125) {
  auto sys = [](const State& x, State& dx, double r) {
    dx[0] = x[1];
    dx[1] = -x[1] / r + x[0] / (4 * r * r) + x[0] - x[0] * x[0] * x[0];
  };
  State x{d1 + y_b, (d1 - y_b) / (2 * r0)};
  int changes = 0;
  double last = x[1];
  auto st = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_adaptive(st, sys, x, r0, r_end, 1e-6, [&](const State& s, double) {
    if (s[1] != 0 && last != 0 && (s[1] > 0) != (last > 0)) ++changes;
    if (s[1] != 0) last = s[1];
  });
  return changes;
}

const double kR1 = 0.003288250, kR3 = 0.000650050, kR6 = 0.000232050;

}  // namespace

TEST_CASE("orbit 1 has one extremum before the end section") {
  SimTrajectory tr = simulate(kR1, 0, 6.5, 1e-12);
  CHECK(tr.extrema() == 1);
  CHECK(oracle_extrema(kR1, 0, 6.5) == 1);
  // near (0, 0) by then
  const auto& last = tr.samples.back();
  CHECK(std::fabs(last.A) < 0.05);
  CHECK(std::fabs(last.Aprime) < 0.05);
}

TEST_CASE("orbit 6 has six extrema before the end section") {
  SimTrajectory tr = simulate(kR6, 0, 21.5, 1e-12);
  CHECK(tr.extrema() == 6);
  CHECK(oracle_extrema(kR6, 0, 21.5) == 6);
}

TEST_CASE("samples are strictly increasing in each scale") {
  for (SimScale sc : {SimScale::Rho, SimScale::R, SimScale::Mixed}) {
    SimTrajectory tr = simulate(kR1, 0, 5.0, 1e-10, sc);
    REQUIRE(tr.samples.size() > 10);
    for (size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].t > tr.samples[i - 1].t);
  }
  // Mixed: ln r below r = 1, r above
  SimTrajectory tr = simulate(kR1, 0, 5.0, 1e-10, SimScale::Mixed);
  CHECK(tr.samples.front().t == doctest::Approx(std::log(kR1)));
  CHECK(tr.samples.back().t == doctest::Approx(5.0));
}

TEST_CASE("equilibrium start stays at zero") {
  SimTrajectory tr = simulate(0.01, 0, 5.0, 1e-12, SimScale::R, 0.0);
  for (const auto& s : tr.samples) {
    CHECK(s.A == 0.0);
    CHECK(s.Aprime == 0.0);
  }
}

TEST_CASE("tolerance convergence") {
  SimTrajectory a = simulate(kR1, 0, 6.0, 1e-10), b = simulate(kR1, 0, 6.0, 1e-12);
  CHECK(a.samples.back().t == b.samples.back().t);
  CHECK(std::fabs(a.samples.back().A - b.samples.back().A) < 1e-6);
  CHECK(std::fabs(a.samples.back().Aprime - b.samples.back().Aprime) < 1e-6);
}

TEST_CASE("blow up is detected") {
  // the damping keeps |A| bounded for r > 0, so start beyond the cut
  CHECK_THROWS_AS(simulate(0.5, 0, 20.0, 1e-10, SimScale::R, 11.0), BlowUp);
  CHECK_NOTHROW(simulate(0.5, 0, 20.0, 1e-10, SimScale::R, 5.0));
}

TEST_CASE("bisection recovers the candidates") {
  ScoutSettings s;
  OrbitCandidate c1 = bisect_candidates(1, {0.003, 0.004}, s);
  CHECK(c1.n == 1);
  CHECK(std::fabs(c1.r_hat - kR1) <= 1e-6);
  CHECK(c1.delta_r > 0);

  auto br = scan_brackets(3, 1e-4, 1e-2, 60, s);
  bool found = false;
  for (auto b : br) {
    try {
      OrbitCandidate c3 = bisect_candidates(3, b, s);
      if (std::fabs(c3.r_hat - kR3) <= 1e-6) found = true;
    } catch (const NoSignChange&) {
    }
  }
  CHECK(found);
}

TEST_CASE("same-sign bracket throws NoSignChange") {
  ScoutSettings s;
  CHECK_THROWS_AS(bisect_candidates(1, {0.0031, 0.0032}, s), NoSignChange);
}

TEST_CASE("trace CSV header") {
  SimTrajectory tr = simulate(kR1, 0, 1.0, 1e-10);
  std::ostringstream os;
  write_csv(os, tr);
  const std::string text = os.str();
  CHECK(text.substr(0, text.find('\n')) == "scale,t,A,Aprime,xe,ye");
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(tr.samples.size()) + 1);
}
