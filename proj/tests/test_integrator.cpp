#include <doctest.h>

#include <random>

#include "conefield/integrator.hpp"
#include "properties.hpp"

using namespace conefield;

namespace {

IntervalVector point3(double t, double a, double b) { return {Interval(t), Interval(a), Interval(b)}; }

double z_width(const IntervalVector& x) { return std::fmax(x[1].width(), x[2].width()); }

// independent 2x2 Jacobians in the z coordinates
std::array<double, 4> jac(FieldId id, double t, double a, double b) {
  switch (id) {
    case FieldId::Begin: {
      double s = std::exp(2 * t), S = a + b, gz = s * (1 - 3 * S * S);
      return {0.5 + gz, gz, -gz, -0.5 - gz};
    }
    case FieldId::End: {
      double u = 1 / t, S = a + b, c = u * u / 8 - 3 * S * S / 8;
      double gx = -u / 2 + c, gy = u / 2 + c;
      return {1 + gx, gy, -gx, -1 - gy};
    }
    default:
      return {0, 1, 1 / (4 * t * t) + 1 - 3 * a * a, -1 / t};
  }
}

}  // namespace

TEST_CASE("enclosures contain a 50-digit reference on random IVPs") {
  props::Result r = props::integrator_vs_reference(200, 20261016);
  INFO(r.first_failure);
  CHECK(r.cases == 600);
  CHECK(r.violations == 0);
}

TEST_CASE("origin stays at the origin") {
  for (auto [id, t0] : {std::pair{FieldId::Begin, -3.0}, {FieldId::End, 7.0}, {FieldId::Original, 2.0}}) {
    FlowJob job = FlowJob::make(id, point3(t0, 0, 0));
    auto steps = integrate_for(job, 0.5);
    IntervalVector e = steps.back().end_hull();
    CHECK(e[1].mag() <= 1e-14);
    CHECK(e[2].mag() <= 1e-14);
  }
}

TEST_CASE("width growth respects a Gronwall bound") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> z(-0.4, 0.4);
  const double h = 0.01, w = 1e-8;
  for (auto [id, t0] : {std::pair{FieldId::Begin, -2.0}, {FieldId::End, 8.0}, {FieldId::Original, 1.5}}) {
    for (int i = 0; i < 10; ++i) {
      double a = z(g), b = z(g);
      FlowJob job = FlowJob::make(id, {Interval(t0), Interval(a, a + w), Interval(b, b + w)});
      job.h0 = h;
      job.h_max = h;
      auto steps = integrate_for(job, h);
      REQUIRE(steps.size() == 1);
      // L from a dense sample of the tube
      const IntervalVector& tube = steps[0].tube;
      double L = 0;
      for (int p = 0; p <= 8; ++p)
        for (int q = 0; q <= 8; ++q)
          for (int k = 0; k <= 4; ++k) {
            double t = tube[0].lo() + tube[0].width() * k / 4;
            double aa = tube[1].lo() + tube[1].width() * p / 8, bb = tube[2].lo() + tube[2].width() * q / 8;
            auto J = jac(id, t, aa, bb);
            L = std::fmax(L, std::fmax(std::fabs(J[0]) + std::fabs(J[1]), std::fabs(J[2]) + std::fabs(J[3])));
          }
      CHECK(z_width(steps[0].end_hull()) <= w * std::exp(L * h) * (1 + 1e-3));
    }
  }
}

TEST_CASE("variational equations agree with finite differences") {
  props::Result r = props::variational_vs_fd(30, 77);
  INFO(r.first_failure);
  CHECK(r.violations == 0);
}

TEST_CASE("section Jacobian agrees with finite differences of crossings") {
  // first crossing of A = c for the original system
  SectionSpec sec{{0, 1, 0}, 0.1, Direction::Increasing};
  const double x0[3] = {1.5, -0.2, 0.45};
  FlowJob job = FlowJob::make(FieldId::Original, point3(x0[0], x0[1], x0[2]), true);
  IntervalMatrix J = flow_derivative(job, sec, 1, 10.0);
  const double h = 1e-6;
  for (int c = 0; c < 3; ++c) {
    double xp[3] = {x0[0], x0[1], x0[2]}, xm[3] = {x0[0], x0[1], x0[2]};
    xp[c] += h;
    xm[c] -= h;
    CrossingResult rp = integrate_to_section(FlowJob::make(FieldId::Original, point3(xp[0], xp[1], xp[2])), sec, 1, 10);
    CrossingResult rm = integrate_to_section(FlowJob::make(FieldId::Original, point3(xm[0], xm[1], xm[2])), sec, 1, 10);
    for (int r = 0; r < 3; ++r) {
      double fd = (rp.state[r].mid() - rm.state[r].mid()) / (2 * h);
      double dist = std::fmax(0.0, std::fmax(J(r, c).lo() - fd, fd - J(r, c).hi()));
      INFO("entry " << r << "," << c << " fd " << fd << " J " << to_string(J(r, c)));
      CHECK(dist <= 1e-4 * std::fmax(1.0, std::fabs(fd)));
    }
  }
}

TEST_CASE("zero-time crossing gives the identity on section coordinates") {
  // start just below A = 0.1 moving up; tangent directions t and A' are kept
  const double eps = 1e-9, P = 0.4;
  SectionSpec sec{{0, 1, 0}, 0.1, Direction::Increasing};
  FlowJob job = FlowJob::make(FieldId::Original, point3(2.0, 0.1 - eps * P, P), true);
  IntervalMatrix J = flow_derivative(job, sec, 1, 10.0);
  for (int c : {0, 2})
    for (int r = 0; r < 3; ++r) {
      double want = r == c ? 1.0 : 0.0;
      CHECK(J(r, c).lo() <= want + 1e-6);
      CHECK(J(r, c).hi() >= want - 1e-6);
      CHECK(J(r, c).width() < 1e-6);
    }
}

TEST_CASE("a start on the section is not its own crossing") {
  // A' = 0 at A = 0.5 with A'' > 0: the next zero of A' is the turning point
  SectionSpec sec{{0, 0, 1}, 0.0, Direction::Both};
  FlowJob job = FlowJob::make(FieldId::Original, point3(30.0, 0.5, 0.0));
  CrossingResult c = integrate_to_section(job, sec, 1, 60.0);
  CHECK(c.t_cross.lo() > job.t0.hi());
  CHECK(c.transversal);
  CHECK(c.state[2].contains(0.0));
  CHECK(c.state[1].lo() > 1.0);  // beyond the well bottom A = 1
}

TEST_CASE("crossing results are transversal and enclose the refined time") {
  SectionSpec sec{{0, 1, -1}, 0.01, Direction::Both};
  FlowJob job = FlowJob::make(FieldId::Original, point3(0.00328825, 0.125, 0.125 / (2 * 0.00328825)));
  CrossingResult c = integrate_to_section(job, sec, 2, 40.0);
  CHECK(c.transversal);
  CHECK(c.t_cross.lo() >= 6.0);
  Interval s = c.state[1] - c.state[2] - Interval(0.01);
  CHECK(s.contains(0.0));
  CHECK(c.t_cross.width() < 1e-9);
}

TEST_CASE("axis crossing count of a monotone segment is zero") {
  SectionSpec sec{{0, 1, 0}, 0.3, Direction::Both};
  FlowJob job = FlowJob::make(FieldId::Original, point3(1.0, 0.125, 0.5));
  CrossingResult c = integrate_to_section(job, sec, 1, 10.0);
  CHECK(count_axis_crossings(job, c) == 0);
}

TEST_CASE("max time is reported") {
  SectionSpec sec{{0, 1, 0}, 5.0, Direction::Both};  // never reached near the origin
  FlowJob job = FlowJob::make(FieldId::Original, point3(1.0, 0.0, 0.0));
  CHECK_THROWS_AS(integrate_to_section(job, sec, 1, 3.0), MaxTimeExceeded);
}

TEST_CASE("shrinking tol does not widen the endpoint") {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> z(-0.4, 0.4);
  for (int i = 0; i < 6; ++i) {
    FieldId id = i % 2 ? FieldId::End : FieldId::Original;
    double t0 = id == FieldId::End ? 6.0 : 1.0, a = z(g), b = z(g);
    double prev = INFINITY;
    IntervalVector prev_box;
    for (double tol : {1e-10, 1e-12, 1e-14}) {
      FlowJob job = FlowJob::make(id, point3(t0, a, b));
      job.tol = tol;
      auto steps = integrate_for(job, 1.0);
      IntervalVector e = steps.back().end_hull();
      if (prev_box.dim())
        for (int c = 1; c < 3; ++c) CHECK(e[c].width() <= std::nextafter(prev_box[c].width(), INFINITY));
      prev = z_width(e);
      prev_box = e;
    }
    CHECK(prev < 1e-12);
  }
}

TEST_CASE("job validation") {
  FlowJob job = FlowJob::make(FieldId::Original, point3(1, 0, 0));
  job.order = 3;
  CHECK_THROWS_AS(job.validate(), std::invalid_argument);
  job.order = 20;
  job.tol = 0;
  CHECK_THROWS_AS(job.validate(), std::invalid_argument);
  FlowJob bad = FlowJob::make(FieldId::Original, IntervalVector{Interval(1.0)});
  CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("a box with no validated tube fails") {
  FlowJob job = FlowJob::make(FieldId::Original, {Interval(1.0), Interval(-1e8, 1e8), Interval(-1e8, 1e8)});
  CHECK_THROWS_AS(integrate_for(job, 1.0), EnclosureFailure);
}
