#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "conefield/shooting.hpp"

namespace conefield {

// Nonrigorous companion to the proof: plain floating-point simulation of
// the original system. Nothing here feeds a Proved verdict.

struct BlowUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixed: t = ln r while r < 1, t = r afterwards.
enum class SimScale { Rho, R, Mixed };

struct SimSample {
  double t, A, Aprime;
};

struct SimTrajectory {
  std::vector<SimSample> samples;
  SimScale scale = SimScale::Mixed;

  // sign changes of A' along the samples
  int extrema() const;
};

struct ScoutSettings {
  double d1 = 0.125;   // begin exit face x_b = d1
  double de1 = 0.0015;
  double de2 = 0.01;
  double tol = 1e-12;
  double t_max = 60.0;  // in r
  double r_tol = 1e-12;  // bisection width on r
  double blow_up = 10.0;
  // Upper bound for the suggested delta_r; <= 0 means uncapped.
  double delta_cap = 0;
};

// Starts at the Π^b point (r0, x_b = d1, y_b) and integrates in r up to
// t_end (an r value). Throws BlowUp when |A| exceeds 10.
SimTrajectory simulate(double r0, double y_b, double t_end, double tol, SimScale scale = SimScale::Mixed,
                       double d1 = 0.125);

struct SectionHit {
  double r = 0;
  double xe = 0;
  int axis_crossings = 0;  // A' = 0 crossings before the hit
};

// k-th crossing of y_e = level; nullopt if it does not happen before
// t_max or the solution blows up.
std::optional<SectionHit> section_hit(double r0, double y_b, int k, double level, const ScoutSettings& s);

// x_e at the (n+1)-th crossing of the candidate's end section, y_b = 0.
// Trajectories that escape into a well before that crossing get +-1 with
// the sign of A at escape (x_e > 0 leaves towards A > 0).
double shooting_value(int n, double r0, const ScoutSettings& s);

// Sign-change brackets of shooting_value on a log grid over [lo, hi].
std::vector<std::pair<double, double>> scan_brackets(int n, double lo, double hi, int samples,
                                                     const ScoutSettings& s);

// r_hat by bisection on the sign of shooting_value; delta_r is the
// distance to the nearest point where |x_e| reaches 2 de1, capped by
// delta_cap. Throws NoSignChange.
OrbitCandidate bisect_candidates(int n, std::pair<double, double> bracket, const ScoutSettings& s);

// header: scale,t,A,Aprime,xe,ye
void write_csv(std::ostream& os, const SimTrajectory& tr);

}  // namespace conefield
