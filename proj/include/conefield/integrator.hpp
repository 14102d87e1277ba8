#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "conefield/taylor.hpp"

namespace conefield {

using PointVector = std::vector<double>;
using PointMatrix = std::vector<std::vector<double>>;

struct EnclosureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MaxTimeExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonTransversalCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Inconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// center + C r0 + B r (doubleton). C r0 carries the image of the initial
// box, B r the accumulated errors; Binv encloses the inverse of B.
struct LohnerSet {
  PointVector center;
  PointMatrix C;
  IntervalVector r0;
  PointMatrix B;
  IntervalMatrix Binv;
  IntervalVector r;

  static LohnerSet from_box(const IntervalVector& box);
  IntervalVector hull() const;
};

// Vc + B R: an interval matrix set with its own frame.
struct LohnerMatrix {
  PointMatrix Vc;
  PointMatrix B;
  IntervalMatrix Binv;
  IntervalMatrix R;

  static LohnerMatrix from_interval(const IntervalMatrix& m);
  IntervalMatrix hull() const;
};

struct FlowJob {
  FieldId id = FieldId::Original;
  Interval t0{0.0};
  IntervalVector x0;  // (time, z1, z2)
  int order = 20;
  double tol = 1e-14;
  bool with_variational = false;
  double h0 = 1e-3;
  double h_max = 1.0;
  int max_steps = 200000;
  // Optional initial data beyond a plain box.
  std::optional<LohnerSet> set0;
  std::optional<LohnerMatrix> V0;
  std::ostream* step_log = nullptr;

  static FlowJob make(FieldId id, const IntervalVector& x0, bool with_variational = false);
  void validate() const;
  LohnerSet initial_set() const;
};

// One validated Taylor step of length h in flow time (elapsed time tau).
struct StepEnclosure {
  Interval t_step{0.0};  // elapsed flow time [tau0, tau0 + h]
  double h = 0;
  double h_next = 0;
  double err = 0;  // remainder magnitude of this step
  IntervalVector tube;  // every trajectory for tau in t_step
  LohnerSet start, end;
  std::optional<LohnerMatrix> V_start, V_end;

  // data for evaluating the flow on sub-intervals of the step
  std::vector<IntervalVector> center_coeffs;  // x_k(start.center)
  std::vector<IntervalMatrix> dcoeffs;        // V_k(start hull), V_0 = I
  IntervalVector rem_coeff;                   // x_{p+1}(tube)
  IntervalMatrix var_rem_coeff;               // V_{p+1}(tube, variational tube)

  // Enclosure of x(tau) for local times tau in [0, h] and all start points.
  IntervalVector eval(const Interval& local_tau) const;
  // l . x(tau) evaluated in the frame of the start set (less wrapping than
  // l . eval(tau)).
  Interval eval_functional(const std::vector<double>& l, const Interval& local_tau) const;
  // Enclosure of the derivative of the flow from the job's initial set
  // (V(tau) applied to V_start) on local times.
  IntervalMatrix eval_variational(const Interval& local_tau) const;
  IntervalVector end_hull() const { return end.hull(); }
};

StepEnclosure initial_enclosure(const FlowJob& job);

// Takes a step from current.end with the proposed size current.h_next.
StepEnclosure step(const FlowJob& job, const StepEnclosure& current);

enum class Direction { Increasing, Decreasing, Both };

// l . x = level, x in extended coordinates.
struct SectionSpec {
  std::vector<double> functional;
  double level = 0;
  Direction direction = Direction::Both;
};

struct CrossingResult {
  Interval t_cross{0.0};    // time coordinate at crossing
  Interval tau_cross{0.0};  // elapsed flow time at crossing
  IntervalVector state;     // on-section enclosure
  bool transversal = false;
  std::optional<IntervalMatrix> jacobian;  // (I - F l^T / l.F) V
  std::shared_ptr<const std::vector<StepEnclosure>> steps;
  FieldId id = FieldId::Original;
};

CrossingResult integrate_to_section(const FlowJob& job, const SectionSpec& sec, int n, double t_max);

// Verified number of transversal crossings of A' = 0 (the second phase
// coordinate) strictly before the crossing window of upto.
int count_axis_crossings(const FlowJob& job, const CrossingResult& upto);

IntervalMatrix flow_derivative(const FlowJob& job, const SectionSpec& sec, int n, double t_max);

// Plain integration over elapsed time [0, T]; returns all steps.
std::vector<StepEnclosure> integrate_for(const FlowJob& job, double T);

}  // namespace conefield
