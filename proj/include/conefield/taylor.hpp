#pragma once

#include <vector>

#include "conefield/systems.hpp"

namespace conefield {

// Extended autonomous form: state (t, z1, z2) with t' = 1.
IntervalVector ext_field(FieldId id, const IntervalVector& x);
IntervalMatrix ext_jacobian(FieldId id, const IntervalVector& x);

// Normalized Taylor coefficients x[k] = x^{(k)}(0)/k! of the solution through
// x0, k = 0..order. When V0 is given, V[k] are the coefficients of the
// variational solution V' = Df(x) V with V(0) = V0. Evaluated on boxes the
// coefficients enclose those of every point solution in the box.
struct Jet {
  std::vector<IntervalVector> x;
  std::vector<IntervalMatrix> V;
};
Jet taylor_jet(FieldId id, const IntervalVector& x0, int order, const IntervalMatrix* V0 = nullptr);

// sum_k c[k] tau^k by Horner's rule.
IntervalVector horner(const std::vector<IntervalVector>& c, const Interval& tau);
IntervalMatrix horner(const std::vector<IntervalMatrix>& c, const Interval& tau);

}  // namespace conefield
