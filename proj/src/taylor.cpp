#include "conefield/taylor.hpp"

namespace conefield {

namespace {

using Series = std::vector<Interval>;

Interval cauchy(const Series& a, const Series& b, int k) {
  Interval s = a[0] * b[k];
  for (int j = 1; j <= k; ++j) s += a[j] * b[k - j];
  return s;
}

// Coefficients of u^m along t = t0 + tau with u0 = 1/t0:
// binom(m+k-1, k) (-1)^k u0^{m+k}.
Series inv_power_series(const Interval& u0, int m, int n) {
  Series pw(n + m);
  pw[0] = Interval(1.0);
  for (int i = 1; i < n + m; ++i) pw[i] = pw[i - 1] * u0;
  Series out(n);
  double binom = 1.0;  // binom(m+k-1, k)
  for (int k = 0; k < n; ++k) {
    if (k > 0) binom = binom * (m + k - 1) / k;
    Interval c = Interval(binom) * pw[m + k];
    out[k] = (k % 2) ? -c : c;
  }
  return out;
}

// s(rho0 + tau) = s0 e^{2 tau}: s0 2^k / k!.
Series exp2_series(const Interval& s0, int n) {
  Series out(n);
  out[0] = s0;
  for (int k = 1; k < n; ++k) out[k] = out[k - 1] * Interval(2.0) / Interval(static_cast<double>(k));
  return out;
}

Interval delta(int k, double v = 1.0) { return Interval(k == 0 ? v : 0.0); }

}  // namespace

IntervalVector ext_field(FieldId id, const IntervalVector& x) {
  StateBox z{IntervalVector{x[1], x[2]}, chart_of(id)};
  IntervalVector f = field_eval(id, TimeBox::of(id, x[0]), z);
  return IntervalVector{Interval(1.0), f[0], f[1]};
}

IntervalMatrix ext_jacobian(FieldId id, const IntervalVector& x) {
  StateBox z{IntervalVector{x[1], x[2]}, chart_of(id)};
  TimeBox t = TimeBox::of(id, x[0]);
  IntervalMatrix jz = field_jacobian_z(id, t, z);
  IntervalMatrix out(3, 3);
  if (id == FieldId::Original) {
    // d/dr of (A', -A'/r + A/(4r^2) + A - A^3)
    Interval u = Interval(1.0) / x[0];
    out(2, 0) = x[2] * sqr(u) - x[1] * u * sqr(u) / Interval(2.0);
  } else {
    IntervalVector dt = field_dt(id, t, z);
    out(1, 0) = dt[0];
    out(2, 0) = dt[1];
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i + 1, j + 1) = jz(i, j);
  return out;
}

Jet taylor_jet(FieldId id, const IntervalVector& x0, int order, const IntervalMatrix* V0) {
  if (x0.dim() != 3) throw ShapeError("taylor_jet expects an extended 3-vector");
  const int n = order + 1;
  Jet jet;
  jet.x.assign(n, IntervalVector(3));
  jet.x[0] = x0;
  if (n > 1) jet.x[1][0] = Interval(1.0);

  Series a(n), b(n), S(n), SS(n), SSS(n), D(n);
  Series u1, u2, u3, s;
  if (id == FieldId::Begin) {
    s = exp2_series(exp(Interval(2.0) * x0[0]), n);
  } else {
    Interval u0 = Interval(1.0) / x0[0];
    u1 = inv_power_series(u0, 1, n);
    u2 = inv_power_series(u0, 2, n);
    u3 = inv_power_series(u0, 3, n);
  }
  // Jacobian coefficients, filled as the state coefficients become available.
  std::vector<IntervalMatrix> J;
  const bool var = V0 != nullptr;

  for (int k = 0; k < n; ++k) {
    a[k] = jet.x[k][1];
    b[k] = jet.x[k][2];
    Interval f1, f2;
    IntervalMatrix Jk(3, 3);
    switch (id) {
      case FieldId::Original: {
        SS[k] = cauchy(a, a, k);  // A^2
        SSS[k] = cauchy(a, SS, k);
        f1 = b[k];
        f2 = -cauchy(b, u1, k) + cauchy(a, u2, k) / Interval(4.0) + a[k] - SSS[k];
        if (var) {
          Jk(1, 2) = delta(k);
          Jk(2, 0) = cauchy(b, u2, k) - cauchy(a, u3, k) / Interval(2.0);
          Jk(2, 1) = u2[k] / Interval(4.0) + delta(k) - Interval(3.0) * SS[k];
          Jk(2, 2) = -u1[k];
        }
        break;
      }
      case FieldId::End: {
        S[k] = a[k] + b[k];
        D[k] = a[k] - b[k];
        SS[k] = cauchy(S, S, k);
        SSS[k] = cauchy(S, SS, k);
        Interval g = -cauchy(D, u1, k) / Interval(2.0) + cauchy(S, u2, k) / Interval(8.0) - SSS[k] / Interval(8.0);
        f1 = a[k] + g;
        f2 = -b[k] - g;
        if (var) {
          Interval gr = cauchy(D, u2, k) / Interval(2.0) - cauchy(S, u3, k) / Interval(4.0);
          Interval common = u2[k] / Interval(8.0) - Interval(3.0) * SS[k] / Interval(8.0);
          Interval gx = -u1[k] / Interval(2.0) + common;
          Interval gy = u1[k] / Interval(2.0) + common;
          Jk(1, 0) = gr;
          Jk(1, 1) = delta(k) + gx;
          Jk(1, 2) = gy;
          Jk(2, 0) = -gr;
          Jk(2, 1) = -gx;
          Jk(2, 2) = -delta(k) - gy;
        }
        break;
      }
      case FieldId::Begin: {
        S[k] = a[k] + b[k];
        SS[k] = cauchy(S, S, k);
        SSS[k] = cauchy(S, SS, k);
        D[k] = S[k] - SSS[k];  // S - S^3
        Interval g = cauchy(s, D, k);
        f1 = a[k] / Interval(2.0) + g;
        f2 = -b[k] / Interval(2.0) - g;
        if (var) {
          Interval gz = s[k] - Interval(3.0) * cauchy(s, SS, k);
          Jk(1, 0) = Interval(2.0) * g;
          Jk(1, 1) = delta(k, 0.5) + gz;
          Jk(1, 2) = gz;
          Jk(2, 0) = Interval(-2.0) * g;
          Jk(2, 1) = -gz;
          Jk(2, 2) = delta(k, -0.5) - gz;
        }
        break;
      }
    }
    if (var) J.push_back(std::move(Jk));
    if (k + 1 < n) {
      Interval inv = Interval(1.0) / Interval(static_cast<double>(k + 1));
      jet.x[k + 1][1] = f1 * inv;
      jet.x[k + 1][2] = f2 * inv;
    }
  }

  if (var) {
    jet.V.assign(n, IntervalMatrix(3, 3));
    jet.V[0] = *V0;
    for (int k = 0; k + 1 < n; ++k) {
      IntervalMatrix acc = J[0] * jet.V[k];
      for (int j = 1; j <= k; ++j) acc = acc + J[j] * jet.V[k - j];
      jet.V[k + 1] = (Interval(1.0) / Interval(static_cast<double>(k + 1))) * acc;
    }
  }
  return jet;
}

IntervalVector horner(const std::vector<IntervalVector>& c, const Interval& tau) {
  IntervalVector acc = c.back();
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) acc = tau * acc + c[k];
  return acc;
}

IntervalMatrix horner(const std::vector<IntervalMatrix>& c, const Interval& tau) {
  IntervalMatrix acc = c.back();
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) acc = tau * acc + c[k];
  return acc;
}

}  // namespace conefield
