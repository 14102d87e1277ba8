#include "conefield/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace conefield {

std::vector<double> IntervalVector::mid() const {
  std::vector<double> m;
  m.reserve(v_.size());
  for (const auto& x : v_) m.push_back(x.mid());
  return m;
}

double IntervalVector::max_width() const {
  double w = 0;
  for (const auto& x : v_) w = std::fmax(w, x.width());
  return w;
}

bool IntervalVector::subset_of(const IntervalVector& o) const {
  if (o.dim() != dim()) throw ShapeError("dimension mismatch");
  for (size_t i = 0; i < dim(); ++i)
    if (!v_[i].subset_of(o[i])) return false;
  return true;
}

IntervalMatrix::IntervalMatrix(std::initializer_list<std::initializer_list<Interval>> rows) {
  r_ = rows.size();
  c_ = r_ ? rows.begin()->size() : 0;
  for (const auto& row : rows) {
    if (row.size() != c_) throw ShapeError("ragged matrix");
    e_.insert(e_.end(), row.begin(), row.end());
  }
}

IntervalMatrix IntervalMatrix::identity(size_t n) {
  IntervalMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Interval(1.0);
  return m;
}

IntervalMatrix IntervalMatrix::from_point(const std::vector<std::vector<double>>& a) {
  IntervalMatrix m(a.size(), a.empty() ? 0 : a[0].size());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) m(i, j) = Interval(a[i][j]);
  return m;
}

IntervalMatrix IntervalMatrix::transpose() const {
  IntervalMatrix t(c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::vector<double>> IntervalMatrix::mid() const {
  std::vector<std::vector<double>> m(r_, std::vector<double>(c_));
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) m[i][j] = (*this)(i, j).mid();
  return m;
}

double IntervalMatrix::max_width() const {
  double w = 0;
  for (const auto& x : e_) w = std::fmax(w, x.width());
  return w;
}

bool IntervalMatrix::subset_of(const IntervalMatrix& o) const {
  if (o.r_ != r_ || o.c_ != c_) throw ShapeError("shape mismatch");
  for (size_t k = 0; k < e_.size(); ++k)
    if (!e_[k].subset_of(o.e_[k])) return false;
  return true;
}

IntervalVector IntervalMatrix::column(size_t j) const {
  IntervalVector v(r_);
  for (size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b) {
  if (a.dim() != b.dim()) throw ShapeError("vector add shape");
  IntervalVector r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

IntervalVector operator-(const IntervalVector& a, const IntervalVector& b) {
  if (a.dim() != b.dim()) throw ShapeError("vector sub shape");
  IntervalVector r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

IntervalVector operator*(const Interval& s, const IntervalVector& a) {
  IntervalVector r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

IntervalVector operator*(const IntervalMatrix& m, const IntervalVector& v) {
  if (m.cols() != v.dim()) throw ShapeError("matvec shape");
  IntervalVector r(m.rows());
  for (size_t i = 0; i < m.rows(); ++i) {
    Interval s(0.0);
    for (size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul shape");
  IntervalMatrix r(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      Interval s(0.0);
      for (size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix add shape");
  IntervalMatrix r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sub shape");
  IntervalMatrix r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

IntervalMatrix operator*(const Interval& s, const IntervalMatrix& a) {
  IntervalMatrix r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

IntervalVector hull(const IntervalVector& a, const IntervalVector& b) {
  if (a.dim() != b.dim()) throw ShapeError("hull shape");
  IntervalVector r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) r[i] = hull(a[i], b[i]);
  return r;
}

IntervalMatrix hull(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("hull shape");
  IntervalMatrix r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = hull(a(i, j), b(i, j));
  return r;
}

double norm2_upper(const IntervalVector& v) {
  double s = 0;
  for (const auto& x : v) s = rnd::add_up(s, rnd::mul_up(x.mag(), x.mag()));
  return rnd::sqrt_up(s);
}

double norm_inf_upper(const IntervalMatrix& m) {
  double best = 0;
  for (size_t i = 0; i < m.rows(); ++i) {
    double s = 0;
    for (size_t j = 0; j < m.cols(); ++j) s = rnd::add_up(s, m(i, j).mag());
    best = std::fmax(best, s);
  }
  return best;
}

IntervalMatrix sym_part(const IntervalMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("sym_part needs a square matrix");
  IntervalMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = Interval(0.5) * (m(i, j) + m(j, i));
  return r;
}

IntervalMatrix cone_matrix(const IntervalMatrix& m, const std::vector<double>& q) {
  if (m.rows() != m.cols() || q.size() != m.rows()) throw ShapeError("cone_matrix shape");
  IntervalMatrix r(m.rows(), m.cols());
  // (M^T Q + Q M)_ij = q_j M_ji + q_i M_ij; the diagonal is computed once.
  for (size_t i = 0; i < m.rows(); ++i) {
    r(i, i) = Interval(2.0 * q[i]) * m(i, i);
    for (size_t j = i + 1; j < m.cols(); ++j) {
      Interval v = Interval(q[j]) * m(j, i) + Interval(q[i]) * m(i, j);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

Interval pd_lower_bound(const IntervalMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("pd_lower_bound needs a square matrix");
  double best = INFINITY;
  for (size_t i = 0; i < m.rows(); ++i) {
    double off = 0;
    for (size_t j = 0; j < m.cols(); ++j)
      if (j != i) off = rnd::add_up(off, m(i, j).mag());
    best = std::fmin(best, rnd::sub_down(m(i, i).lo(), off));
  }
  return Interval(best);
}

Interval det2(const IntervalMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw ShapeError("det2 needs 2x2");
  // For symmetric input the off-diagonal product is a square.
  Interval off = (m(0, 1) == m(1, 0)) ? sqr(m(0, 1)) : m(0, 1) * m(1, 0);
  return m(0, 0) * m(1, 1) - off;
}

bool pd_sylvester_2x2(const IntervalMatrix& m, double e) {
  if (m.rows() != 2 || m.cols() != 2) throw ShapeError("pd_sylvester_2x2 needs 2x2");
  IntervalMatrix s = m;
  s(0, 0) = m(0, 0) - Interval(e);
  s(1, 1) = m(1, 1) - Interval(e);
  return s(1, 1).lo() > 0 && det2(s).lo() > 0;
}

IntervalMatrix verified_inverse(const std::vector<std::vector<double>>& a) {
  const size_t n = a.size();
  Eigen::MatrixXd am(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) am(i, j) = a[i][j];
  Eigen::MatrixXd cm = am.partialPivLu().inverse();
  IntervalMatrix c(n, n), ai = IntervalMatrix::from_point(a);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!std::isfinite(cm(i, j))) throw DomainError("singular frame");
      c(i, j) = Interval(cm(i, j));
    }
  IntervalMatrix e = IntervalMatrix::identity(n) - c * ai;
  double eps = norm_inf_upper(e);
  if (!(eps < 0.5)) throw DomainError("inverse verification failed");
  // A^{-1} = C + E C + E^2 (I - E)^{-1} C
  double tail = rnd::div_up(rnd::mul_up(rnd::mul_up(eps, eps), norm_inf_upper(c)),
                            rnd::sub_down(1.0, eps));
  IntervalMatrix r = c + e * c;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r(i, j) = inflate(r(i, j), tail);
  return r;
}

}  // namespace conefield
