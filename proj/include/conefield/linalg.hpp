#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "conefield/interval.hpp"

namespace conefield {

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class IntervalVector {
 public:
  IntervalVector() = default;
  explicit IntervalVector(size_t n) : v_(n, Interval(0.0)) {}
  IntervalVector(std::initializer_list<Interval> l) : v_(l) {}
  explicit IntervalVector(std::vector<Interval> v) : v_(std::move(v)) {}

  size_t dim() const { return v_.size(); }
  Interval& operator[](size_t i) { return v_[i]; }
  const Interval& operator[](size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  std::vector<double> mid() const;
  double max_width() const;
  bool subset_of(const IntervalVector& o) const;

 private:
  std::vector<Interval> v_;
};

class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  IntervalMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), e_(rows * cols, Interval(0.0)) {}
  IntervalMatrix(std::initializer_list<std::initializer_list<Interval>> rows);
  static IntervalMatrix identity(size_t n);
  static IntervalMatrix from_point(const std::vector<std::vector<double>>& m);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Interval& operator()(size_t i, size_t j) { return e_[i * c_ + j]; }
  const Interval& operator()(size_t i, size_t j) const { return e_[i * c_ + j]; }

  IntervalMatrix transpose() const;
  std::vector<std::vector<double>> mid() const;
  double max_width() const;
  bool subset_of(const IntervalMatrix& o) const;
  IntervalVector column(size_t j) const;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<Interval> e_;
};

IntervalVector operator+(const IntervalVector& a, const IntervalVector& b);
IntervalVector operator-(const IntervalVector& a, const IntervalVector& b);
IntervalVector operator*(const Interval& s, const IntervalVector& a);
IntervalVector operator*(const IntervalMatrix& m, const IntervalVector& v);
IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator*(const Interval& s, const IntervalMatrix& a);

IntervalVector hull(const IntervalVector& a, const IntervalVector& b);
IntervalMatrix hull(const IntervalMatrix& a, const IntervalMatrix& b);
// Upper bound of the Euclidean norm over the box.
double norm2_upper(const IntervalVector& v);
// Upper bound of the induced infinity norm.
double norm_inf_upper(const IntervalMatrix& m);

// (M + M^T)/2
IntervalMatrix sym_part(const IntervalMatrix& m);
// M^T Q + Q M for diagonal Q given by its entries.
IntervalMatrix cone_matrix(const IntervalMatrix& m, const std::vector<double>& q_diag);

// Geršgorin lower bound on v^T S v / |v|^2 over all symmetric S in M.
Interval pd_lower_bound(const IntervalMatrix& m);
// Sylvester test for M - E*Id on a symmetric 2x2 interval matrix.
bool pd_sylvester_2x2(const IntervalMatrix& m, double e);
Interval det2(const IntervalMatrix& m);

// Enclosure of the inverse of a point matrix; throws DomainError when the
// verification fails.
IntervalMatrix verified_inverse(const std::vector<std::vector<double>>& a);

}  // namespace conefield
