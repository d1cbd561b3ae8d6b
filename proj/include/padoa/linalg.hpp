#pragma once

#include <cassert>
#include <cstddef>
#include <limits>
#include <vector>

namespace padoa {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense row-major matrix. Small by design: every LP in this project is
// desk-scale, so no sparse storage.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  const double* row(int i) const { return data_.data() + static_cast<size_t>(i) * cols_; }
  double* row(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }

  void append_row(const Vec& r) {
    assert(static_cast<int>(r.size()) == cols_ || rows_ == 0);
    if (rows_ == 0) cols_ = static_cast<int>(r.size());
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot(const double* a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) {
    double a = x < 0 ? -x : x;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace padoa
