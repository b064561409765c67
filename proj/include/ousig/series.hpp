#pragma once

#include <utility>
#include <vector>

#include "ousig/tensor.hpp"

namespace ousig {

/// Truncated tensor series: levels 0..depth of Tensor<Scalar> over R^d.
template <typename Scalar>
class TensorSeries {
 public:
  TensorSeries() : dim_(1), depth_(0) { levels_.emplace_back(1, 0); }
  TensorSeries(int dim, int depth) : dim_(dim), depth_(depth) {
    levels_.reserve(depth + 1);
    for (int k = 0; k <= depth; ++k) levels_.emplace_back(dim, k);
  }

  // The unit 1 = (1, 0, ..., 0).
  static TensorSeries one(int dim, int depth) {
    TensorSeries s(dim, depth);
    s.levels_[0].entries()[0] = Scalar(1);
    return s;
  }

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  const Tensor<Scalar>& level(int k) const { return levels_[k]; }
  Tensor<Scalar>& level(int k) { return levels_[k]; }

  void check_same_shape(const TensorSeries& o) const {
    if (dim_ != o.dim_ || depth_ != o.depth_)
      throw DimensionError("series shape mismatch");
  }

  TensorSeries& operator+=(const TensorSeries& o) {
    check_same_shape(o);
    for (int k = 0; k <= depth_; ++k) levels_[k] += o.levels_[k];
    return *this;
  }
  TensorSeries& operator-=(const TensorSeries& o) {
    check_same_shape(o);
    for (int k = 0; k <= depth_; ++k) levels_[k] -= o.levels_[k];
    return *this;
  }
  TensorSeries& operator*=(Scalar c) {
    for (auto& l : levels_) l *= c;
    return *this;
  }
  friend TensorSeries operator+(TensorSeries a, const TensorSeries& b) {
    return a += b;
  }
  friend TensorSeries operator-(TensorSeries a, const TensorSeries& b) {
    return a -= b;
  }

 private:
  int dim_;
  int depth_;
  std::vector<Tensor<Scalar>> levels_;
};

using TensorSeriesd = TensorSeries<double>;
using TensorSeriesc = TensorSeries<std::complex<double>>;

/// Graded convolution c_n = sum_{i=0}^{n} x_i (x) y_{n-i}, truncated at depth.
template <typename Scalar>
TensorSeries<Scalar> series_product(const TensorSeries<Scalar>& x,
                                    const TensorSeries<Scalar>& y) {
  x.check_same_shape(y);
  TensorSeries<Scalar> c(x.dim(), x.depth());
  for (int n = 0; n <= x.depth(); ++n) {
    for (int i = 0; i <= n; ++i) {
      c.level(n) += tensor_product(x.level(i), y.level(n - i));
    }
  }
  return c;
}

/// exp(v) truncated: level k = v^{(x)k} / k!.
template <typename Scalar>
TensorSeries<Scalar> tensor_exp(const Eigen::Vector<Scalar, Eigen::Dynamic>& v,
                                int depth) {
  TensorSeries<Scalar> s =
      TensorSeries<Scalar>::one(static_cast<int>(v.size()), depth);
  if (depth == 0) return s;
  Tensor<Scalar> power = Tensor<Scalar>::from_vector(v);
  s.level(1) = power;
  for (int k = 2; k <= depth; ++k) {
    power = tensor_product(power, Tensor<Scalar>::from_vector(v));
    power *= Scalar(1.0 / k);
    s.level(k) = power;
  }
  return s;
}

template <typename Scalar>
double linfty_norm(const TensorSeries<Scalar>& s) {
  double m = 0;
  for (int k = 0; k <= s.depth(); ++k)
    m = std::max(m, linfty_norm(s.level(k)));
  return m;
}

inline TensorSeriesd real_part(const TensorSeriesc& s,
                               double max_imag_residue = 1e-9) {
  TensorSeriesd out(s.dim(), s.depth());
  for (int k = 0; k <= s.depth(); ++k)
    out.level(k) = real_part(s.level(k), max_imag_residue);
  return out;
}

}  // namespace ousig
