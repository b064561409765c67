#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "ousig/errors.hpp"

namespace ousig {

// Dense storage cap: dim^level entries must stay below this.
inline constexpr std::int64_t kMaxTensorEntries = 10'000'000;
// sym() enumerates all level! permutations; reject above this level.
inline constexpr int kMaxSymLevel = 8;

inline std::int64_t checked_entry_count(int dim, int level) {
  if (dim < 1) throw DimensionError("tensor dim must be positive");
  if (level < 0) throw DimensionError("tensor level must be nonnegative");
  std::int64_t n = 1;
  for (int k = 0; k < level; ++k) {
    n *= dim;
    if (n > kMaxTensorEntries)
      throw CapacityError("dense tensor of dim " + std::to_string(dim) +
                          " level " + std::to_string(level) +
                          " exceeds the entry cap");
  }
  return n;
}

/// Level-homogeneous dense tensor over R^d or C^d. Entries are stored
/// row-major in the multi-index (i_1,...,i_k), i_1 slowest, 0-based.
template <typename Scalar>
class Tensor {
 public:
  using Storage = Eigen::Vector<Scalar, Eigen::Dynamic>;

  Tensor() : dim_(1), level_(0), entries_(Storage::Zero(1)) {}
  Tensor(int dim, int level)
      : dim_(dim),
        level_(level),
        entries_(Storage::Zero(checked_entry_count(dim, level))) {}
  Tensor(int dim, int level, Storage entries)
      : dim_(dim), level_(level), entries_(std::move(entries)) {
    if (entries_.size() != checked_entry_count(dim, level))
      throw DimensionError("entry count does not match dim^level");
  }

  static Tensor scalar(int dim, Scalar value) {
    Tensor t(dim, 0);
    t.entries_[0] = value;
    return t;
  }

  // e_{i_1} (x) ... (x) e_{i_k}, indices 0-based.
  static Tensor basis(int dim, std::initializer_list<int> index) {
    Tensor t(dim, static_cast<int>(index.size()));
    t.entries_[t.flat_index(std::span<const int>(index.begin(), index.size()))] =
        Scalar(1);
    return t;
  }

  static Tensor from_vector(const Eigen::Vector<Scalar, Eigen::Dynamic>& v) {
    Tensor t(static_cast<int>(v.size()), 1);
    t.entries_ = v;
    return t;
  }

  // Level-2 tensor with entries T[(i,j)] = A(i,j).
  static Tensor from_matrix(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    if (a.rows() != a.cols()) throw DimensionError("matrix must be square");
    const int d = static_cast<int>(a.rows());
    Tensor t(d, 2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t.entries_[i * d + j] = a(i, j);
    return t;
  }

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::int64_t size() const { return entries_.size(); }
  const Storage& entries() const { return entries_; }
  Storage& entries() { return entries_; }

  std::int64_t flat_index(std::span<const int> idx) const {
    std::int64_t f = 0;
    for (int k = 0; k < level_; ++k) f = f * dim_ + idx[k];
    return f;
  }

  void multi_index(std::int64_t flat, std::span<int> out) const {
    for (int k = level_ - 1; k >= 0; --k) {
      out[k] = static_cast<int>(flat % dim_);
      flat /= dim_;
    }
  }

  Scalar operator()(std::initializer_list<int> idx) const {
    return entries_[flat_index(std::span<const int>(idx.begin(), idx.size()))];
  }
  Scalar& operator()(std::initializer_list<int> idx) {
    return entries_[flat_index(std::span<const int>(idx.begin(), idx.size()))];
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_matrix() const {
    if (level_ != 2) throw DimensionError("to_matrix requires level 2");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) a(i, j) = entries_[i * dim_ + j];
    return a;
  }

  Tensor& operator+=(const Tensor& o) {
    check_same_shape(o);
    entries_ += o.entries_;
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_same_shape(o);
    entries_ -= o.entries_;
    return *this;
  }
  Tensor& operator*=(Scalar c) {
    entries_ *= c;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, Scalar c) { return a *= c; }
  friend Tensor operator*(Scalar c, Tensor a) { return a *= c; }

  void check_same_shape(const Tensor& o) const {
    if (dim_ != o.dim_ || level_ != o.level_)
      throw DimensionError("tensor shape mismatch");
  }

 private:
  int dim_;
  int level_;
  Storage entries_;
};

using Tensord = Tensor<double>;
using Tensorc = Tensor<std::complex<double>>;

/// A_1 (x) ... (x) A_n acting slot-wise on level-n tensors.
template <typename Scalar>
struct MatrixTensorOperator {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  int dim = 0;
  std::vector<Matrix> factors;

  MatrixTensorOperator(int d, std::vector<Matrix> f)
      : dim(d), factors(std::move(f)) {
    for (const auto& a : factors)
      if (a.rows() != dim || a.cols() != dim)
        throw DimensionError("operator factor is not dim x dim");
  }
  int arity() const { return static_cast<int>(factors.size()); }

  static MatrixTensorOperator same(int d, int n, const Matrix& a) {
    return MatrixTensorOperator(d, std::vector<Matrix>(n, a));
  }
};

using MatrixTensorOperatord = MatrixTensorOperator<double>;
using MatrixTensorOperatorc = MatrixTensorOperator<std::complex<double>>;

template <typename Scalar>
Tensor<Scalar> tensor_product(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionError("tensor_product: dim mismatch");
  Tensor<Scalar> c(a.dim(), a.level() + b.level());
  const auto na = a.size(), nb = b.size();
  auto& out = c.entries();
  for (std::int64_t i = 0; i < na; ++i) {
    const Scalar ai = a.entries()[i];
    if (ai == Scalar(0)) continue;
    out.segment(i * nb, nb) += ai * b.entries();
  }
  return c;
}

template <typename Scalar>
double linfty_norm(const Tensor<Scalar>& t) {
  double m = 0;
  for (std::int64_t i = 0; i < t.size(); ++i)
    m = std::max(m, std::abs(t.entries()[i]));
  return m;
}

/// Average over all level! permutations of the index slots.
template <typename Scalar>
Tensor<Scalar> sym(const Tensor<Scalar>& t) {
  const int k = t.level();
  if (k <= 1) return t;
  if (k > kMaxSymLevel)
    throw CapacityError("sym above level " + std::to_string(kMaxSymLevel));
  Tensor<Scalar> out(t.dim(), k);
  std::vector<int> perm(k), idx(k), pidx(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t nperm = 0;
  do {
    ++nperm;
    for (std::int64_t f = 0; f < t.size(); ++f) {
      t.multi_index(f, idx);
      for (int s = 0; s < k; ++s) pidx[s] = idx[perm[s]];
      out.entries()[f] += t.entries()[t.flat_index(pidx)];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out *= Scalar(1.0 / static_cast<double>(nperm));
  return out;
}

/// result[I] = sum_J prod_l (A_l)^{i_l}_{j_l} t[J], contracted one slot at a
/// time.
template <typename Scalar>
Tensor<Scalar> apply_operator(const MatrixTensorOperator<Scalar>& op,
                              const Tensor<Scalar>& t) {
  if (op.arity() != t.level())
    throw DimensionError("apply_operator: arity / level mismatch");
  if (op.dim != t.dim()) throw DimensionError("apply_operator: dim mismatch");
  const int d = t.dim();
  const int n = t.level();
  Tensor<Scalar> cur = t;
  // Contract slot l: stride pattern (outer, d, inner).
  std::int64_t outer = 1, inner = t.size() / std::max<std::int64_t>(d, 1);
  if (n == 0) return cur;
  for (int l = 0; l < n; ++l) {
    const auto& a = op.factors[l];
    Tensor<Scalar> next(d, n);
    for (std::int64_t o = 0; o < outer; ++o) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const Scalar w = a(i, j);
          if (w == Scalar(0)) continue;
          next.entries().segment((o * d + i) * inner, inner) +=
              w * cur.entries().segment((o * d + j) * inner, inner);
        }
      }
    }
    cur = std::move(next);
    outer *= d;
    inner /= d;
  }
  return cur;
}

template <typename Scalar>
Tensor<Scalar> zero_like_level(int dim, int level) {
  return Tensor<Scalar>(dim, level);
}

inline Tensord real_part(const Tensorc& t, double max_imag_residue = 1e-9) {
  Tensord out(t.dim(), t.level());
  double imag = 0;
  for (std::int64_t i = 0; i < t.size(); ++i) {
    out.entries()[i] = t.entries()[i].real();
    imag = std::max(imag, std::abs(t.entries()[i].imag()));
  }
  if (imag > max_imag_residue)
    throw NumericalError("imaginary residue " + std::to_string(imag) +
                         " above tolerance on a real-valued tensor");
  return out;
}

}  // namespace ousig
