#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ousig/errors.hpp"
#include "ousig/tensor.hpp"

namespace ousig {

struct QuadOptions {
  double abs_tol = 1e-9;
  int max_intervals = 10'000;
};

namespace detail {

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(std::complex<double> v) { return std::abs(v); }
template <typename Derived>
double quad_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}
template <typename Scalar>
double quad_norm(const Tensor<Scalar>& v) {
  return linfty_norm(v);
}

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (positive half).
inline constexpr double kK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278, 0.2044329400752989,  0.1903505780647854,
    0.1690047266392679, 0.1406532597155259,  0.1047900103222502,
    0.0630920926299786, 0.02293532201052922,
};
// Gauss-7 weights for nodes 0, 2, 4, 6 of the list above.
inline constexpr double kG7Weights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
struct GK15Result {
  using Value = std::decay_t<decltype(std::declval<F&>()(0.0))>;
  Value kronrod;
  double error;
};

template <typename F>
GK15Result<F> gk15(F& f, double a, double b) {
  using Value = typename GK15Result<F>::Value;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Value fc = f(c);
  Value kron = kK15Weights[0] * fc;
  Value gauss = kG7Weights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double x = h * kK15Nodes[i];
    Value lo = f(c - x);
    Value hi = f(c + x);
    Value pair = lo + hi;
    kron += kK15Weights[i] * pair;
    if (i % 2 == 0) gauss += kG7Weights[i / 2] * pair;
  }
  kron = h * kron;
  gauss = h * gauss;
  return {kron, quad_norm(Value(kron - gauss))};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b] to an absolute tolerance.
/// Works for double, complex, Eigen matrix, and Tensor-valued integrands.
template <typename F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {})
    -> std::decay_t<decltype(f(a))> {
  using Value = std::decay_t<decltype(f(a))>;
  if (!(b > a)) {
    if (b == a) return Value(0.0 * f(a));
    throw QuadratureError("integrate: b < a");
  }
  struct Panel {
    double a, b;
    Value integral;
    double error;
  };
  auto first = detail::gk15(f, a, b);
  std::vector<Panel> panels{{a, b, first.kronrod, first.error}};
  const double total_len = b - a;
  int splits = 0;
  while (true) {
    // Find the worst panel relative to its tolerance share.
    int worst = -1;
    double worst_excess = 0;
    for (int i = 0; i < static_cast<int>(panels.size()); ++i) {
      const double share = opt.abs_tol * (panels[i].b - panels[i].a) / total_len;
      const double excess = panels[i].error - share;
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = i;
      }
    }
    if (worst < 0) break;
    if (++splits > opt.max_intervals)
      throw QuadratureError("integrate: interval cap exceeded");
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    auto left = detail::gk15(f, p.a, mid);
    auto right = detail::gk15(f, mid, p.b);
    panels[worst] = {p.a, mid, left.kronrod, left.error};
    panels.push_back({mid, p.b, right.kronrod, right.error});
  }
  Value total = panels[0].integral;
  for (std::size_t i = 1; i < panels.size(); ++i) total += panels[i].integral;
  return total;
}

}  // namespace ousig
