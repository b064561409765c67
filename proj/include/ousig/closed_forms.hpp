#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ousig/matrix_analysis.hpp"
#include "ousig/ou_process.hpp"
#include "ousig/series.hpp"
#include "ousig/tensor.hpp"

namespace ousig {

using Complex = std::complex<double>;

/// Coefficients of the simplex exponential integral
///   A^{c_1..c_n}(t) = int_{0<=t_1<...<t_n<=t} prod e^{-c_i t_i} dt
///     = A_0 + sum_{i>=1} A_i e^{-(c_n+...+c_{n-i+1}) t}.
/// Built by the recursion A^n_i = -A^{n-1}_{i-1} / (c_n+...+c_{n-i+1}),
/// A^n_0 = -sum_{i>=1} A^n_i.
struct ExpChainCoefficients {
  std::vector<Complex> exponents;  // c_1..c_n
  std::vector<Complex> coeffs;     // A_0..A_n

  static ExpChainCoefficients build(std::span<const Complex> c);
  Complex value_at(double t) const;
  Complex value_at_infinity() const { return coeffs[0]; }
};

/// A^{c_1..c_n}(t); requires Re(c_i) > 0.
Complex exp_chain(std::span<const Complex> c, double t);

/// 1-D expected signature of dX = -theta X dt + sigma dW from X_0 = x,
/// levels 0..N. For the momentum model call with theta = M/m, sigma = 1.
TensorSeriesd esig_1d(double theta, double sigma_noise, double x, double t,
                      int N);

/// Zero-mass limit in 1-D: level n = (-p)^n / n!.
TensorSeriesd esig_1d_limit(double p, int N);

/// Phi_1^{(m)}(t, p) = (e^{-(M/m)t} - Id) p.
Tensord phi1(const ModelParams& params, double t);

/// Good part of Phi_2: frakA_2 + Xi^{(m)}(t) t. The dropped remainder is
/// O(m) with constant K/lambda + Lambda K^3 d^3 / (2 lambda^2).
Tensord phi2(const ModelParams& params, double t);

struct FrakARegime {
  bool is_limit = false;
  double t = 0;
  double mass = 0;
};

/// The leading simplex iterated-integral tensor in p (finite mass or limit).
struct FrakA {
  int level = 0;
  Tensord value;
  FrakARegime regime;
};

/// frakA_n^{(m)}(t, p): n-fold simplex integral of (x)_j -(M/m)e^{-(M/m)t_j}p.
/// Diagonalizable M: exact eigen evaluation via exp_chain; otherwise
/// recursive adaptive quadrature, tolerance 1e-9 per level.
FrakA frakA_finite(const ModelParams& params, int n, double t);

/// The quadrature route of frakA_finite, exposed so the exact eigen route
/// can be cross-checked against it.
FrakA frakA_finite_quadrature(const ModelParams& params, int n, double t);

/// frakA-bar_n(p) = lim_{m->0} frakA_n^{(m)}: scalar-multiple, diagonal,
/// diagonalizable, and finite-horizon fallback branches.
FrakA frakA_limit(const Matrix& M, const Vector& p, int n);

/// Cached eigen structure of M (complex arithmetic).
struct EigenSystem {
  MatrixC Q;
  MatrixC Qinv;
  VectorC lambda;
  double cond = 0;
  bool diagonalizable = false;  // eigenvector condition number <= 1e6
  bool diagonal = false;
  bool scalar_multiple = false;
};

const EigenSystem& eigen_system(const Matrix& m);

}  // namespace ousig
