#include "ousig/matrix_analysis.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace ousig {

Matrix expm(const Matrix& m, double s) {
  Matrix e = (-s * m).exp();
  if (!e.allFinite())
    throw NumericalError("expm overflow: s * |M| too extreme");
  return e;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

double decay_excess(const Matrix& m, double lambda, double k) {
  // Largest violation of |e^{-M d}| <= K e^{-lambda d} over the grid
  // d in {0.1, 0.2, ..., 10}. Sup norm is transpose-invariant, so the
  // same bound certifies e^{-M* d}.
  double excess = 0;
  for (int i = 1; i <= 100; ++i) {
    const double delta = 0.1 * i;
    const double lhs = sup_norm(expm(m, delta));
    excess = std::max(excess, lhs - k * std::exp(-lambda * delta));
  }
  return excess;
}

}  // namespace

SpectralProfile spectral_profile(const Matrix& m) {
  if (!m.allFinite()) throw NumericalError("matrix has non-finite entries");
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigen decomposition failed");
  SpectralProfile p;
  p.lambda = es.eigenvalues().real().minCoeff();
  if (!(p.lambda > 0))
    throw NonHurwitzError("matrix is not Hurwitz: min Re(eig) = " +
                          std::to_string(p.lambda));
  p.Lambda = std::max(sup_norm(m), p.lambda);

  const MatrixC v = es.eigenvectors();
  const double d = static_cast<double>(m.rows());
  Eigen::JacobiSVD<MatrixC> svd(v);
  const double cond =
      svd.singularValues()(0) / svd.singularValues()(v.cols() - 1);
  double k0;
  if (std::isfinite(cond) && cond < 1e12) {
    // |V e^{-D d} V^{-1}| <= d^2 |V| |V^{-1}| e^{-lambda d}
    k0 = d * d * sup_norm(v) * sup_norm(MatrixC(v.inverse()));
  } else {
    // Defective spectrum: read a candidate off the grid directly.
    k0 = 1;
    for (int i = 1; i <= 100; ++i) {
      const double delta = 0.1 * i;
      k0 = std::max(k0, sup_norm(expm(m, delta)) * std::exp(p.lambda * delta));
    }
  }
  p.K = 1.05 * std::max(k0, 1.0);
  while (decay_excess(m, p.lambda, p.K) > 0) p.K *= 2;
  return p;
}

Matrix sylvester_solve(const Matrix& a, const Matrix& b, const Matrix& c) {
  const Eigen::Index n = a.rows(), p = b.rows();
  if (a.cols() != n || b.cols() != p || c.rows() != n || c.cols() != p)
    throw DimensionError("sylvester_solve: incompatible shapes");
  // vec(AX + XB) = (I (x) A + B^T (x) I) vec(X), column-major vec.
  Matrix sys = kron(Matrix::Identity(p, p), a) +
               kron(b.transpose(), Matrix::Identity(n, n));
  Eigen::Map<const Vector> rhs(c.data(), n * p);
  Vector x = sys.partialPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, p);
}

Matrix sigma_tilde(const Matrix& m, double sigma) {
  if (sigma < 0) throw Error("sigma_tilde: sigma must be nonnegative");
  const Eigen::Index d = m.rows();
  if (sigma == 0) return Matrix::Zero(d, d);
  spectral_profile(m);  // Hurwitz gate
  const Matrix e = expm(m, sigma);
  const Matrix rhs = Matrix::Identity(d, d) - e * e.transpose();
  Matrix s = sylvester_solve(m, m.transpose(), rhs);
  return 0.5 * (s + s.transpose());
}

Matrix stationary_C(const Matrix& m) {
  const Eigen::Index d = m.rows();
  spectral_profile(m);  // Hurwitz gate
  Matrix c = sylvester_solve(m, m.transpose(), Matrix::Identity(d, d));
  c = 0.5 * (c + c.transpose());
  const double residual =
      sup_norm(m * c + c * m.transpose() - Matrix::Identity(d, d));
  if (residual > 1e-10)
    throw NumericalError("Lyapunov residual " + std::to_string(residual));
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.eigenvalues().minCoeff() <= 0)
    throw NumericalError("stationary covariance is not positive definite");
  return c;
}

Matrix averaged_sigma(const Matrix& m, double T) {
  if (!(T > 0)) throw Error("averaged_sigma: T must be positive");
  // avg = Sigma~_T - H_T / T with H_T = int_0^T s G(s) ds and
  // M H + H M* = Sigma~_T - T G(T), from integrating d/ds [s G(s)].
  const Matrix st = sigma_tilde(m, T);
  const Matrix e = expm(m, T);
  const Matrix g = e * e.transpose();
  const Matrix h = sylvester_solve(m, m.transpose(), Matrix(st - T * g));
  Matrix avg = st - h / T;
  return 0.5 * (avg + avg.transpose());
}

Matrix xi_correction(const Matrix& m, double mass, double t) {
  if (!(mass > 0)) throw Error("xi: mass must be positive");
  if (!(t > 0)) throw Error("xi: t must be positive");
  const Eigen::Index d = m.rows();
  return m * averaged_sigma(m, t / mass) -
         0.5 * Matrix::Identity(d, d);
}

Matrix area_limit(const Matrix& m) {
  const Eigen::Index d = m.rows();
  const Matrix a =
      m * stationary_C(m) - 0.5 * Matrix::Identity(d, d);
  const double skew_residual = sup_norm(a + a.transpose());
  if (skew_residual > 1e-9)
    throw NumericalError(
        "area limit is not skew-symmetric (residual " +
        std::to_string(skew_residual) + "); upstream Lyapunov solve suspect");
  return a;
}

}  // namespace ousig
