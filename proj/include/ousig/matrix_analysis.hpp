#pragma once

#include <Eigen/Dense>

#include "ousig/errors.hpp"

namespace ousig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

/// Entrywise sup norm (the tensor l-infinity norm of a matrix).
inline double sup_norm(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }
inline double sup_norm(const MatrixC& a) { return a.cwiseAbs().maxCoeff(); }

/// Decay certificate for a Hurwitz matrix:
///   max(|e^{-M d}|, |e^{-M* d}|) <= K e^{-lambda d} on the sampled grid.
struct SpectralProfile {
  double lambda = 0;  // min real part of the spectrum
  double Lambda = 0;  // sup norm of M
  double K = 1;       // decay constant, validated on a delta-grid
};

/// e^{-M s}: the decaying exponential. Scaling-and-squaring Pade kernel.
Matrix expm(const Matrix& m, double s);

/// Eigen-structure of M with the (lambda, Lambda, K) certificate.
/// Throws NonHurwitzError when min Re(eig) <= 0.
SpectralProfile spectral_profile(const Matrix& m);

/// Dense Sylvester solve A X + X B = C by Kronecker linearization.
Matrix sylvester_solve(const Matrix& a, const Matrix& b, const Matrix& c);

/// Sigma~_sigma = int_0^sigma e^{-M s} e^{-M* s} ds, via the Sylvester
/// relation M S + S M* = Id - e^{-M sigma} e^{-M* sigma}.
Matrix sigma_tilde(const Matrix& m, double sigma);

/// C = Sigma~_inf: solves M C + C M* = Id. Symmetric positive definite.
Matrix stationary_C(const Matrix& m);

/// (1/T) int_0^T Sigma~_sigma dsigma, via two closed moment integrals.
Matrix averaged_sigma(const Matrix& m, double T);

/// Xi^{(m)}(t) = M . (average of Sigma~ over [0, t/m]) - Id/2.
Matrix xi_correction(const Matrix& m, double mass, double t);

/// M C - Id/2, asserted skew-symmetric to 1e-9.
Matrix area_limit(const Matrix& m);

}  // namespace ousig
