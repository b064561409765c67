#pragma once

#include <cstdint>
#include <random>

#include "ousig/matrix_analysis.hpp"
#include "ousig/tensor.hpp"

namespace ousig {

/// Full problem instance: dP = -(M/m) P dt + dW, P_0 = p, truncation N.
struct ModelParams {
  Matrix M;
  double m = 1;
  Vector p;
  int N = 1;

  int dim() const { return static_cast<int>(M.rows()); }
  void validate() const;
};

struct GaussianLaw {
  Vector mean;
  Matrix cov;
};

/// Law of P_t: mean e^{-(M/m)t} p, covariance m Sigma~_{t/m}.
GaussianLaw law_at(const ModelParams& params, double t);

/// E[G^{(x)q}] for G ~ N(mu, Sigma):
///   sum_k C(q,2k) (2k-1)!! sym(mu^{(x)(q-2k)} (x) Sigma^{(x)k}).
Tensord gaussian_tensor_moment(const GaussianLaw& law, int q);

/// Deterministic per-path stream: (seed, stream_id) -> independent RNG.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);
  double gaussian() { return normal_(gen_); }
  Vector gaussian_vector(int d) {
    Vector z(d);
    for (int i = 0; i < d; ++i) z[i] = gaussian();
    return z;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

/// Exact OU transition over a fixed step dt, precomputed once per
/// (params, dt): P' = e^{-(M/m)dt} P + L z with L L^T = m Sigma~_{dt/m}.
class OuTransition {
 public:
  OuTransition(const ModelParams& params, double dt);

  const Matrix& decay() const { return decay_; }
  const Matrix& noise_chol() const { return chol_; }

  Vector step(const Vector& state, RngStream& rng) const {
    return step_with_noise(state, rng.gaussian_vector(dim_));
  }
  Vector step_with_noise(const Vector& state, const Vector& z) const {
    return decay_ * state + chol_ * z;
  }

 private:
  int dim_;
  Matrix decay_;
  Matrix chol_;
};

/// One exact transition of length dt from `state`.
Vector exact_step(const ModelParams& params, const Vector& state, double dt,
                  RngStream& rng);

}  // namespace ousig
