#include "ousig/ou_process.hpp"

#include <cmath>

namespace ousig {

void ModelParams::validate() const {
  if (M.rows() != M.cols()) throw DimensionError("M must be square");
  if (p.size() != M.rows())
    throw DimensionError("p length does not match dim of M");
  if (!(m > 0)) throw Error("mass m must be positive");
  if (N < 1) throw Error("truncation depth N must be >= 1");
  spectral_profile(M);
}

GaussianLaw law_at(const ModelParams& params, double t) {
  if (t < 0) throw Error("law_at: t must be nonnegative");
  GaussianLaw law;
  law.mean = expm(params.M / params.m, t) * params.p;
  law.cov = params.m * sigma_tilde(params.M, t / params.m);
  return law;
}

namespace {

double double_factorial_odd(int k) {
  // (2k-1)!! = (2k)! / (k! 2^k)
  double v = 1;
  for (int j = 1; j <= k; ++j) v *= 2 * j - 1;
  return v;
}

double binomial(int n, int k) {
  double v = 1;
  for (int j = 1; j <= k; ++j) v *= static_cast<double>(n - k + j) / j;
  return v;
}

}  // namespace

Tensord gaussian_tensor_moment(const GaussianLaw& law, int q) {
  const int d = static_cast<int>(law.mean.size());
  if (q < 0) throw Error("moment order must be nonnegative");
  if (q == 0) return Tensord::scalar(d, 1.0);
  const Tensord mu = Tensord::from_vector(law.mean);
  const Tensord sig = Tensord::from_matrix(law.cov);
  Tensord total(d, q);
  for (int k = 0; 2 * k <= q; ++k) {
    Tensord term = Tensord::scalar(d, 1.0);
    for (int j = 0; j < q - 2 * k; ++j) term = tensor_product(term, mu);
    for (int j = 0; j < k; ++j) term = tensor_product(term, sig);
    total += binomial(q, 2 * k) * double_factorial_odd(k) * sym(term);
  }
  return total;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (stream_id + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  gen_.seed(seq);
}

OuTransition::OuTransition(const ModelParams& params, double dt)
    : dim_(params.dim()) {
  if (!(dt > 0)) throw Error("transition step dt must be positive");
  decay_ = expm(params.M / params.m, dt);
  const Matrix cov = params.m * sigma_tilde(params.M, dt / params.m);
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("transition covariance is not positive definite");
  chol_ = llt.matrixL();
}

Vector exact_step(const ModelParams& params, const Vector& state, double dt,
                  RngStream& rng) {
  return OuTransition(params, dt).step(state, rng);
}

}  // namespace ousig
