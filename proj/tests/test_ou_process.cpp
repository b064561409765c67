#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ousig/ou_process.hpp"
#include "oracles.hpp"

using namespace ousig;

namespace {

ModelParams make_params(const Matrix& m, double mass, const Vector& p, int n) {
  ModelParams params;
  params.M = m;
  params.m = mass;
  params.p = p;
  params.N = n;
  return params;
}

}  // namespace

TEST_CASE("params validation") {
  Vector p(2);
  p << 1, 0;
  ModelParams good = make_params(Matrix::Identity(2, 2), 0.5, p, 2);
  CHECK_NOTHROW(good.validate());
  ModelParams bad_mass = good;
  bad_mass.m = 0;
  CHECK_THROWS_AS(bad_mass.validate(), Error);
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  ModelParams bad_spec = make_params(rot, 0.5, p, 2);
  CHECK_THROWS_AS(bad_spec.validate(), NonHurwitzError);
}

TEST_CASE("law at t = 0 is the point mass at p") {
  Vector p(2);
  p << 0.3, -1.2;
  const auto law = law_at(make_params(Matrix::Identity(2, 2), 0.5, p, 2), 0.0);
  CHECK((law.mean - p).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(sup_norm(law.cov) == 0.0);
}

TEST_CASE("1-D covariance closed form") {
  // theta = M/m: cov(t) = (1 - e^{-2 theta t}) / (2 theta), independent of p.
  Matrix m1 = Matrix::Identity(1, 1) * 1.5;
  Vector p1(1);
  p1 << 2.0;
  const double mass = 0.4;
  const double theta = 1.5 / mass;
  for (double t : {0.1, 0.5, 2.0}) {
    const auto law = law_at(make_params(m1, mass, p1, 2), t);
    const double expected = (1.0 - std::exp(-2 * theta * t)) / (2 * theta);
    CHECK(law.cov(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(law.mean[0] ==
          doctest::Approx(2.0 * std::exp(-theta * t)).epsilon(1e-12));
  }
}

TEST_CASE("law covariance matches the defining integral") {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 4; ++rep) {
    const int d = 2 + rep % 2;
    const Matrix m = oracle::random_hurwitz(gen, d);
    Vector p = Vector::Zero(d);
    const double mass = 0.3 + 0.2 * rep;
    const auto params = make_params(m, mass, p, 2);
    const double t = 0.8;
    const Matrix direct = oracle::simpson(
        [&](double s) {
          const Matrix e = oracle::taylor_expm(m / mass, s);
          return Matrix(e * e.transpose());
        },
        0.0, t, 1e-12);
    CHECK(sup_norm(Matrix(law_at(params, t).cov - direct)) <= 1e-9);
  }
}

TEST_CASE("long-time law approaches the stationary one") {
  Matrix m(2, 2);
  m << 1, 2, -2, 1;
  Vector p(2);
  p << 3, -1;
  const double mass = 0.5;
  const auto law = law_at(make_params(m, mass, p, 2), 50.0);
  CHECK(law.mean.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sup_norm(Matrix(law.cov - mass * stationary_C(m))) <= 1e-10);
}

TEST_CASE("gaussian moments: second and third") {
  GaussianLaw law;
  law.mean = Vector(2);
  law.mean << 0.5, -1.0;
  law.cov = Matrix(2, 2);
  law.cov << 1.0, 0.3, 0.3, 2.0;
  const Tensord m2 = gaussian_tensor_moment(law, 2);
  const Tensord expected2 =
      tensor_product(Tensord::from_vector(law.mean),
                     Tensord::from_vector(law.mean)) +
      Tensord::from_matrix(law.cov);
  CHECK(linfty_norm(m2 - expected2) <= 1e-12);

  GaussianLaw centered = law;
  centered.mean = Vector::Zero(2);
  CHECK(linfty_norm(gaussian_tensor_moment(centered, 3)) == 0.0);
  CHECK(gaussian_tensor_moment(centered, 0).entries()[0] == 1.0);
}

TEST_CASE("scalar centered fourth moment is 3 sigma^4") {
  GaussianLaw law;
  law.mean = Vector::Zero(1);
  law.cov = Matrix::Identity(1, 1) * 1.7;
  const Tensord m4 = gaussian_tensor_moment(law, 4);
  CHECK(m4.entries()[0] == doctest::Approx(3.0 * 1.7 * 1.7).epsilon(1e-12));
}

TEST_CASE("gaussian moments against a direct Monte Carlo estimate") {
  GaussianLaw law;
  law.mean = Vector(2);
  law.mean << 0.4, -0.2;
  law.cov = Matrix(2, 2);
  law.cov << 1.0, -0.4, -0.4, 0.8;
  const Eigen::LLT<Matrix> llt(law.cov);
  const Matrix l = llt.matrixL();

  const std::int64_t samples = 1'000'000;
  RngStream rng(4242, 0);
  std::vector<Tensord> sums, sq;
  for (int q = 1; q <= 4; ++q) {
    sums.emplace_back(2, q);
    sq.emplace_back(2, q);
  }
  for (std::int64_t s = 0; s < samples; ++s) {
    const Vector g = law.mean + l * rng.gaussian_vector(2);
    Tensord power = Tensord::from_vector(g);
    for (int q = 1; q <= 4; ++q) {
      if (q > 1) power = tensor_product(power, Tensord::from_vector(g));
      sums[q - 1] += power;
      for (std::int64_t i = 0; i < power.size(); ++i)
        sq[q - 1].entries()[i] += power.entries()[i] * power.entries()[i];
    }
  }
  for (int q = 1; q <= 4; ++q) {
    const Tensord analytic = gaussian_tensor_moment(law, q);
    for (std::int64_t i = 0; i < analytic.size(); ++i) {
      const double mean = sums[q - 1].entries()[i] / samples;
      const double var =
          std::max(0.0, sq[q - 1].entries()[i] / samples - mean * mean);
      const double se = std::sqrt(var / samples);
      CHECK(std::abs(mean - analytic.entries()[i]) <= 4 * se + 1e-12);
    }
  }
}

TEST_CASE("exact_step with zero noise is the decay map") {
  Matrix m(2, 2);
  m << 1, 1, 0, 2;
  Vector p(2);
  p << 1, -1;
  const auto params = make_params(m, 0.5, p, 2);
  const OuTransition kernel(params, 0.25);
  const Vector next = kernel.step_with_noise(p, Vector::Zero(2));
  const Vector expected = expm(m / 0.5, 0.25) * p;
  CHECK((next - expected).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("exact_step mean over many samples") {
  Matrix m(2, 2);
  m << 1, 0.5, -0.5, 2;
  Vector p(2);
  p << 1, 2;
  const auto params = make_params(m, 1.0, p, 2);
  const double dt = 0.3;
  const OuTransition kernel(params, dt);
  const std::int64_t samples = 100'000;
  Vector sum = Vector::Zero(2), sumsq = Vector::Zero(2);
  RngStream rng(99, 1);
  for (std::int64_t s = 0; s < samples; ++s) {
    const Vector x = kernel.step(p, rng);
    sum += x;
    sumsq += x.cwiseProduct(x);
  }
  const Vector mean = sum / samples;
  const Vector expected = expm(m, dt) * p;
  for (int i = 0; i < 2; ++i) {
    const double var = sumsq[i] / samples - mean[i] * mean[i];
    const double se = std::sqrt(var / samples);
    CHECK(std::abs(mean[i] - expected[i]) <= 4 * se);
  }
}

TEST_CASE("stationary start stays stationary over one step") {
  Matrix m(2, 2);
  m << 1, 2, -2, 1;
  const double mass = 0.5;
  const auto params = make_params(m, mass, Vector::Zero(2), 2);
  const Matrix stat = mass * stationary_C(m);
  const Eigen::LLT<Matrix> llt(stat);
  const Matrix l = llt.matrixL();
  const OuTransition kernel(params, 0.2);
  const std::int64_t samples = 100'000;
  Matrix cov_acc = Matrix::Zero(2, 2);
  RngStream rng(123, 7);
  for (std::int64_t s = 0; s < samples; ++s) {
    const Vector x0 = l * rng.gaussian_vector(2);
    const Vector x1 = kernel.step(x0, rng);
    cov_acc += x1 * x1.transpose();
  }
  const Matrix cov = cov_acc / samples;
  CHECK(sup_norm(Matrix(cov - stat)) <= 0.05 * sup_norm(stat));
}

TEST_CASE("chaining substeps composes to one long step") {
  Matrix m(2, 2);
  m << 1, 1, 0, 2;
  const auto params = make_params(m, 0.7, Vector::Zero(2), 2);
  const double dt = 0.15;
  const int k = 4;
  const OuTransition small(params, dt);
  const OuTransition big(params, k * dt);
  // Mean map: decay^k == decay of k dt.
  Matrix chained_decay = Matrix::Identity(2, 2);
  for (int i = 0; i < k; ++i) chained_decay = small.decay() * chained_decay;
  CHECK(sup_norm(Matrix(chained_decay - big.decay())) <= 1e-10);
  // Covariance: sum_i decay^i cov decay^i^T == cov of k dt.
  const Matrix cov1 = small.noise_chol() * small.noise_chol().transpose();
  Matrix acc = Matrix::Zero(2, 2);
  Matrix power = Matrix::Identity(2, 2);
  for (int i = 0; i < k; ++i) {
    acc += power * cov1 * power.transpose();
    power = small.decay() * power;
  }
  const Matrix covk = big.noise_chol() * big.noise_chol().transpose();
  CHECK(sup_norm(Matrix(acc - covk)) <= 1e-10);
}

TEST_CASE("streams with different ids are distinct, same id reproducible") {
  RngStream a(5, 1), b(5, 1), c(5, 2);
  double max_diff_same = 0, max_diff_other = 0;
  for (int i = 0; i < 32; ++i) {
    const double va = a.gaussian();
    const double vb = b.gaussian();
    const double vc = c.gaussian();
    max_diff_same = std::max(max_diff_same, std::abs(va - vb));
    max_diff_other = std::max(max_diff_other, std::abs(va - vc));
  }
  CHECK(max_diff_same == 0.0);
  CHECK(max_diff_other > 0.0);
}
