#include "ousig/closed_forms.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "ousig/quadrature.hpp"

namespace ousig {

ExpChainCoefficients ExpChainCoefficients::build(std::span<const Complex> c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) throw Error("exp_chain needs at least one exponent");
  for (const Complex& ci : c)
    if (!(ci.real() > 0))
      throw Error("exp_chain exponents must have positive real parts");
  std::vector<Complex> a{Complex(1) / c[0], Complex(-1) / c[0]};
  for (int k = 2; k <= n; ++k) {
    std::vector<Complex> next(k + 1);
    Complex tail = 0;  // c_k + ... + c_{k-i+1}
    for (int i = 1; i <= k; ++i) {
      tail += c[k - i];
      assert(tail.real() > 0);
      next[i] = -a[i - 1] / tail;
    }
    Complex sum = 0;
    for (int i = 1; i <= k; ++i) sum += next[i];
    next[0] = -sum;
    a = std::move(next);
  }
  ExpChainCoefficients out;
  out.exponents.assign(c.begin(), c.end());
  out.coeffs = std::move(a);
  return out;
}

Complex ExpChainCoefficients::value_at(double t) const {
  const int n = static_cast<int>(exponents.size());
  Complex v = coeffs[0];
  Complex tail = 0;
  for (int i = 1; i <= n; ++i) {
    tail += exponents[n - i];
    v += coeffs[i] * std::exp(-tail * t);
  }
  return v;
}

Complex exp_chain(std::span<const Complex> c, double t) {
  return ExpChainCoefficients::build(c).value_at(t);
}

TensorSeriesd esig_1d(double theta, double sigma_noise, double x, double t,
                      int N) {
  if (!(theta > 0)) throw Error("esig_1d: theta must be positive");
  if (N < 0) throw Error("esig_1d: N must be nonnegative");
  const double a = 1.0 - std::exp(-theta * t);
  const double b = 1.0 - std::exp(-2.0 * theta * t);
  const double s2 = sigma_noise * sigma_noise / (2.0 * theta);
  TensorSeriesd s = TensorSeriesd::one(1, N);
  double factorial = 1;
  for (int n = 1; n <= N; ++n) {
    factorial *= n;
    double level = 0;
    double binom = 1;       // C(n, 2i)
    double dblfact = 1;     // (2i-1)!!
    for (int i = 0; 2 * i <= n; ++i) {
      if (i > 0) {
        binom *= static_cast<double>(n - 2 * i + 2) * (n - 2 * i + 1) /
                 (2.0 * i * (2.0 * i - 1));
        dblfact *= 2 * i - 1;
      }
      level += binom * std::pow(-x * a, n - 2 * i) * std::pow(s2 * b, i) *
               dblfact;
    }
    s.level(n).entries()[0] = level / factorial;
  }
  return s;
}

TensorSeriesd esig_1d_limit(double p, int N) {
  TensorSeriesd s = TensorSeriesd::one(1, N);
  double term = 1;
  for (int n = 1; n <= N; ++n) {
    term *= -p / n;
    s.level(n).entries()[0] = term;
  }
  return s;
}

Tensord phi1(const ModelParams& params, double t) {
  if (t < 0) throw Error("phi1: t must be nonnegative");
  const Vector v =
      expm(params.M / params.m, t) * params.p - params.p;
  return Tensord::from_vector(v);
}

Tensord phi2(const ModelParams& params, double t) {
  if (!(t > 0)) throw Error("phi2: t must be positive");
  Tensord out = frakA_finite(params, 2, t).value;
  out += Tensord::from_matrix(
      Matrix(t * xi_correction(params.M, params.m, t)));
  return out;
}

namespace {

struct EigenCache {
  std::mutex mu;
  std::map<std::vector<double>, std::unique_ptr<EigenSystem>> entries;
};

EigenCache& eigen_cache() {
  static EigenCache cache;
  return cache;
}

std::unique_ptr<EigenSystem> make_eigen_system(const Matrix& m) {
  auto sys = std::make_unique<EigenSystem>();
  const Eigen::Index d = m.rows();
  const double scale = std::max(sup_norm(m), 1.0);
  sys->scalar_multiple = true;
  sys->diagonal = true;
  for (Eigen::Index i = 0; i < d && (sys->diagonal || sys->scalar_multiple); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && std::abs(m(i, j)) > 1e-14 * scale) {
        sys->diagonal = false;
        sys->scalar_multiple = false;
        break;
      }
      if (i == j && std::abs(m(i, i) - m(0, 0)) > 1e-14 * scale)
        sys->scalar_multiple = false;
    }
  }
  if (sys->diagonal) {
    sys->Q = MatrixC::Identity(d, d);
    sys->Qinv = sys->Q;
    sys->lambda = m.diagonal().cast<Complex>();
    sys->cond = 1;
    sys->diagonalizable = true;
    return sys;
  }
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigen decomposition failed");
  sys->Q = es.eigenvectors();
  sys->lambda = es.eigenvalues();
  Eigen::JacobiSVD<MatrixC> svd(sys->Q);
  const double smin = svd.singularValues()(d - 1);
  sys->cond = smin > 0 ? svd.singularValues()(0) / smin
                       : std::numeric_limits<double>::infinity();
  sys->diagonalizable = std::isfinite(sys->cond) && sys->cond <= 1e6;
  if (sys->diagonalizable) sys->Qinv = sys->Q.inverse();
  return sys;
}

}  // namespace

const EigenSystem& eigen_system(const Matrix& m) {
  std::vector<double> key(m.data(), m.data() + m.size());
  key.push_back(static_cast<double>(m.rows()));
  auto& cache = eigen_cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  auto it = cache.entries.find(key);
  if (it == cache.entries.end())
    it = cache.entries.emplace(std::move(key), make_eigen_system(m)).first;
  return *it->second;
}

namespace {

/// Shared kernel of the diagonalizable branches. Entry J of the tensor in
/// the eigenbasis is prod_l (-lambda_{j_l} w_{j_l}) times the simplex chain
/// value for exponents (lambda_{j_1}, ..., lambda_{j_n}) at the horizon
/// (infinity in the limit regime); the result is pushed forward by Q^{(x)n}.
Tensord assemble_diagonalizable(const EigenSystem& es, const Vector& p, int n,
                                double horizon, bool limit) {
  const int d = static_cast<int>(es.Q.rows());
  checked_entry_count(d, n);
  const VectorC w = es.Qinv * p.cast<Complex>();
  Tensorc z(d, n);
  std::vector<int> idx(n);
  std::vector<Complex> chain(n);
  for (std::int64_t f = 0; f < z.size(); ++f) {
    z.multi_index(f, idx);
    Complex coeff(1);
    for (int l = 0; l < n; ++l) {
      const Complex lam = es.lambda[idx[l]];
      coeff *= -lam * w[idx[l]];
      chain[l] = lam;
    }
    if (coeff == Complex(0)) continue;
    Complex chain_value;
    if (limit) {
      chain_value = Complex(1);
      Complex tail = 0;
      for (int l = n - 1; l >= 0; --l) {
        tail += chain[l];
        chain_value /= tail;
      }
    } else {
      chain_value = exp_chain(chain, horizon);
    }
    z.entries()[f] = coeff * chain_value;
  }
  const Tensorc pushed =
      apply_operator(MatrixTensorOperatorc::same(d, n, es.Q), z);
  return real_part(pushed, 1e-9 * std::max(1.0, linfty_norm(pushed)));
}

Vector frakA_integrand(const ModelParams& params, double s) {
  return Vector(-(params.M / params.m) *
                (expm(params.M / params.m, s) * params.p));
}

/// F_k(t) = int_0^t F_{k-1}(s) (x) g(s) ds with the closed-form base
/// F_1(s) = (e^{-(M/m)s} - Id) p.
Tensord frakA_quadrature(const ModelParams& params, int k, double upper) {
  if (k == 1) {
    return Tensord::from_vector(
        Vector(expm(params.M / params.m, upper) * params.p - params.p));
  }
  QuadOptions opt;
  opt.abs_tol = 1e-9;
  return integrate(
      [&](double s) {
        return tensor_product(frakA_quadrature(params, k - 1, s),
                              Tensord::from_vector(frakA_integrand(params, s)));
      },
      0.0, upper, opt);
}

}  // namespace

namespace {

FrakA frakA_common(const ModelParams& params, int n, double t,
                   bool force_quadrature) {
  if (n < 0) throw Error("frakA level must be nonnegative");
  if (t < 0) throw Error("frakA: t must be nonnegative");
  const int d = params.dim();
  FrakA out;
  out.level = n;
  out.regime = {false, t, params.m};
  if (n == 0) {
    out.value = Tensord::scalar(d, 1.0);
    return out;
  }
  checked_entry_count(d, n);
  if (t == 0) {
    out.value = Tensord(d, n);
    return out;
  }
  const EigenSystem& es = eigen_system(params.M);
  if (!force_quadrature && es.diagonalizable) {
    out.value = assemble_diagonalizable(es, params.p, n, t / params.m, false);
  } else {
    out.value = frakA_quadrature(params, n, t);
  }
  return out;
}

}  // namespace

FrakA frakA_finite(const ModelParams& params, int n, double t) {
  return frakA_common(params, n, t, false);
}

FrakA frakA_finite_quadrature(const ModelParams& params, int n, double t) {
  return frakA_common(params, n, t, true);
}

FrakA frakA_limit(const Matrix& M, const Vector& p, int n) {
  if (n < 0) throw Error("frakA level must be nonnegative");
  const int d = static_cast<int>(M.rows());
  const SpectralProfile prof = spectral_profile(M);
  FrakA out;
  out.level = n;
  out.regime = {true, 0, 0};
  if (n == 0) {
    out.value = Tensord::scalar(d, 1.0);
    return out;
  }
  checked_entry_count(d, n);
  const EigenSystem& es = eigen_system(M);
  if (es.scalar_multiple) {
    // (-p)^{(x)n} / n!
    Tensord power = Tensord::scalar(d, 1.0);
    const Tensord mp = Tensord::from_vector(Vector(-p));
    for (int k = 1; k <= n; ++k) {
      power = tensor_product(power, mp);
      power *= 1.0 / k;
    }
    out.value = power;
    return out;
  }
  if (es.diagonal) {
    // Componentwise: prod_l (-lambda_{i_l} p^{i_l}) / (lambda_{i_l}+...+lambda_{i_n}).
    const Vector lam = M.diagonal();
    Tensord v(d, n);
    std::vector<int> idx(n);
    for (std::int64_t f = 0; f < v.size(); ++f) {
      v.multi_index(f, idx);
      double entry = 1;
      double tail = 0;
      for (int l = n - 1; l >= 0; --l) {
        tail += lam[idx[l]];
        entry *= -lam[idx[l]] * p[idx[l]] / tail;
      }
      v.entries()[f] = entry;
    }
    out.value = v;
    return out;
  }
  if (es.diagonalizable) {
    out.value = assemble_diagonalizable(es, p, n, 0, true);
    return out;
  }
  // Defective spectrum: finite horizon t/m = 40/lambda makes the tail
  // exponentially negligible.
  ModelParams horizon{M, 1.0, p, std::max(n, 1)};
  out.value = frakA_finite(horizon, n, 40.0 / prof.lambda).value;
  return out;
}

}  // namespace ousig
