#include "ousig/pde_checker.hpp"

#include <cmath>

namespace ousig {

namespace {

Tensord eval(const EsigProvider& provider, int level, double t,
             const Vector& p) {
  if (level < 0) return Tensord(static_cast<int>(p.size()), 0);
  return provider(level, t, p);
}

}  // namespace

PdeResidual pde_residual(const EsigProvider& provider,
                         const ModelParams& params, int n,
                         std::span<const PdeProbe> probes, double h) {
  if (n < 0) throw Error("pde_residual: level must be nonnegative");
  const int d = params.dim();
  PdeResidual out;
  out.level = n;
  out.probes.assign(probes.begin(), probes.end());
  for (const PdeProbe& probe : probes) {
    if (!(probe.t > 0)) throw Error("pde_residual: probes must avoid t = 0");
    const double t = probe.t;
    const Vector& p = probe.p;
    if (n == 0) {
      out.residual_norms.push_back(0.0);
      continue;
    }
    const double ht = h * (1.0 + std::abs(t));
    const Tensord phi_n = eval(provider, n, t, p);
    const Tensord phi_nm1 = eval(provider, n - 1, t, p);
    const Tensord phi_nm2 = eval(provider, n - 2, t, p);

    Tensord residual =
        (eval(provider, n, t + ht, p) - eval(provider, n, t - ht, p)) *
        (-1.0 / (2.0 * ht));

    const Vector drift = (params.M / params.m) * p;
    for (int j = 0; j < d; ++j) {
      const double hp = h * (1.0 + std::abs(p[j]));
      Vector pp = p, pm = p;
      pp[j] += hp;
      pm[j] -= hp;
      const Tensord up = eval(provider, n, t, pp);
      const Tensord um = eval(provider, n, t, pm);
      // (1/2) second difference and -(M/m)p . grad, both in coordinate j.
      residual += (up + um - 2.0 * phi_n) * (0.5 / (hp * hp));
      residual += (up - um) * (-drift[j] / (2.0 * hp));
      // + e_j (x) d_{p_j} Phi_{n-1}
      const Tensord dlow =
          (eval(provider, n - 1, t, pp) - eval(provider, n - 1, t, pm)) *
          (1.0 / (2.0 * hp));
      residual += tensor_product(Tensord::basis(d, {j}), dlow);
      // + (1/2) e_j (x) e_j (x) Phi_{n-2}
      if (n >= 2)
        residual +=
            tensor_product(Tensord::basis(d, {j, j}), phi_nm2) * 0.5;
    }
    // - (M/m) p (x) Phi_{n-1}
    residual += tensor_product(Tensord::from_vector(Vector(-drift)), phi_nm1);
    out.residual_norms.push_back(linfty_norm(residual));
  }
  for (double r : out.residual_norms)
    out.max_residual = std::max(out.max_residual, r);
  return out;
}

double initial_condition_residual(const EsigProvider& provider, int depth,
                                  std::span<const PdeProbe> probes) {
  double worst = 0;
  for (const PdeProbe& probe : probes) {
    const Tensord level0 = provider(0, probe.t, probe.p);
    worst = std::max(worst, std::abs(level0.entries()[0] - 1.0));
    for (int k = 0; k <= depth; ++k) {
      Tensord at_zero = provider(k, 0.0, probe.p);
      if (k == 0) at_zero.entries()[0] -= 1.0;
      worst = std::max(worst, linfty_norm(at_zero));
    }
  }
  return worst;
}

EsigProvider esig_1d_provider(double theta) {
  return [theta](int level, double t, const Vector& p) {
    const TensorSeriesd s = esig_1d(theta, 1.0, p[0], t, level);
    return s.level(level);
  };
}

}  // namespace ousig
