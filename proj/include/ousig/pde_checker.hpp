#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ousig/closed_forms.hpp"
#include "ousig/ou_process.hpp"
#include "ousig/tensor.hpp"

namespace ousig {

/// Yields Phi_k(t, p) for the levels the residual needs; k < 0 must return
/// the zero tensor of that level's shape (treated as level 0 here).
using EsigProvider = std::function<Tensord(int level, double t, const Vector& p)>;

struct PdeProbe {
  double t = 0;
  Vector p;
};

struct PdeResidual {
  int level = 0;
  std::vector<PdeProbe> probes;
  std::vector<double> residual_norms;
  double max_residual = 0;
};

/// Central finite-difference evaluation of the graded PDE at each probe:
///   (-d_t + A) Phi_n - (M/m) p (x) Phi_{n-1}
///     + sum_j e_j (x) d_{p_j} Phi_{n-1}
///     + (1/2) sum_j e_j (x) e_j (x) Phi_{n-2}
/// with A = (1/2) Laplacian - (M/m) p . grad; the expression vanishes for
/// the exact expected signature. Steps are h scaled by (1 + |coordinate|).
PdeResidual pde_residual(const EsigProvider& provider,
                         const ModelParams& params, int n,
                         std::span<const PdeProbe> probes, double h = 1e-4);

/// Max deviation from Phi(0, p) = (1, 0, ...) and Phi_0(t, p) = 1 over the
/// probe set.
double initial_condition_residual(const EsigProvider& provider, int depth,
                                  std::span<const PdeProbe> probes);

/// Provider backed by the 1-D closed form with theta = M/m, sigma = 1.
EsigProvider esig_1d_provider(double theta);

}  // namespace ousig
