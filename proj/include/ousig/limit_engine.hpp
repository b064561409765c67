#pragma once

#include <span>
#include <string>
#include <vector>

#include "ousig/closed_forms.hpp"
#include "ousig/series.hpp"

namespace ousig {

enum class Regime { finite_mass, limit };

struct EsigResult {
  TensorSeriesd series;
  Regime regime = Regime::finite_mass;
  double mass = 0;
  double t = 0;
  // One entry per level, naming the operations that produced it.
  std::vector<std::string> provenance;
};

/// Good part of the finite-mass decomposition: level n is
///   sum_{k=0}^{floor(n/2)} frakA_{n-2k}^{(m)}(t,p) (x) [Xi^{(m)}(t) t]^{(x)k}.
/// The dropped remainder is O(m) and is measured against the MC oracle,
/// never synthesized.
EsigResult esig_good_part(const ModelParams& params, double t);

/// Zero-mass limit: level n is
///   sum_k frakA-bar_{n-2k}(p) (x) [(M C - C M*)/2]^{(x)k} t^k.
EsigResult esig_limit(const Matrix& M, const Vector& p, double t, int N);

struct ConvergenceReport {
  int level = 0;
  std::vector<double> m_grid;
  std::vector<double> errors;  // |good_n - limit_n|_inf per m
  std::vector<double> bounds;  // reference_constant * m
  double slope = 0;            // log-log least-squares fit
  double reference_constant = 0;
  bool floor = false;  // every point below the 1e-12 error floor
};

inline constexpr double kSweepErrorFloor = 1e-12;

/// m-sweep of |esig_good_part - esig_limit| at one level, with the fitted
/// decay slope. Points below the 1e-12 floor are excluded from the fit;
/// all-floor sweeps are reported as such. Throws DegenerateFitError when
/// fewer than two points remain otherwise.
ConvergenceReport convergence_sweep(const ModelParams& params_template,
                                    double t, int n,
                                    std::span<const double> m_grid);

}  // namespace ousig
