#include "ousig/limit_engine.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace ousig {

namespace {

TensorSeriesd assemble_decomposition(
    int dim, int depth, const Matrix& correction,
    const std::function<Tensord(int)>& frak_a,
    std::vector<std::string>* provenance) {
  TensorSeriesd series = TensorSeriesd::one(dim, depth);
  // correction^{(x)k} as level-2k tensors, k <= depth/2.
  std::vector<Tensord> powers{Tensord::scalar(dim, 1.0)};
  const Tensord corr2 = Tensord::from_matrix(correction);
  for (int k = 1; 2 * k <= depth; ++k)
    powers.push_back(tensor_product(powers.back(), corr2));
  provenance->assign(1, "1");
  for (int n = 1; n <= depth; ++n) {
    Tensord level(dim, n);
    std::string label;
    for (int k = 0; 2 * k <= n; ++k) {
      level += tensor_product(frak_a(n - 2 * k), powers[k]);
      if (!label.empty()) label += " + ";
      label += "A" + std::to_string(n - 2 * k);
      if (k > 0) label += "(x)Xi^" + std::to_string(k);
    }
    series.level(n) = level;
    provenance->push_back(label);
  }
  return series;
}

}  // namespace

EsigResult esig_good_part(const ModelParams& params, double t) {
  if (!(t > 0)) throw Error("esig_good_part: t must be positive");
  params.validate();
  EsigResult out;
  out.regime = Regime::finite_mass;
  out.mass = params.m;
  out.t = t;
  const Matrix xi_t = Matrix(t * xi_correction(params.M, params.m, t));
  out.series = assemble_decomposition(
      params.dim(), params.N, xi_t,
      [&](int q) { return frakA_finite(params, q, t).value; },
      &out.provenance);
  return out;
}

EsigResult esig_limit(const Matrix& M, const Vector& p, double t, int N) {
  if (!(t > 0)) throw Error("esig_limit: t must be positive");
  if (p.size() != M.rows()) throw DimensionError("p length mismatch");
  EsigResult out;
  out.regime = Regime::limit;
  out.t = t;
  const Matrix area_t = Matrix(t * area_limit(M));
  out.series = assemble_decomposition(
      static_cast<int>(M.rows()), N, area_t,
      [&](int q) { return frakA_limit(M, p, q).value; }, &out.provenance);
  return out;
}

ConvergenceReport convergence_sweep(const ModelParams& params_template,
                                    double t, int n,
                                    std::span<const double> m_grid) {
  if (m_grid.size() < 2) throw Error("m_grid needs at least two points");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (!(m_grid[i] > 0)) throw Error("m_grid must be positive");
    if (i > 0 && !(m_grid[i] < m_grid[i - 1]))
      throw Error("m_grid must be strictly decreasing");
  }
  ConvergenceReport report;
  report.level = n;
  report.m_grid.assign(m_grid.begin(), m_grid.end());

  ModelParams params = params_template;
  params.N = std::max(params.N, n);
  const EsigResult limit =
      esig_limit(params.M, params.p, t, params.N);
  for (double mass : m_grid) {
    params.m = mass;
    const EsigResult good = esig_good_part(params, t);
    report.errors.push_back(
        linfty_norm(Tensord(good.series.level(n) - limit.series.level(n))));
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < report.errors.size(); ++i) {
    if (report.errors[i] > kSweepErrorFloor) {
      lx.push_back(std::log(report.m_grid[i]));
      ly.push_back(std::log(report.errors[i]));
      report.reference_constant = std::max(
          report.reference_constant, report.errors[i] / report.m_grid[i]);
    }
  }
  if (lx.empty()) {
    report.floor = true;
    report.slope = std::numeric_limits<double>::quiet_NaN();
  } else if (lx.size() < 2) {
    throw DegenerateFitError("slope fit has fewer than 2 usable points");
  } else {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    report.slope = sxy / sxx;
  }
  for (double mass : m_grid)
    report.bounds.push_back(report.reference_constant * mass);
  return report;
}

}  // namespace ousig
