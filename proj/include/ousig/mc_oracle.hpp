#pragma once

#include <cstdint>
#include <vector>

#include "ousig/ou_process.hpp"
#include "ousig/series.hpp"

namespace ousig {

/// One realization of P on a uniform grid.
struct PathSample {
  std::vector<double> times;
  std::vector<Vector> points;
};

/// Exact-transition simulation of P over [0, t] with `steps` uniform steps.
PathSample simulate_path(const ModelParams& params, double t, int steps,
                         RngStream& rng);

/// Truncated signature of the piecewise-linear interpolation: the Chen
/// product over segments of tensor_exp of the increments.
TensorSeriesd path_signature(const PathSample& path, int N);

struct McOptions {
  std::int64_t paths = 100'000;
  int steps = 2000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  // Harness mode: increments are pure Brownian, N(0, dt Id); the drift is
  // forced to zero so Fawcett's formula applies.
  bool drift_free = false;
};

struct McEstimate {
  TensorSeriesd mean;
  TensorSeriesd stderr_;  // per-entry standard error
  std::int64_t paths = 0;
  int steps = 0;
  std::uint64_t seed = 0;
};

/// Entrywise mean and standard error of the truncated signature across
/// independent paths. Deterministic for fixed (seed, paths, steps)
/// regardless of thread count: path i always uses stream (seed, i) and
/// partial sums combine in fixed block order.
McEstimate expected_signature_mc(const ModelParams& params, double t, int N,
                                 const McOptions& opt);

}  // namespace ousig
