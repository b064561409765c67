#include "ousig/mc_oracle.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace ousig {

PathSample simulate_path(const ModelParams& params, double t, int steps,
                         RngStream& rng) {
  if (steps < 1) throw Error("simulate_path: steps must be >= 1");
  if (!(t > 0)) throw Error("simulate_path: t must be positive");
  const double dt = t / steps;
  const OuTransition kernel(params, dt);
  PathSample path;
  path.times.resize(steps + 1);
  path.points.resize(steps + 1);
  path.times[0] = 0;
  path.points[0] = params.p;
  for (int k = 1; k <= steps; ++k) {
    path.times[k] = k * dt;
    path.points[k] = kernel.step(path.points[k - 1], rng);
  }
  return path;
}

TensorSeriesd path_signature(const PathSample& path, int N) {
  if (path.points.empty()) throw Error("path_signature: empty path");
  const int d = static_cast<int>(path.points.front().size());
  TensorSeriesd sig = TensorSeriesd::one(d, N);
  for (std::size_t k = 1; k < path.points.size(); ++k) {
    const Vector delta = path.points[k] - path.points[k - 1];
    sig = series_product(sig, tensor_exp<double>(delta, N));
  }
  return sig;
}

namespace {

struct Layout {
  int d = 0;
  int N = 0;
  std::vector<std::int64_t> offset;  // per level, into the flat buffer
  std::vector<std::int64_t> len;     // d^k
  std::int64_t total = 0;

  Layout(int dim, int depth) : d(dim), N(depth) {
    std::int64_t off = 0, l = 1;
    for (int k = 0; k <= depth; ++k) {
      offset.push_back(off);
      len.push_back(l);
      off += l;
      l *= dim;
    }
    total = off;
  }
};

// pw holds levels 1..N of delta^{(x)j}/j! back to back.
void segment_powers(const Layout& lo, const double* delta, double* pw) {
  for (int i = 0; i < lo.d; ++i) pw[i] = delta[i];
  const double* prev = pw;
  double* cur = pw + lo.d;
  for (int j = 2; j <= lo.N; ++j) {
    const std::int64_t plen = lo.len[j - 1];
    const double inv = 1.0 / j;
    std::int64_t w = 0;
    for (std::int64_t a = 0; a < plen; ++a) {
      const double pa = prev[a] * inv;
      for (int i = 0; i < lo.d; ++i) cur[w++] = pa * delta[i];
    }
    prev = cur;
    cur += lo.len[j];
  }
}

// sig <- sig (x) exp(delta): top-down Chen update, in place.
void multiply_by_segment_exp(const Layout& lo, double* sig, const double* pw) {
  for (int n = lo.N; n >= 1; --n) {
    double* out = sig + lo.offset[n];
    const double* pwj = pw;
    for (int j = 1; j <= n; ++j) {
      const double* lower = sig + lo.offset[n - j];
      const std::int64_t llen = lo.len[n - j];
      const std::int64_t jlen = lo.len[j];
      std::int64_t w = 0;
      for (std::int64_t a = 0; a < llen; ++a) {
        const double la = lower[a];
        if (la != 0) {
          for (std::int64_t b = 0; b < jlen; ++b) out[w + b] += la * pwj[b];
        }
        w += jlen;
      }
      pwj += jlen;
    }
  }
}

struct BlockPartial {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

}  // namespace

McEstimate expected_signature_mc(const ModelParams& params, double t, int N,
                                 const McOptions& opt) {
  if (opt.paths < 2) throw Error("expected_signature_mc: paths must be >= 2");
  if (opt.steps < 1) throw Error("expected_signature_mc: steps must be >= 1");
  params.validate();
  const int d = params.dim();
  const Layout lo(d, N);
  const double dt = t / opt.steps;
  const OuTransition kernel(params, dt);
  const double bm_scale = std::sqrt(dt);

  constexpr std::int64_t kBlock = 4096;
  const std::int64_t nblocks = (opt.paths + kBlock - 1) / kBlock;
  std::vector<BlockPartial> partials(nblocks);

  auto run_block = [&](std::int64_t blk) {
    BlockPartial& part = partials[blk];
    part.sum.assign(lo.total, 0.0);
    part.sumsq.assign(lo.total, 0.0);
    std::vector<double> sig(lo.total), pw(lo.total - 1);
    Vector state(d), next(d), delta(d), z(d);
    const std::int64_t lopath = blk * kBlock;
    const std::int64_t hipath = std::min(opt.paths, lopath + kBlock);
    for (std::int64_t path = lopath; path < hipath; ++path) {
      RngStream rng(opt.seed, static_cast<std::uint64_t>(path));
      std::fill(sig.begin(), sig.end(), 0.0);
      sig[0] = 1.0;
      state = params.p;
      for (int k = 0; k < opt.steps; ++k) {
        for (int i = 0; i < d; ++i) z[i] = rng.gaussian();
        if (opt.drift_free) {
          delta = bm_scale * z;
        } else {
          next = kernel.decay() * state + kernel.noise_chol() * z;
          delta = next - state;
          state.swap(next);
        }
        segment_powers(lo, delta.data(), pw.data());
        multiply_by_segment_exp(lo, sig.data(), pw.data());
      }
      for (std::int64_t i = 0; i < lo.total; ++i) {
        part.sum[i] += sig[i];
        part.sumsq[i] += sig[i] * sig[i];
      }
    }
  };

  int threads = opt.threads > 0
                    ? opt.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(nblocks)));
  if (threads == 1) {
    for (std::int64_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next_block{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::int64_t b = next_block.fetch_add(1);
          if (b >= nblocks) return;
          run_block(b);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order combine keeps the result independent of thread scheduling.
  std::vector<double> sum(lo.total, 0.0), sumsq(lo.total, 0.0);
  for (const BlockPartial& part : partials) {
    for (std::int64_t i = 0; i < lo.total; ++i) {
      sum[i] += part.sum[i];
      sumsq[i] += part.sumsq[i];
    }
  }

  McEstimate est;
  est.paths = opt.paths;
  est.steps = opt.steps;
  est.seed = opt.seed;
  est.mean = TensorSeriesd(d, N);
  est.stderr_ = TensorSeriesd(d, N);
  const double np = static_cast<double>(opt.paths);
  for (int k = 0; k <= N; ++k) {
    for (std::int64_t i = 0; i < lo.len[k]; ++i) {
      const double mu = sum[lo.offset[k] + i] / np;
      const double var =
          std::max(0.0, (sumsq[lo.offset[k] + i] - np * mu * mu) / (np - 1));
      est.mean.level(k).entries()[i] = mu;
      est.stderr_.level(k).entries()[i] = std::sqrt(var / np);
    }
  }
  return est;
}

}  // namespace ousig
