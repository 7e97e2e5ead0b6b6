#include "texlab/trial_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "texlab/errors.hpp"

namespace texlab {

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(n + other.n);
  const double delta = other.mean - mean;
  mean += delta * static_cast<double>(other.n) / total;
  m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
  n += other.n;
}

double RunningStats::stderr_of_mean() const noexcept {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("TEXLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// Fixed-size copy of the layer for the hot loop.
class LayerKernel {
 public:
  explicit LayerKernel(const CircuitLayer& layer)
      : roles_(layer.roles()), p_(layer.noise().p), q_(layer.noise().q) {
    const ComplexMatrix u = layer.hidden_basis().matrix();
    plus_ = u.col(0);
    minus_ = u.col(1);
    single_.resize(roles_.size());
    partner_.resize(roles_.size());
    for (std::size_t t = 0; t < roles_.size(); ++t) {
      switch (roles_[t]) {
        case TrackRole::H: single_[t] = gate_matrix(GateKind::H, layer.hidden_basis()); break;
        case TrackRole::T: single_[t] = gate_matrix(GateKind::T, layer.hidden_basis()); break;
        case TrackRole::S: single_[t] = gate_matrix(GateKind::S, layer.hidden_basis()); break;
        case TrackRole::Identity: single_[t] = Eigen::Matrix2cd::Identity(); break;
        default: partner_[t] = *layer.partner(t);
      }
    }
    cnot_ = gate_matrix(GateKind::Cnot, layer.hidden_basis());
  }

  Vec2 input(const HaarQubitSample& s) const {
    return std::cos(0.5 * s.theta) * plus_ + std::polar(std::sin(0.5 * s.theta), s.phi) * minus_;
  }

  // Writes exact grand sums for every track.
  void evaluate(const Vec2& psi, double* xs, double* ys) const {
    // Input grand sums, reused when a CNOT is skipped.
    const double in_x = std::norm(psi(0) + psi(1));
    const double in_y = 2.0 * std::norm(psi(0));
    for (std::size_t t = 0; t < roles_.size(); ++t) {
      const TrackRole role = roles_[t];
      if (role == TrackRole::CnotTarget) continue;
      if (role == TrackRole::CnotControl) {
        Vec4 joint;
        joint << psi(0) * psi(0), psi(0) * psi(1), psi(1) * psi(0), psi(1) * psi(1);
        const Vec4 v = cnot_ * joint;
        const double cx = std::norm(v(0) + v(2)) + std::norm(v(1) + v(3));
        const double cy = 2.0 * (std::norm(v(0)) + std::norm(v(1)));
        const double tx = std::norm(v(0) + v(1)) + std::norm(v(2) + v(3));
        const double ty = 2.0 * (std::norm(v(0)) + std::norm(v(2)));
        const std::size_t target = partner_[t];
        xs[t] = noisy(blend(cx, in_x));
        ys[t] = noisy(blend(cy, in_y));
        xs[target] = noisy(blend(tx, in_x));
        ys[target] = noisy(blend(ty, in_y));
        continue;
      }
      const Vec2 out = single_[t] * psi;
      xs[t] = noisy(std::norm(out(0) + out(1)));
      ys[t] = noisy(2.0 * std::norm(out(0)));
    }
  }

  std::size_t tracks() const { return roles_.size(); }

 private:
  double blend(double gate_on, double gate_off) const { return (1.0 - q_) * gate_on + q_ * gate_off; }
  // White noise contributes the maximally mixed state, grand sum 1 in both bases.
  double noisy(double clean) const { return (1.0 - p_) * clean + p_; }

  std::vector<TrackRole> roles_;
  double p_;
  double q_;
  Vec2 plus_;
  Vec2 minus_;
  std::vector<Eigen::Matrix2cd> single_;
  std::vector<std::size_t> partner_;
  Eigen::Matrix4cd cnot_;
};

struct ChunkResult {
  std::vector<RunningStats> x;
  std::vector<RunningStats> y;
};

RunningStats tree_merge(std::vector<RunningStats>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  RunningStats left = tree_merge(parts, lo, mid);
  left.merge(tree_merge(parts, mid, hi));
  return left;
}

}  // namespace

void evaluate_trial(const CircuitLayer& layer, const HaarQubitSample& input,
                    std::vector<double>& sums_x, std::vector<double>& sums_y) {
  const LayerKernel kernel(layer);
  sums_x.assign(layer.num_tracks(), 0.0);
  sums_y.assign(layer.num_tracks(), 0.0);
  kernel.evaluate(kernel.input(input), sums_x.data(), sums_y.data());
}

std::vector<TrackStats> run_trials(const CircuitLayer& layer, const TrialOptions& options) {
  if (options.trials == 0) throw ValidationError("trials", "must be at least 1");
  if (options.shots && *options.shots == 0) throw ValidationError("shots", "must be positive");

  const LayerKernel kernel(layer);
  const std::size_t n_tracks = kernel.tracks();
  const std::size_t n_chunks = (options.trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<ChunkResult> chunks(n_chunks);

  const auto run_chunk = [&](std::size_t c) {
    ChunkResult& res = chunks[c];
    res.x.assign(n_tracks, {});
    res.y.assign(n_tracks, {});
    std::vector<double> xs(n_tracks), ys(n_tracks);
    const std::size_t begin = c * kTrialChunk;
    const std::size_t end = std::min(options.trials, begin + kTrialChunk);
    for (std::size_t trial = begin; trial < end; ++trial) {
      Rng rng = Rng::stream(options.seed, trial);
      const HaarQubitSample sample = sample_haar_qubit(rng);
      kernel.evaluate(kernel.input(sample), xs.data(), ys.data());
      for (std::size_t t = 0; t < n_tracks; ++t) {
        double x = xs[t];
        double y = ys[t];
        if (options.shots) {
          const auto shots = *options.shots;
          std::binomial_distribution<std::size_t> dx(shots, std::clamp(x / 2.0, 0.0, 1.0));
          std::binomial_distribution<std::size_t> dy(shots, std::clamp(y / 2.0, 0.0, 1.0));
          x = 2.0 * static_cast<double>(dx(rng)) / static_cast<double>(shots);
          y = 2.0 * static_cast<double>(dy(rng)) / static_cast<double>(shots);
        }
        res.x[t].push(x);
        res.y[t].push(y);
      }
    }
  };

  const std::size_t workers =
      std::min(n_chunks, options.threads ? options.threads : default_thread_count());
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) run_chunk(c);
      });
    }
  }

  std::vector<TrackStats> stats(n_tracks);
  std::vector<RunningStats> parts(n_chunks);
  for (std::size_t t = 0; t < n_tracks; ++t) {
    for (std::size_t c = 0; c < n_chunks; ++c) parts[c] = chunks[c].x[t];
    const RunningStats sx = tree_merge(parts, 0, n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) parts[c] = chunks[c].y[t];
    const RunningStats sy = tree_merge(parts, 0, n_chunks);
    stats[t] = {t, sx.mean, sy.mean, sx.stderr_of_mean(), sy.stderr_of_mean(), sx.n};
  }
  return stats;
}

}  // namespace texlab
