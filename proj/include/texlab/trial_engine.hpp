#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "texlab/circuit.hpp"

namespace texlab {

/// Streaming mean/variance (Welford), mergeable in a fixed order so results do
/// not depend on how trials were split across workers.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& other) noexcept;
  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const noexcept;
};

struct TrackStats {
  std::size_t track = 0;
  double X_like = 0.0;  // mean grand sum, computational basis
  double Y_like = 0.0;  // mean grand sum, Fourier basis
  double stderr_X = 0.0;
  double stderr_Y = 0.0;
  std::size_t trials = 0;
};

struct TrialOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> shots;  // absent: exact expectations per trial
  std::size_t threads = 0;           // 0: TEXLAB_THREADS or hardware concurrency
};

/// Worker count from TEXLAB_THREADS, falling back to hardware concurrency.
std::size_t default_thread_count();

/// Trials per reduction chunk. Fixed so the reduction tree is independent of
/// the worker count.
inline constexpr std::size_t kTrialChunk = 2048;

/// Monte Carlo over Haar inputs. Trial i draws from Rng::stream(seed, i).
std::vector<TrackStats> run_trials(const CircuitLayer& layer, const TrialOptions& options);

/// Exact grand sums (computational, Fourier) for every track on one input.
/// Same arithmetic as the trial loop; exposed for cross-checks.
void evaluate_trial(const CircuitLayer& layer, const HaarQubitSample& input,
                    std::vector<double>& sums_x, std::vector<double>& sums_y);

}  // namespace texlab
