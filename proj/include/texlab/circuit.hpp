#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "texlab/rng.hpp"
#include "texlab/states.hpp"

namespace texlab {

enum class GateKind { Identity, H, T, S, Cnot };

/// Standard matrix in the gate's own basis (CNOT is 4x4, control first).
ComplexMatrix standard_gate(GateKind kind);

/// U_basis * U_std * U_basis^dag, with U_basis = QubitBasis::matrix() (taken
/// as a tensor square for CNOT).
ComplexMatrix gate_matrix(GateKind kind, const QubitBasis& basis);

std::string_view gate_label(GateKind kind);
std::optional<GateKind> parse_single_gate(std::string_view label);

/// Role of one track inside a layer.
enum class TrackRole { Identity, H, T, S, CnotControl, CnotTarget };

std::string_view role_label(TrackRole role);

struct NoiseModel {
  double p = 0.0;  // per-run white-noise fraction of the shared input
  double q = 0.0;  // per-run probability that a CNOT acts as the identity
};

struct GateSpec {
  GateKind kind = GateKind::Identity;
  std::size_t track = 0;    // single-qubit gates
  std::size_t control = 0;  // CNOT
  std::size_t target = 0;   // CNOT
};

struct CnotPair {
  std::size_t control;
  std::size_t target;
  friend bool operator==(const CnotPair&, const CnotPair&) = default;
};

class CircuitLayer {
 public:
  /// Tracks without a gate spec are identity tracks. Throws ValidationError
  /// naming the offending field (e.g. "gates[2].target").
  CircuitLayer(std::size_t num_tracks, const std::vector<GateSpec>& gates,
               QubitBasis hidden_basis, NoiseModel noise = {});

  std::size_t num_tracks() const noexcept { return roles_.size(); }
  TrackRole role(std::size_t track) const { return roles_.at(track); }
  const std::vector<TrackRole>& roles() const noexcept { return roles_; }
  /// Partner track for CNOT roles.
  std::optional<std::size_t> partner(std::size_t track) const { return partner_.at(track); }
  const std::vector<CnotPair>& cnot_pairs() const noexcept { return pairs_; }
  const QubitBasis& hidden_basis() const noexcept { return basis_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  std::vector<GateSpec> gate_specs() const;

 private:
  std::vector<TrackRole> roles_;
  std::vector<std::optional<std::size_t>> partner_;
  std::vector<CnotPair> pairs_;
  QubitBasis basis_;
  NoiseModel noise_;
};

struct TrackOutput {
  std::size_t track;
  DensityOperator reduced_state;
};

/// Every track receives a|+> + b|-> from `input` (identical across tracks).
/// Noise enters as exact mixtures: the shared input is replaced by I/2 with
/// weight p, and each CNOT is skipped with weight q.
std::vector<TrackOutput> run_layer(const CircuitLayer& layer, const HaarQubitSample& input);

/// Per-track input kets (probe mode). `with_noise` false gives the ideal layer.
std::vector<TrackOutput> simulate_layer(const CircuitLayer& layer,
                                        std::span<const Ket> inputs,
                                        bool with_noise = false);

/// Random layer: Haar hidden basis (redrawn until |alpha|, |beta| >=
/// `min_amplitude`), `num_cnots` CNOTs on random disjoint track pairs, the
/// remaining tracks drawn uniformly from {I, H, T, S}.
CircuitLayer random_layer(std::size_t num_tracks, std::size_t num_cnots, Rng& rng,
                          double min_amplitude = 0.0);

enum class MeasurementBasis { Computational, Fourier };

/// Grand sum of a qubit state in the chosen basis. In the Fourier basis the
/// textureless state is |1>, so the value is 2<1|rho|1>.
double qubit_grand_sum(const ComplexMatrix& rho, MeasurementBasis basis);

/// Exact grand sums, or with `shots` a binomial estimate 2 k / shots of the
/// textureless-outcome frequency.
std::vector<double> measure_grand_sums(std::span<const TrackOutput> outputs,
                                       MeasurementBasis basis,
                                       std::optional<std::size_t> shots, Rng& rng);

}  // namespace texlab
