#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "texlab/circuit.hpp"
#include "texlab/trial_engine.hpp"

namespace texlab {

/// Averaged output grand sums of a CNOT pair. X, Y: control in the
/// computational and Fourier measurements; X_tilde, Y_tilde: target.
struct ExpectedAverages {
  double X = 1.0;
  double X_tilde = 1.0;
  double Y = 1.0;
  double Y_tilde = 1.0;
};

/// Closed-form averages over Haar-random identical inputs.
///   X  = 1 - (a^2 + a*^2 - b^2 - b*^2)/6
///   X~ = 1 + (a* b + a b*)/3
///   Y  = 1 + (a b + a* b*)/3
///   Y~ = 1 + (|a|^2 - |b|^2)/3
ExpectedAverages expected_averages(const QubitBasis& basis);

/// (X~, X, Y~, Y): the other control/target association.
ExpectedAverages swapped(const ExpectedAverages& v);

/// Sum of squared deviations of the four averages from 1; at least 1/9.
double detectability_margin(const QubitBasis& basis);

std::pair<double, double> noise_interval(double p, double q);

/// Monte Carlo estimate of every track's averaged grand sums.
std::vector<TrackStats> run_protocol(const CircuitLayer& layer, const TrialOptions& options);

struct Detection {
  std::vector<std::size_t> cnot_tracks;
  std::vector<std::size_t> ambiguous_tracks;
};

/// A track is flagged when max(|X-1|, |Y-1|) > tau. Sub-threshold tracks whose
/// 3-sigma band reaches tau are ambiguous.
Detection detect_cnot_tracks(std::span<const TrackStats> stats, double tau);

struct CandidateBasis {
  QubitBasis basis;
  std::pair<int, int> sign_choice{1, 1};  // signs of (cos lambda, cos chi)
  int phase_branch = 1;                   // sign of sin lambda
  bool swap_applied = false;
};

/// Candidate bases reproducing `data` under the association given (no swap).
/// Radicands within `eps` below zero are clamped; anything lower throws
/// IdentificationError.
std::vector<CandidateBasis> recover_basis_oriented(const ExpectedAverages& data,
                                                   double eps = 1e-12,
                                                   bool mark_swapped = false);

/// Both associations: `data` as given, then X <-> X~, Y <-> Y~.
std::vector<CandidateBasis> recover_basis(const ExpectedAverages& data, double eps = 1e-12);

/// Matching thresholds for the deterministic probe phase. Defaults suit exact
/// (analytic) statistics; Monte Carlo runs loosen them from the standard errors.
struct ProbeTolerances {
  double fidelity = 1e-9;    // max 1 - <+|rho|+> on CNOT tracks
  double gate = 1e-8;        // phase-aligned Frobenius distance to {I,H,T,S}
  double flip = 0.75;        // fidelity with |-> that counts as a flip
  double equivalence = 1e-7; // phase-aligned distance between basis matrices
};

struct Disambiguation {
  std::size_t selected = 0;               // index into the candidate list
  std::vector<double> deficits;           // per candidate
  std::vector<std::size_t> passing;       // fixed-point test survivors
  std::vector<std::size_t> equivalent;    // survivors describing the selected layer
};

/// Feeds each candidate's |+> into every track and keeps candidates whose
/// outputs on `cnot_tracks` stay |+>. Ties are broken by single-qubit
/// dictionary consistency, then by the smallest deficit. A survivor that
/// describes a different layer (neither the same basis nor its Hadamard dual)
/// and fits equally well makes the answer ambiguous. Throws
/// IdentificationError when nothing passes or the answer is ambiguous.
Disambiguation disambiguate(const CircuitLayer& layer, std::span<const CandidateBasis> candidates,
                            std::span<const std::size_t> cnot_tracks,
                            const ProbeTolerances& tol = {});

struct Pairing {
  std::vector<CnotPair> pairs;
  std::vector<std::size_t> unresolved;
};

/// Control/target assignment by deterministic probes in a known basis: |->
/// on one track, |+> elsewhere; the track that flips to |-> is the target.
/// A track that flips nothing is retried as a target of every other track.
Pairing pairing_probe(const CircuitLayer& layer, const QubitBasis& basis,
                      std::span<const std::size_t> candidate_tracks,
                      const ProbeTolerances& tol = {});

/// Labels each listed track with I, H, T or S from four deterministic probes.
/// Throws IdentificationError if some track matches nothing.
std::map<std::size_t, GateKind> classify_single_qubit_gates(
    const CircuitLayer& layer, const QubitBasis& basis, std::span<const std::size_t> tracks,
    const ProbeTolerances& tol = {});

/// min over phases of ||a - e^{i g} b||_F for 2x2 unitaries.
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// The basis describing the same CNOT with control and target exchanged:
/// i * U_basis * H.
QubitBasis hadamard_dual(const QubitBasis& basis);

struct IdentifyOptions {
  TrialOptions trials;
  double tau = 0.05;
};

struct ProtocolReport {
  std::vector<TrackStats> tracks;
  std::vector<std::size_t> cnot_tracks;
  std::vector<std::size_t> ambiguous;
  std::vector<CandidateBasis> candidates;
  std::optional<QubitBasis> selected;
  std::vector<CnotPair> cnot_pairs;
  std::map<std::size_t, std::string> gates;
  std::vector<std::string> diagnostics;
  bool complete = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tau = 0.0;
  std::optional<std::size_t> shots;
};

/// Detection, basis recovery, disambiguation, pairing and gate labelling.
ProtocolReport identify_layer(const CircuitLayer& layer, const IdentifyOptions& options);

}  // namespace texlab
