#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "texlab/states.hpp"

namespace texlab {

/// Evidence that a Kraus set is texture-free: K_n|f1> = a_n|f1> for all n and
/// sum |a_n|^2 = 1.
struct FreeCertificate {
  bool ok = false;
  double max_eigen_residual = 0.0;  // max_n || K_n|f1> - a_n|f1> ||
  double weight_sum = 0.0;          // sum_n |a_n|^2
  std::vector<cplx> a;              // a_n = <f1|K_n|f1>
};

class KrausChannel {
 public:
  /// Shapes are validated; completeness and freeness are not (see
  /// `completeness_residual` and `certificate`).
  KrausChannel(std::size_t dim, std::vector<ComplexMatrix> ops);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }

  /// || sum K^dag K - 1 ||_F
  double completeness_residual() const;
  FreeCertificate certificate(double tol = kEps) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> ops_;
};

struct WeightedKet {
  double weight = 1.0;
  Ket ket;
};

/// The D^2 operators K_{n,l} that map f2 to `target` deterministically and
/// fix f1.
KrausChannel build_free_channel(std::size_t dim, const Ket& target);

/// D^2 |ensemble| operators sqrt(q_k) K_{n,l,k}; f2 goes to sum_k q_k psi_k.
KrausChannel build_free_channel_mixed(std::size_t dim,
                                      std::span<const WeightedKet> ensemble);

/// Convex combination of channels: the union of sqrt(p_m)-scaled Kraus sets.
KrausChannel mix_channels(std::span<const std::pair<double, KrausChannel>> parts);

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);

/// Deterministic preparation of `target` from the maximal state f2 using the
/// target's spectral ensemble.
DensityOperator convert_from_f2(std::size_t dim, const DensityOperator& target);

struct F1Decomposition {
  cplx zeta;
  cplx zeta_perp;
  Ket g_perp;            // empty when has_perp is false
  bool has_perp = false; // residual norm >= 1e-12
};

/// phi = zeta|f1> + zeta_perp|g_perp>, with g_perp's first non-negligible
/// component real and positive (so zeta_perp carries the phase).
F1Decomposition decompose_against_f1(const Ket& phi);

struct MonotonicityAudit {
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double gain_term = 0.0;  // D |zeta_perp|^2 sum_n |<f1|A_n|g_perp>|^2
  double identity_residual() const {
    return std::abs(sigma_after - sigma_before - gain_term);
  }
};

/// Throws ValidationError if the channel fails its free certificate.
MonotonicityAudit monotonicity_audit(const KrausChannel& ch, const Ket& phi);

/// Mixed-state version: spectral decomposition, gain terms weighted by the
/// eigenvalues.
MonotonicityAudit monotonicity_audit(const KrausChannel& ch,
                                     const DensityOperator& rho);

}  // namespace texlab
