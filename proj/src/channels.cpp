#include "texlab/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "texlab/errors.hpp"
#include "texlab/texture.hpp"

namespace texlab {

namespace {

void require_normalized(const Ket& v, std::size_t dim, const char* field) {
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw ValidationError(field, "ket dimension does not match D");
  }
  if (std::abs(v.squaredNorm() - 1.0) > 1e-10) {
    throw ValidationError(field, "ket is not normalized");
  }
}

// K_{n,l} with 1-based n, l; `scale` carries sqrt(q_k) for ensembles.
ComplexMatrix kraus_operator(std::size_t dim, const Ket& target, std::size_t n,
                             std::size_t l, double scale) {
  const auto d = static_cast<Eigen::Index>(dim);
  const double dd = static_cast<double>(dim);
  const Ket f1 = fourier_ket(dim, 1);
  const auto omega_pow = [dim](std::size_t e) {
    const double angle = 2.0 * std::numbers::pi *
                         static_cast<double>(e % dim) / static_cast<double>(dim);
    return std::polar(1.0, angle);
  };

  ComplexMatrix k = projector(f1);
  const cplx prefactor = omega_pow(n) / std::sqrt(dd);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t shifted = (i + l - 1) % dim;
    // (w*)^{i-1} = w^{D-(i-1)}
    const cplx coeff = prefactor * omega_pow(dim - i) * target(static_cast<Eigen::Index>(shifted));
    const auto row = static_cast<Eigen::Index>(shifted);
    // |s>(<i| - <j|) summed over j: D at column i, minus 1 everywhere.
    for (Eigen::Index c = 0; c < d; ++c) k(row, c) -= coeff;
    k(row, static_cast<Eigen::Index>(i)) += coeff * dd;
  }
  return (scale / dd) * k;
}

double audit_gain(const std::vector<ComplexMatrix>& ops, const FreeCertificate& cert,
                  const F1Decomposition& dec, const ComplexMatrix& f1_proj,
                  const Ket& f1) {
  if (!dec.has_perp) return 0.0;
  double acc = 0.0;
  for (std::size_t n = 0; n < ops.size(); ++n) {
    const ComplexMatrix a_n = ops[n] - cert.a[n] * f1_proj;
    const cplx amp = f1.dot(a_n * dec.g_perp);  // <f1|A_n|g_perp>
    acc += std::norm(amp);
  }
  // Sigma = D <f1|rho|f1>, so the gain carries the same factor D.
  return static_cast<double>(f1.size()) * std::norm(dec.zeta_perp) * acc;
}

}  // namespace

KrausChannel::KrausChannel(std::size_t dim, std::vector<ComplexMatrix> ops)
    : dim_(dim), ops_(std::move(ops)) {
  if (dim_ == 0 || dim_ > kMaxDim) throw DimensionError("channel dimension out of range");
  if (ops_.empty()) throw ValidationError("kraus", "channel needs at least one operator");
  const auto d = static_cast<Eigen::Index>(dim_);
  for (std::size_t n = 0; n < ops_.size(); ++n) {
    if (ops_[n].rows() != d || ops_[n].cols() != d) {
      throw ValidationError("kraus[" + std::to_string(n) + "]",
                            "operator is not " + std::to_string(dim_) + "x" +
                                std::to_string(dim_));
    }
    if (!all_finite(ops_[n])) {
      throw ValidationError("kraus[" + std::to_string(n) + "]", "non-finite entry");
    }
  }
}

double KrausChannel::completeness_residual() const {
  ComplexMatrix acc = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_),
                                          static_cast<Eigen::Index>(dim_));
  for (const auto& k : ops_) acc.noalias() += k.adjoint() * k;
  return frobenius_distance(acc, identity(dim_));
}

FreeCertificate KrausChannel::certificate(double tol) const {
  const Ket f1 = fourier_ket(dim_, 1);
  FreeCertificate cert;
  cert.a.reserve(ops_.size());
  for (const auto& k : ops_) {
    const Ket image = k * f1;
    const cplx a = f1.dot(image);
    cert.a.push_back(a);
    cert.max_eigen_residual = std::max(cert.max_eigen_residual, (image - a * f1).norm());
    cert.weight_sum += std::norm(a);
  }
  cert.ok = cert.max_eigen_residual <= tol && std::abs(cert.weight_sum - 1.0) <= tol;
  return cert;
}

KrausChannel build_free_channel(std::size_t dim, const Ket& target) {
  const WeightedKet single{1.0, target};
  return build_free_channel_mixed(dim, std::span<const WeightedKet>(&single, 1));
}

KrausChannel build_free_channel_mixed(std::size_t dim,
                                      std::span<const WeightedKet> ensemble) {
  if (ensemble.empty()) throw ValidationError("ensemble", "empty ensemble");
  double total = 0.0;
  for (const auto& e : ensemble) {
    if (!(e.weight >= 0.0)) throw ValidationError("ensemble.weight", "negative weight");
    total += e.weight;
    require_normalized(e.ket, dim, "ensemble.ket");
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("ensemble.weight", "weights sum to " + std::to_string(total));
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(dim * dim * ensemble.size());
  for (const auto& e : ensemble) {
    const double scale = std::sqrt(e.weight);
    for (std::size_t n = 1; n <= dim; ++n)
      for (std::size_t l = 1; l <= dim; ++l)
        ops.push_back(kraus_operator(dim, e.ket, n, l, scale));
  }
  return KrausChannel(dim, std::move(ops));
}

KrausChannel mix_channels(std::span<const std::pair<double, KrausChannel>> parts) {
  if (parts.empty()) throw ValidationError("parts", "nothing to mix");
  const std::size_t dim = parts.front().second.dim();
  std::vector<ComplexMatrix> ops;
  for (const auto& [p, ch] : parts) {
    if (ch.dim() != dim) throw ValidationError("parts", "dimension mismatch");
    if (p < 0.0) throw ValidationError("parts", "negative weight");
    for (const auto& k : ch.ops()) ops.push_back(std::sqrt(p) * k);
  }
  return KrausChannel(dim, std::move(ops));
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
  if (ch.dim() != rho.dim()) {
    throw ValidationError("dim", "channel and state dimensions differ");
  }
  const auto d = static_cast<Eigen::Index>(ch.dim());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : ch.ops()) out.noalias() += k * rho.matrix() * k.adjoint();
  ComplexMatrix herm = 0.5 * (out + out.adjoint());
  return DensityOperator(std::move(herm));
}

DensityOperator convert_from_f2(std::size_t dim, const DensityOperator& target) {
  if (target.dim() != dim) throw ValidationError("dim", "target dimension differs");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(target.matrix());
  if (solver.info() != Eigen::Success) {
    throw TexlabError("spectral decomposition of target failed");
  }
  std::vector<WeightedKet> ensemble;
  double kept = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double w = solver.eigenvalues()(k);
    if (w < 1e-12) continue;
    ensemble.push_back({w, normalize(solver.eigenvectors().col(k))});
    kept += w;
  }
  for (auto& e : ensemble) e.weight /= kept;
  // Absorb the last rounding bit so the weights satisfy the 1e-12 contract.
  double total = 0.0;
  for (const auto& e : ensemble) total += e.weight;
  ensemble.back().weight += 1.0 - total;

  const KrausChannel ch = build_free_channel_mixed(dim, ensemble);
  return apply_channel(ch, DensityOperator::from_ket(fourier_ket(dim, 2)));
}

F1Decomposition decompose_against_f1(const Ket& phi) {
  const auto dim = static_cast<std::size_t>(phi.size());
  const Ket f1 = fourier_ket(dim, 1);
  F1Decomposition dec;
  dec.zeta = f1.dot(phi);
  const Ket residual = phi - dec.zeta * f1;
  const double rn = residual.norm();
  if (rn < 1e-12) {
    dec.zeta_perp = 0.0;
    return dec;
  }
  Ket g = residual / rn;
  cplx phase = 1.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g(i)) > 1e-12) {
      phase = g(i) / std::abs(g(i));
      break;
    }
  }
  dec.g_perp = g / phase;
  dec.zeta_perp = rn * phase;
  dec.has_perp = true;
  return dec;
}

MonotonicityAudit monotonicity_audit(const KrausChannel& ch, const Ket& phi) {
  const FreeCertificate cert = ch.certificate();
  if (!cert.ok) {
    throw ValidationError("channel", "Kraus set fails the texture-free certificate");
  }
  if (static_cast<std::size_t>(phi.size()) != ch.dim()) {
    throw ValidationError("dim", "ket and channel dimensions differ");
  }
  const Ket unit = normalize(phi);
  const DensityOperator rho = DensityOperator::from_ket(unit);
  const Ket f1 = fourier_ket(ch.dim(), 1);
  const ComplexMatrix f1_proj = projector(f1);

  MonotonicityAudit audit;
  audit.sigma_before = grand_sum(rho);
  audit.sigma_after = grand_sum(apply_channel(ch, rho));
  audit.gain_term = audit_gain(ch.ops(), cert, decompose_against_f1(unit), f1_proj, f1);
  return audit;
}

MonotonicityAudit monotonicity_audit(const KrausChannel& ch, const DensityOperator& rho) {
  const FreeCertificate cert = ch.certificate();
  if (!cert.ok) {
    throw ValidationError("channel", "Kraus set fails the texture-free certificate");
  }
  if (rho.dim() != ch.dim()) throw ValidationError("dim", "state and channel dimensions differ");
  const Ket f1 = fourier_ket(ch.dim(), 1);
  const ComplexMatrix f1_proj = projector(f1);

  MonotonicityAudit audit;
  audit.sigma_before = grand_sum(rho);
  audit.sigma_after = grand_sum(apply_channel(ch, rho));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double w = solver.eigenvalues()(k);
    if (w <= 0.0) continue;
    const Ket u = solver.eigenvectors().col(k);
    audit.gain_term += w * audit_gain(ch.ops(), cert, decompose_against_f1(u), f1_proj, f1);
  }
  return audit;
}

}  // namespace texlab
