#include "texlab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "texlab/errors.hpp"
#include "texlab/texture.hpp"

namespace texlab {

ComplexMatrix standard_gate(GateKind kind) {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix m;
  switch (kind) {
    case GateKind::Identity:
      return identity(2);
    case GateKind::H:
      m.resize(2, 2);
      m << r, r, r, -r;
      return m;
    case GateKind::T:
      m = ComplexMatrix::Zero(2, 2);
      m(0, 0) = std::polar(1.0, -std::numbers::pi / 8.0);
      m(1, 1) = std::polar(1.0, std::numbers::pi / 8.0);
      return m;
    case GateKind::S:
      m = ComplexMatrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = cplx(0.0, 1.0);
      return m;
    case GateKind::Cnot:
      m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
  }
  throw ValidationError("kind", "unknown gate");
}

ComplexMatrix gate_matrix(GateKind kind, const QubitBasis& basis) {
  ComplexMatrix u = basis.matrix();
  if (kind == GateKind::Cnot) u = kron(u, u);
  return u * standard_gate(kind) * u.adjoint();
}

std::string_view gate_label(GateKind kind) {
  switch (kind) {
    case GateKind::Identity: return "I";
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::S: return "S";
    case GateKind::Cnot: return "CNOT";
  }
  return "?";
}

std::optional<GateKind> parse_single_gate(std::string_view label) {
  if (label == "I") return GateKind::Identity;
  if (label == "H") return GateKind::H;
  if (label == "T") return GateKind::T;
  if (label == "S") return GateKind::S;
  return std::nullopt;
}

std::string_view role_label(TrackRole role) {
  switch (role) {
    case TrackRole::Identity: return "I";
    case TrackRole::H: return "H";
    case TrackRole::T: return "T";
    case TrackRole::S: return "S";
    case TrackRole::CnotControl: return "CNOT-control";
    case TrackRole::CnotTarget: return "CNOT-target";
  }
  return "?";
}

namespace {

TrackRole role_for(GateKind kind) {
  switch (kind) {
    case GateKind::H: return TrackRole::H;
    case GateKind::T: return TrackRole::T;
    case GateKind::S: return TrackRole::S;
    default: return TrackRole::Identity;
  }
}

GateKind kind_for(TrackRole role) {
  switch (role) {
    case TrackRole::H: return GateKind::H;
    case TrackRole::T: return GateKind::T;
    case TrackRole::S: return GateKind::S;
    case TrackRole::Identity: return GateKind::Identity;
    default: return GateKind::Cnot;
  }
}

}  // namespace

CircuitLayer::CircuitLayer(std::size_t num_tracks, const std::vector<GateSpec>& gates,
                           QubitBasis hidden_basis, NoiseModel noise)
    : roles_(num_tracks, TrackRole::Identity),
      partner_(num_tracks),
      basis_(hidden_basis),
      noise_(noise) {
  if (num_tracks == 0) throw ValidationError("tracks", "must be positive");
  if (!(noise.p >= 0.0 && noise.p <= 1.0)) throw ValidationError("noise.p", "must lie in [0, 1]");
  if (!(noise.q >= 0.0 && noise.q <= 1.0)) throw ValidationError("noise.q", "must lie in [0, 1]");

  std::vector<bool> used(num_tracks, false);
  const auto claim = [&](std::size_t track, const std::string& field) {
    if (track >= num_tracks) {
      throw ValidationError(field, "track " + std::to_string(track) + " out of range");
    }
    if (used[track]) {
      throw ValidationError(field, "track " + std::to_string(track) +
                                       " already has a gate in this layer");
    }
    used[track] = true;
  };

  for (std::size_t g = 0; g < gates.size(); ++g) {
    const auto& spec = gates[g];
    const std::string prefix = "gates[" + std::to_string(g) + "]";
    if (spec.kind == GateKind::Cnot) {
      if (spec.control == spec.target) {
        throw ValidationError(prefix + ".target", "control and target must differ");
      }
      claim(spec.control, prefix + ".control");
      claim(spec.target, prefix + ".target");
      roles_[spec.control] = TrackRole::CnotControl;
      roles_[spec.target] = TrackRole::CnotTarget;
      partner_[spec.control] = spec.target;
      partner_[spec.target] = spec.control;
      pairs_.push_back({spec.control, spec.target});
    } else {
      claim(spec.track, prefix + ".track");
      roles_[spec.track] = role_for(spec.kind);
    }
  }
}

std::vector<GateSpec> CircuitLayer::gate_specs() const {
  std::vector<GateSpec> out;
  for (std::size_t t = 0; t < roles_.size(); ++t) {
    switch (roles_[t]) {
      case TrackRole::CnotControl:
        out.push_back({GateKind::Cnot, 0, t, *partner_[t]});
        break;
      case TrackRole::CnotTarget:
        break;
      default:
        out.push_back({kind_for(roles_[t]), t, 0, 0});
    }
  }
  return out;
}

std::vector<TrackOutput> simulate_layer(const CircuitLayer& layer, std::span<const Ket> inputs,
                                        bool with_noise) {
  const std::size_t n = layer.num_tracks();
  if (inputs.size() != n) throw ValidationError("inputs", "one input ket per track required");
  const double p = with_noise ? layer.noise().p : 0.0;
  const double q = with_noise ? layer.noise().q : 0.0;
  const QubitBasis& basis = layer.hidden_basis();

  std::vector<std::optional<DensityOperator>> states(n);
  for (std::size_t t = 0; t < n; ++t) {
    const TrackRole role = layer.role(t);
    if (role == TrackRole::CnotTarget) continue;
    if (role == TrackRole::CnotControl) {
      const std::size_t target = *layer.partner(t);
      const Ket joint = kron(inputs[t], inputs[target]);
      const Ket out = gate_matrix(GateKind::Cnot, basis) * joint;
      ComplexMatrix rho = (1.0 - q) * projector(out) + q * projector(joint);
      rho = (1.0 - p) * rho + p * identity(4) / 4.0;
      states[t].emplace(partial_trace(rho, 2, 2, Subsystem::First));
      states[target].emplace(partial_trace(rho, 2, 2, Subsystem::Second));
      continue;
    }
    const Ket out = gate_matrix(kind_for(role), basis) * inputs[t];
    ComplexMatrix rho = (1.0 - p) * projector(out) + p * identity(2) / 2.0;
    states[t].emplace(std::move(rho));
  }

  std::vector<TrackOutput> outputs;
  outputs.reserve(n);
  for (std::size_t t = 0; t < n; ++t) outputs.push_back({t, std::move(*states[t])});
  return outputs;
}

std::vector<TrackOutput> run_layer(const CircuitLayer& layer, const HaarQubitSample& input) {
  const Ket psi = ket_in_basis(input, layer.hidden_basis());
  const std::vector<Ket> inputs(layer.num_tracks(), psi);
  return simulate_layer(layer, inputs, true);
}

double qubit_grand_sum(const ComplexMatrix& rho, MeasurementBasis basis) {
  if (basis == MeasurementBasis::Computational) return grand_sum_unchecked(rho);
  return 2.0 * rho(0, 0).real();
}

std::vector<double> measure_grand_sums(std::span<const TrackOutput> outputs,
                                       MeasurementBasis basis,
                                       std::optional<std::size_t> shots, Rng& rng) {
  std::vector<double> sums;
  sums.reserve(outputs.size());
  for (const auto& out : outputs) {
    const double exact = qubit_grand_sum(out.reduced_state.matrix(), basis);
    if (!shots) {
      sums.push_back(exact);
      continue;
    }
    if (*shots == 0) throw ValidationError("shots", "must be positive");
    const double prob = std::clamp(exact / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::size_t> draw(*shots, prob);
    sums.push_back(2.0 * static_cast<double>(draw(rng)) / static_cast<double>(*shots));
  }
  return sums;
}

CircuitLayer random_layer(std::size_t num_tracks, std::size_t num_cnots, Rng& rng,
                          double min_amplitude) {
  if (num_tracks == 0) throw ValidationError("tracks", "must be positive");
  if (2 * num_cnots > num_tracks) throw ValidationError("cnots", "need 2 * cnots <= tracks");
  if (!(min_amplitude >= 0.0 && min_amplitude < std::sqrt(0.5))) {
    throw ValidationError("min_amplitude", "must lie in [0, 1/sqrt(2))");
  }
  QubitBasis basis = random_basis(rng);
  while (std::abs(basis.alpha()) < min_amplitude || std::abs(basis.beta()) < min_amplitude) {
    basis = random_basis(rng);
  }

  // Fisher-Yates with our own draws so the layout does not depend on the
  // standard library's shuffle.
  std::vector<std::size_t> order(num_tracks);
  for (std::size_t i = 0; i < num_tracks; ++i) order[i] = i;
  for (std::size_t i = num_tracks; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }

  constexpr GateKind singles[] = {GateKind::Identity, GateKind::H, GateKind::T, GateKind::S};
  std::vector<GateSpec> gates;
  for (std::size_t c = 0; c < num_cnots; ++c) {
    gates.push_back({GateKind::Cnot, 0, order[2 * c], order[2 * c + 1]});
  }
  for (std::size_t i = 2 * num_cnots; i < num_tracks; ++i) {
    const auto k = std::min<std::size_t>(3, static_cast<std::size_t>(rng.uniform() * 4.0));
    gates.push_back({singles[k], order[i], 0, 0});
  }
  return CircuitLayer(num_tracks, gates, basis);
}

}  // namespace texlab
