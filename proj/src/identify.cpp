#include "texlab/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

#include "texlab/errors.hpp"

namespace texlab {

namespace {

constexpr double kDegenerate = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double max_residual(const ExpectedAverages& a, const ExpectedAverages& b) {
  return std::max({std::abs(a.X - b.X), std::abs(a.X_tilde - b.X_tilde), std::abs(a.Y - b.Y),
                   std::abs(a.Y_tilde - b.Y_tilde)});
}

bool contains(std::span<const std::size_t> v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<TrackOutput> probe(const CircuitLayer& layer, const std::vector<Ket>& inputs) {
  return simulate_layer(layer, inputs, false);
}

double fidelity(const Ket& v, const ComplexMatrix& rho) {
  return std::real(v.dot(rho * v));
}

}  // namespace

ExpectedAverages expected_averages(const QubitBasis& basis) {
  const cplx a = basis.alpha();
  const cplx b = basis.beta();
  ExpectedAverages e;
  e.X = 1.0 - std::real(a * a - b * b) / 3.0;
  e.X_tilde = 1.0 + 2.0 * std::real(std::conj(a) * b) / 3.0;
  e.Y = 1.0 + 2.0 * std::real(a * b) / 3.0;
  e.Y_tilde = 1.0 + (std::norm(a) - std::norm(b)) / 3.0;
  return e;
}

ExpectedAverages swapped(const ExpectedAverages& v) {
  return {v.X_tilde, v.X, v.Y_tilde, v.Y};
}

double detectability_margin(const QubitBasis& basis) {
  const auto e = expected_averages(basis);
  const auto sq = [](double x) { return (x - 1.0) * (x - 1.0); };
  return sq(e.X) + sq(e.Y) + sq(e.X_tilde) + sq(e.Y_tilde);
}

std::pair<double, double> noise_interval(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p", "must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("q", "must lie in [0, 1]");
  const double w = (1.0 - p) * (1.0 - q) / 3.0;
  return {1.0 - w, 1.0 + w};
}

std::vector<TrackStats> run_protocol(const CircuitLayer& layer, const TrialOptions& options) {
  return run_trials(layer, options);
}

Detection detect_cnot_tracks(std::span<const TrackStats> stats, double tau) {
  if (!(tau > 0.0)) throw ValidationError("tau", "must be positive");
  Detection d;
  for (const auto& s : stats) {
    const double dev = std::max(std::abs(s.X_like - 1.0), std::abs(s.Y_like - 1.0));
    const double band = 3.0 * std::max(s.stderr_X, s.stderr_Y);
    if (dev > tau) {
      d.cnot_tracks.push_back(s.track);
    } else if (dev + band > tau) {
      d.ambiguous_tracks.push_back(s.track);
    }
  }
  return d;
}

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Align the phase first; the expanded-norm formula loses half the digits.
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - phase * b).norm();
}

QubitBasis hadamard_dual(const QubitBasis& basis) {
  const cplx a = basis.alpha();
  const cplx b = basis.beta();
  const cplx i(0.0, 1.0);
  const double r = 1.0 / std::numbers::sqrt2;
  return {i * (a + std::conj(b)) * r, i * (b - std::conj(a)) * r};
}

std::vector<CandidateBasis> recover_basis_oriented(const ExpectedAverages& data, double eps,
                                                   bool mark_swapped) {
  const double ra = 1.5 * data.Y_tilde - 1.0;
  const double rb = 2.0 - 1.5 * data.Y_tilde;
  if (ra < -eps || rb < -eps) {
    throw IdentificationError("target Fourier average outside [2/3, 4/3]");
  }
  const double A = std::sqrt(clamp01(ra));
  const double B = std::sqrt(std::max(0.0, 1.0 - A * A));

  const double u = data.Y_tilde - data.X;
  const double v = data.X_tilde + data.Y - 2.0;
  const double s = std::hypot(u, v);

  double cl = 1.0;
  double cc = 1.0;
  if (A > kDegenerate) cl = std::sqrt(clamp01((u + s) / (4.0 / 3.0 * A * A)));
  if (B > kDegenerate) cc = std::sqrt(clamp01((s - u) / (4.0 / 3.0 * B * B)));
  const double sl = std::sqrt(std::max(0.0, 1.0 - cl * cl));
  const double sc = std::sqrt(std::max(0.0, 1.0 - cc * cc));

  struct Raw {
    CandidateBasis c;
    double residual;
  };
  std::vector<Raw> raw;
  for (int phase : {1, -1}) {
    for (int cos_chi : {1, -1}) {
      for (int sin_chi : {1, -1}) {
        const cplx alpha = A * cplx(cl, phase * sl);
        const cplx beta = B * cplx(cos_chi * cc, sin_chi * sc);
        QubitBasis basis(alpha, beta);
        const double res = max_residual(expected_averages(basis), data);
        raw.push_back({CandidateBasis{basis, {1, cos_chi}, phase, mark_swapped}, res});
      }
    }
  }
  double best = raw.front().residual;
  for (const auto& r : raw) best = std::min(best, r.residual);
  const double slack = std::max(1e-9, eps);
  if (best > 4.0 * slack + 1e-6) {
    throw IdentificationError("no qubit basis reproduces the averaged grand sums");
  }

  std::vector<CandidateBasis> out;
  for (const auto& r : raw) {
    if (r.residual > best + slack) continue;
    const auto m = r.c.basis.matrix();
    const bool dup = std::any_of(out.begin(), out.end(), [&](const CandidateBasis& o) {
      return phase_aligned_distance(m, o.basis.matrix()) <= 1e-9;
    });
    if (!dup) out.push_back(r.c);
  }
  return out;
}

std::vector<CandidateBasis> recover_basis(const ExpectedAverages& data, double eps) {
  std::vector<CandidateBasis> out;
  std::string failure;
  for (bool swap : {false, true}) {
    try {
      auto part = recover_basis_oriented(swap ? swapped(data) : data, eps, swap);
      out.insert(out.end(), part.begin(), part.end());
    } catch (const IdentificationError& e) {
      failure = e.what();
    }
  }
  if (out.empty()) throw IdentificationError("basis recovery failed: " + failure);
  return out;
}

Pairing pairing_probe(const CircuitLayer& layer, const QubitBasis& basis,
                      std::span<const std::size_t> candidate_tracks,
                      const ProbeTolerances& tol) {
  const std::size_t n = layer.num_tracks();
  const Ket plus = basis.plus();
  const Ket minus = basis.minus();

  std::vector<std::optional<std::vector<std::size_t>>> cache(n);
  const auto flipped_by = [&](std::size_t t) -> const std::vector<std::size_t>& {
    if (!cache[t]) {
      std::vector<Ket> inputs(n, plus);
      inputs[t] = minus;
      const auto out = probe(layer, inputs);
      std::vector<std::size_t> flips;
      for (std::size_t s = 0; s < n; ++s) {
        if (s != t && fidelity(minus, out[s].reduced_state.matrix()) >= tol.flip) {
          flips.push_back(s);
        }
      }
      cache[t] = std::move(flips);
    }
    return *cache[t];
  };

  Pairing result;
  std::vector<bool> paired(n, false);
  for (std::size_t t : candidate_tracks) {
    if (t >= n) throw ValidationError("tracks", "track out of range");
    if (paired[t]) continue;
    const auto& flips = flipped_by(t);
    if (flips.size() == 1 && !paired[flips[0]]) {
      result.pairs.push_back({t, flips[0]});
      paired[t] = paired[flips[0]] = true;
      continue;
    }
    if (!flips.empty()) continue;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == t || paired[s]) continue;
      const auto& other = flipped_by(s);
      if (other.size() == 1 && other[0] == t) {
        result.pairs.push_back({s, t});
        paired[s] = paired[t] = true;
        break;
      }
    }
  }
  for (std::size_t t : candidate_tracks) {
    if (!paired[t] && !contains(result.unresolved, t)) result.unresolved.push_back(t);
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const CnotPair& a, const CnotPair& b) { return a.control < b.control; });
  return result;
}

std::map<std::size_t, GateKind> classify_single_qubit_gates(const CircuitLayer& layer,
                                                           const QubitBasis& basis,
                                                           std::span<const std::size_t> tracks,
                                                           const ProbeTolerances& tol) {
  const std::size_t n = layer.num_tracks();
  const ComplexMatrix ub = basis.matrix();
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx i(0.0, 1.0);

  // Probe kets in (+, -) coordinates.
  std::array<Eigen::Vector2cd, 4> probes;
  probes[0] << 1.0, 0.0;
  probes[1] << 0.0, 1.0;
  probes[2] << r, r;
  probes[3] << r, i * r;

  std::array<std::vector<TrackOutput>, 4> outputs;
  for (std::size_t k = 0; k < 4; ++k) {
    const Ket in = ub * Ket(probes[k]);
    outputs[k] = probe(layer, std::vector<Ket>(n, in));
  }

  const std::array<GateKind, 4> dictionary{GateKind::Identity, GateKind::H, GateKind::T,
                                           GateKind::S};
  std::map<std::size_t, GateKind> labels;
  for (std::size_t t : tracks) {
    if (t >= n) throw ValidationError("tracks", "track out of range");
    std::array<Eigen::Vector2cd, 4> w;
    for (std::size_t k = 0; k < 4; ++k) {
      const Eigen::Matrix2cd local = ub.adjoint() * outputs[k][t].reduced_state.matrix() * ub;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(local);
      w[k] = es.eigenvectors().col(1);
    }
    const cplx o0 = w[0].dot(w[2]);
    const cplx o1 = w[1].dot(w[2]);
    if (std::abs(o0) < 1e-6 || std::abs(o1) < 1e-6) {
      throw IdentificationError("track " + std::to_string(t) + " does not act as a unitary");
    }
    // Fix the relative phase of the two columns from the |+> + |-> probe.
    const cplx rel = (o1 / std::abs(o1)) / (o0 / std::abs(o0));
    Eigen::Matrix2cd m;
    m.col(0) = w[0];
    m.col(1) = rel * w[1];
    const Eigen::Vector2cd predicted = m * probes[3];
    const double consistency = std::norm(w[3].dot(predicted));
    if (consistency < 1.0 - std::max(tol.fidelity, tol.gate * tol.gate)) {
      throw IdentificationError("track " + std::to_string(t) + " is not a unitary gate");
    }
    double best = std::numeric_limits<double>::infinity();
    GateKind best_kind = GateKind::Identity;
    for (GateKind g : dictionary) {
      const double d = phase_aligned_distance(ComplexMatrix(m), standard_gate(g));
      if (d < best) {
        best = d;
        best_kind = g;
      }
    }
    if (best > tol.gate) {
      throw IdentificationError("track " + std::to_string(t) + " matches no gate in {I, H, T, S}");
    }
    labels[t] = best_kind;
  }
  return labels;
}

Disambiguation disambiguate(const CircuitLayer& layer, std::span<const CandidateBasis> candidates,
                            std::span<const std::size_t> cnot_tracks,
                            const ProbeTolerances& tol) {
  if (candidates.empty()) throw IdentificationError("no candidate bases to test");
  const std::size_t n = layer.num_tracks();
  Disambiguation d;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Ket plus = candidates[c].basis.plus();
    const auto out = probe(layer, std::vector<Ket>(n, plus));
    double deficit = 0.0;
    for (std::size_t t : cnot_tracks) {
      deficit = std::max(deficit, 1.0 - fidelity(plus, out.at(t).reduced_state.matrix()));
    }
    d.deficits.push_back(deficit);
    if (deficit <= tol.fidelity) d.passing.push_back(c);
  }
  if (d.passing.empty()) {
    throw IdentificationError("no candidate basis keeps |+> fixed on the CNOT tracks");
  }

  std::vector<std::size_t> survivors = d.passing;
  if (survivors.size() > 1) {
    std::vector<std::size_t> singles;
    for (std::size_t t = 0; t < n; ++t) {
      if (!contains(cnot_tracks, t)) singles.push_back(t);
    }
    std::vector<std::size_t> compatible;
    for (std::size_t c : survivors) {
      try {
        classify_single_qubit_gates(layer, candidates[c].basis, singles, tol);
        compatible.push_back(c);
      } catch (const IdentificationError&) {
      }
    }
    if (!compatible.empty()) survivors = compatible;
  }

  // Lowest deficit wins. Another survivor conflicts only if it is a different
  // layer description and fits about as well.
  const std::size_t best = *std::min_element(
      survivors.begin(), survivors.end(),
      [&](std::size_t a, std::size_t b) { return d.deficits[a] < d.deficits[b]; });
  const ComplexMatrix first = candidates[best].basis.matrix();
  const ComplexMatrix first_dual = hadamard_dual(candidates[best].basis).matrix();
  for (std::size_t c : survivors) {
    const ComplexMatrix m = candidates[c].basis.matrix();
    const bool same = phase_aligned_distance(m, first) <= tol.equivalence;
    const bool dual = phase_aligned_distance(m, first_dual) <= tol.equivalence;
    if (same || dual) {
      d.equivalent.push_back(c);
    } else if (d.deficits[c] <= 4.0 * d.deficits[best] + 1e-12) {
      throw IdentificationError("several inequivalent candidate bases pass every probe");
    }
  }
  d.selected = best;
  return d;
}

namespace {

struct Cluster {
  std::vector<std::size_t> members;
  double X = 0.0;
  double Y = 0.0;
};

// Mean (X, Y) over a set of tracks.
std::pair<double, double> role_mean(std::span<const TrackStats> stats,
                                    std::span<const std::size_t> tracks) {
  double x = 0.0;
  double y = 0.0;
  for (std::size_t t : tracks) {
    x += stats[t].X_like;
    y += stats[t].Y_like;
  }
  const double k = static_cast<double>(tracks.size());
  return {x / k, y / k};
}

std::vector<Cluster> cluster_tracks(std::span<const TrackStats> stats,
                                    std::span<const std::size_t> tracks, double radius) {
  std::vector<Cluster> clusters;
  for (std::size_t t : tracks) {
    Cluster* home = nullptr;
    double best = radius;
    for (auto& c : clusters) {
      const double d = std::hypot(stats[t].X_like - c.X, stats[t].Y_like - c.Y);
      if (d <= best) {
        best = d;
        home = &c;
      }
    }
    if (!home) {
      clusters.push_back({});
      home = &clusters.back();
    }
    home->members.push_back(t);
    std::tie(home->X, home->Y) = role_mean(stats, home->members);
  }
  return clusters;
}

void append_unique(std::vector<CandidateBasis>& into, const CandidateBasis& c, double tol) {
  const auto m = c.basis.matrix();
  for (const auto& o : into) {
    if (phase_aligned_distance(m, o.basis.matrix()) <= tol) return;
  }
  into.push_back(c);
}

std::string fmt_basis(const QubitBasis& b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "alpha=(%.6f,%.6f) beta=(%.6f,%.6f)", b.alpha().real(),
                b.alpha().imag(), b.beta().real(), b.beta().imag());
  return buf;
}

}  // namespace

ProtocolReport identify_layer(const CircuitLayer& layer, const IdentifyOptions& options) {
  ProtocolReport report;
  report.seed = options.trials.seed;
  report.trials = options.trials.trials;
  report.tau = options.tau;
  report.shots = options.trials.shots;
  report.tracks = run_protocol(layer, options.trials);

  const auto det = detect_cnot_tracks(report.tracks, options.tau);
  report.cnot_tracks = det.cnot_tracks;
  report.ambiguous = det.ambiguous_tracks;
  if (det.cnot_tracks.empty()) {
    report.diagnostics.push_back("no CNOT track detected; the basis cannot be recovered");
    return report;
  }

  double sigma = 0.0;
  for (std::size_t t : det.cnot_tracks) {
    sigma = std::max({sigma, report.tracks[t].stderr_X, report.tracks[t].stderr_Y});
  }
  ProbeTolerances tol;
  if (sigma > 0.0) {
    tol.fidelity = std::clamp(1e4 * sigma * sigma, 1e-9, 0.05);
    tol.gate = 0.2;
    tol.equivalence = std::clamp(100.0 * sigma, 1e-7, 0.2);
  }
  const double eps = 10.0 * sigma + 1e-12;

  // Rough candidates: role-agnostic data from clustered statistics.
  const auto clusters = cluster_tracks(report.tracks, det.cnot_tracks, 8.0 * sigma + 1e-6);
  std::vector<ExpectedAverages> rough_data;
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      rough_data.push_back({clusters[a].X, clusters[b].X, clusters[a].Y, clusters[b].Y});
    }
    rough_data.push_back({clusters[a].X, clusters[a].X, clusters[a].Y, clusters[a].Y});
    rough_data.push_back({clusters[a].X, 1.0, clusters[a].Y, 1.0});
  }
  std::vector<CandidateBasis> rough;
  for (const auto& data : rough_data) {
    try {
      for (const auto& c : recover_basis(data, 0.5)) append_unique(rough, c, 1e-6);
    } catch (const IdentificationError&) {
    }
  }

  // Pair tracks in each rough basis, then recover from role-averaged statistics.
  struct Group {
    std::vector<std::size_t> involved;
    std::vector<CandidateBasis> candidates;
  };
  std::vector<Group> groups;
  for (const auto& rc : rough) {
    const auto pairing = pairing_probe(layer, rc.basis, det.cnot_tracks, tol);
    if (pairing.pairs.empty() || !pairing.unresolved.empty()) continue;
    std::vector<std::size_t> controls, targets, involved;
    for (const auto& p : pairing.pairs) {
      controls.push_back(p.control);
      targets.push_back(p.target);
      involved.push_back(p.control);
      involved.push_back(p.target);
    }
    std::sort(involved.begin(), involved.end());
    const auto [cx, cy] = role_mean(report.tracks, controls);
    const auto [tx, ty] = role_mean(report.tracks, targets);
    std::vector<CandidateBasis> refined;
    try {
      refined = recover_basis_oriented({cx, tx, cy, ty}, eps);
    } catch (const IdentificationError&) {
      continue;
    }
    auto g = std::find_if(groups.begin(), groups.end(),
                          [&](const Group& gr) { return gr.involved == involved; });
    if (g == groups.end()) {
      groups.push_back({involved, {}});
      g = std::prev(groups.end());
    }
    for (const auto& c : refined) append_unique(g->candidates, c, 1e-9);
  }
  for (const auto& g : groups) {
    report.candidates.insert(report.candidates.end(), g.candidates.begin(), g.candidates.end());
  }
  if (groups.empty()) {
    report.diagnostics.push_back(
        "CNOT tracks could not be paired in any candidate basis; statistics are inconsistent "
        "with a noiseless layer, so basis recovery requires noise characterization");
    return report;
  }

  std::optional<CandidateBasis> chosen;
  std::vector<std::size_t> involved;
  std::size_t alternatives = 0;
  std::string last_error;
  for (const auto& g : groups) {
    try {
      const auto d = disambiguate(layer, g.candidates, g.involved, tol);
      const auto& pick = g.candidates[d.selected];
      if (chosen) {
        const auto m = pick.basis.matrix();
        const bool same = phase_aligned_distance(m, chosen->basis.matrix()) <= tol.equivalence;
        const bool dual = phase_aligned_distance(m, hadamard_dual(chosen->basis).matrix()) <=
                          tol.equivalence;
        if (!same && !dual) {
          report.diagnostics.push_back("inequivalent bases pass the probes for different pairings");
          return report;
        }
        alternatives += d.equivalent.size();
        continue;
      }
      chosen = pick;
      involved = g.involved;
      alternatives += d.equivalent.size() - 1;
    } catch (const IdentificationError& e) {
      last_error = e.what();
    }
  }
  if (!chosen) {
    report.diagnostics.push_back(last_error +
                                 "; basis recovery requires noise characterization");
    return report;
  }
  report.selected = chosen->basis;
  report.diagnostics.push_back("selected basis " + fmt_basis(chosen->basis));
  if (alternatives > 0) {
    report.diagnostics.push_back(
        std::to_string(alternatives) +
        " further candidate(s) describe the same layer (identical basis or its Hadamard dual "
        "with control and target exchanged)");
  }

  const auto pairing = pairing_probe(layer, chosen->basis, involved, tol);
  report.cnot_pairs = pairing.pairs;
  bool ok = pairing.unresolved.empty();
  if (!ok) report.diagnostics.push_back("some CNOT tracks could not be paired");
  for (const auto& p : pairing.pairs) {
    report.gates[p.control] = std::string(role_label(TrackRole::CnotControl));
    report.gates[p.target] = std::string(role_label(TrackRole::CnotTarget));
    for (std::size_t t : {p.control, p.target}) {
      if (!contains(det.cnot_tracks, t) && !contains(report.ambiguous, t)) {
        report.ambiguous.push_back(t);
      }
    }
  }
  std::sort(report.ambiguous.begin(), report.ambiguous.end());

  std::vector<std::size_t> singles;
  for (std::size_t t = 0; t < layer.num_tracks(); ++t) {
    if (!report.gates.count(t)) singles.push_back(t);
  }
  for (std::size_t t : singles) {
    try {
      const std::size_t one[] = {t};
      const auto lab = classify_single_qubit_gates(layer, chosen->basis, one, tol);
      report.gates[t] = std::string(gate_label(lab.at(t)));
    } catch (const IdentificationError& e) {
      report.diagnostics.push_back(e.what());
      ok = false;
    }
  }
  report.complete = ok;
  return report;
}

}  // namespace texlab
