#include "texlab/report.hpp"

#include <cmath>
#include <cstdio>

#include "texlab/errors.hpp"

namespace texlab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(k).dump() + ": ";
        write(v, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (std::all_of(j.begin(), j.end(), scalar)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt17(v) : number(v).dump();
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(field, "missing");
  return j.at(key);
}

double as_real(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  return j.get<double>();
}

std::size_t as_index(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ValidationError(field, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

cplx as_complex(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(field, "expected [re, im]");
  return {as_real(j[0], field + "[0]"), as_real(j[1], field + "[1]")};
}

Json complex_json(cplx z) { return Json::array({number(z.real()), number(z.imag())}); }

ComplexMatrix parse_matrix(const Json& j, std::size_t dim, const std::string& field) {
  if (!j.is_array() || j.size() != dim) {
    throw ValidationError(field, "expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string row = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != dim) {
      throw ValidationError(row, "expected " + std::to_string(dim) + " entries");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      m(r, c) = as_complex(j[r][c], row + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t parse_dim(const Json& j) {
  const std::size_t dim = as_index(require(j, "dim", "dim"), "dim");
  if (dim == 0) throw ValidationError("dim", "must be positive");
  if (dim > kMaxDim) throw DimensionError("dim exceeds " + std::to_string(kMaxDim));
  return dim;
}

Json basis_json(const QubitBasis& b) {
  return {{"alpha", complex_json(b.alpha())}, {"beta", complex_json(b.beta())}};
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

DensityOperator parse_density(const Json& j) {
  const std::size_t dim = parse_dim(j);
  ComplexMatrix m = parse_matrix(require(j, "matrix", "matrix"), dim, "matrix");
  try {
    return DensityOperator(std::move(m));
  } catch (const ValidationError& e) {
    throw ValidationError("matrix", e.what());
  }
}

Json density_to_json(const DensityOperator& rho) {
  return {{"dim", rho.dim()}, {"matrix", matrix_json(rho.matrix())}};
}

KrausChannel parse_channel(const Json& j) {
  const std::size_t dim = parse_dim(j);
  const Json& list = require(j, "kraus", "kraus");
  if (!list.is_array() || list.empty()) throw ValidationError("kraus", "expected a list");
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < list.size(); ++k) {
    ops.push_back(parse_matrix(list[k], dim, "kraus[" + std::to_string(k) + "]"));
  }
  return KrausChannel(dim, std::move(ops));
}

Json channel_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.ops()) ops.push_back(matrix_json(k));
  return {{"dim", ch.dim()}, {"kraus", std::move(ops)}};
}

CircuitLayer parse_layer(const Json& j) {
  if (!j.is_object()) throw ValidationError("layer", "expected an object");
  const std::size_t tracks = as_index(require(j, "tracks", "tracks"), "tracks");
  const Json& hb = require(j, "hidden_basis", "hidden_basis");
  const cplx alpha = as_complex(require(hb, "alpha", "hidden_basis.alpha"), "hidden_basis.alpha");
  const cplx beta = as_complex(require(hb, "beta", "hidden_basis.beta"), "hidden_basis.beta");
  std::optional<QubitBasis> basis;
  try {
    basis.emplace(alpha, beta);
  } catch (const TexlabError& e) {
    throw ValidationError("hidden_basis", e.what());
  }

  std::vector<GateSpec> gates;
  if (j.contains("gates")) {
    const Json& list = j.at("gates");
    if (!list.is_array()) throw ValidationError("gates", "expected a list");
    for (std::size_t g = 0; g < list.size(); ++g) {
      const std::string f = "gates[" + std::to_string(g) + "]";
      const Json& kind_j = require(list[g], "kind", f + ".kind");
      if (!kind_j.is_string()) throw ValidationError(f + ".kind", "expected a string");
      const auto kind = kind_j.get<std::string>();
      if (kind == "CNOT") {
        gates.push_back({GateKind::Cnot, 0,
                         as_index(require(list[g], "control", f + ".control"), f + ".control"),
                         as_index(require(list[g], "target", f + ".target"), f + ".target")});
      } else if (auto single = parse_single_gate(kind)) {
        gates.push_back(
            {*single, as_index(require(list[g], "track", f + ".track"), f + ".track"), 0, 0});
      } else {
        throw ValidationError(f + ".kind", "unknown gate '" + kind + "' (use H, T, S, I or CNOT)");
      }
    }
  }

  NoiseModel noise;
  if (j.contains("noise")) {
    const Json& nz = j.at("noise");
    if (!nz.is_object()) throw ValidationError("noise", "expected an object");
    if (nz.contains("p")) noise.p = as_real(nz.at("p"), "noise.p");
    if (nz.contains("q")) noise.q = as_real(nz.at("q"), "noise.q");
  }
  return CircuitLayer(tracks, gates, *basis, noise);
}

Json layer_to_json(const CircuitLayer& layer) {
  Json gates = Json::array();
  for (const auto& g : layer.gate_specs()) {
    if (g.kind == GateKind::Cnot) {
      gates.push_back({{"kind", "CNOT"}, {"control", g.control}, {"target", g.target}});
    } else {
      gates.push_back({{"kind", std::string(gate_label(g.kind))}, {"track", g.track}});
    }
  }
  return {{"tracks", layer.num_tracks()},
          {"hidden_basis", basis_json(layer.hidden_basis())},
          {"gates", std::move(gates)},
          {"noise", {{"p", number(layer.noise().p)}, {"q", number(layer.noise().q)}}}};
}

Json texture_to_json(const TextureReading& r) {
  return {{"grand_sum", number(r.grand_sum)},
          {"rugosity", number(r.rugosity)},
          {"projective_probability", number(r.projective_probability)},
          {"dim", r.dim},
          {"version", kVersion}};
}

Json report_to_json(const ProtocolReport& r) {
  Json tracks = Json::array();
  for (const auto& s : r.tracks) {
    tracks.push_back({{"track", s.track},
                      {"X", number(s.X_like)},
                      {"Y", number(s.Y_like)},
                      {"stderr_X", number(s.stderr_X)},
                      {"stderr_Y", number(s.stderr_Y)},
                      {"trials", s.trials}});
  }
  Json candidates = Json::array();
  for (const auto& c : r.candidates) {
    Json cj = basis_json(c.basis);
    cj["sign_choice"] = Json::array({c.sign_choice.first, c.sign_choice.second});
    cj["phase_branch"] = c.phase_branch;
    cj["swap_applied"] = c.swap_applied;
    candidates.push_back(std::move(cj));
  }
  Json gates = Json::object();
  for (const auto& [t, label] : r.gates) gates[std::to_string(t)] = label;
  Json pairs = Json::array();
  for (const auto& p : r.cnot_pairs) pairs.push_back({{"control", p.control}, {"target", p.target}});

  Json out = {{"tracks", std::move(tracks)},
              {"cnot_tracks", r.cnot_tracks},
              {"ambiguous", r.ambiguous},
              {"candidates", std::move(candidates)},
              {"selected", r.selected ? basis_json(*r.selected) : Json(nullptr)},
              {"gates", std::move(gates)},
              {"cnot_pairs", std::move(pairs)},
              {"diagnostics", r.diagnostics},
              {"complete", r.complete},
              {"seed", r.seed},
              {"trials", r.trials},
              {"tau", number(r.tau)},
              {"version", kVersion}};
  out["shots"] = r.shots ? Json(*r.shots) : Json(nullptr);
  return out;
}

Json paramagnet_to_json(std::span<const RugosityRow> rows) {
  Json list = Json::array();
  for (const auto& r : rows) {
    list.push_back({{"x", number(r.x)},
                    {"rugosity_quadrature", number(r.quadrature)},
                    {"paper_closed_form", number(r.printed)},
                    {"alt_closed_form", number(r.alternative)},
                    {"residual_paper", number(r.residual_printed)},
                    {"residual_alt", number(r.residual_alt)}});
  }
  return {{"rows", std::move(list)}, {"version", kVersion}};
}

std::string stats_csv(std::span<const TrackStats> stats) {
  std::string out = "track,X,stderr_X,Y,stderr_Y,trials\n";
  for (const auto& s : stats) {
    out += std::to_string(s.track) + "," + fmt17(s.X_like) + "," + fmt17(s.stderr_X) + "," +
           fmt17(s.Y_like) + "," + fmt17(s.stderr_Y) + "," + std::to_string(s.trials) + "\n";
  }
  return out;
}

std::string paramagnet_csv(std::span<const RugosityRow> rows) {
  std::string out =
      "x,rugosity_quadrature,paper_closed_form,alt_closed_form,residual_paper,residual_alt\n";
  for (const auto& r : rows) {
    out += fmt17(r.x) + "," + fmt17(r.quadrature) + "," + fmt17(r.printed) + "," +
           fmt17(r.alternative) + "," + fmt17(r.residual_printed) + "," + fmt17(r.residual_alt) +
           "\n";
  }
  return out;
}

}  // namespace texlab
