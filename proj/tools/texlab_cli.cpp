#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "texlab/channels.hpp"
#include "texlab/errors.hpp"
#include "texlab/identify.hpp"
#include "texlab/paramagnet.hpp"
#include "texlab/report.hpp"
#include "texlab/texture.hpp"

using namespace texlab;

namespace {

constexpr int kExitFull = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--in", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("--in", std::string("invalid JSON: ") + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("--out", "cannot write " + out_path);
  out << text;
}

// "0:5:0.25" (inclusive range) or "0,0.5,2".
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  const auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("--grid", "bad number '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("--grid", "expected start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (!(h > 0.0) || b < a) throw ValidationError("--grid", "need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(a + h * static_cast<double>(i));
    return grid;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) grid.push_back(num(p));
  if (grid.empty()) throw ValidationError("--grid", "empty grid");
  return grid;
}

struct Common {
  std::string in;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t trials = 100000;
  std::optional<std::size_t> shots;
  double tau = 0.05;
  std::size_t quadrature_points = 256;
  std::string grid = "0:5:0.25";
  std::size_t tracks = 4;
  std::size_t cnots = 1;
  std::size_t dim = 2;
  double min_amplitude = 0.0;
};

int cmd_texture(const Common& o) {
  const auto rho = parse_density(read_json(o.in));
  const auto r = read_texture(rho);
  if (o.format == "csv") {
    const auto cell = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::isfinite(v) ? std::string(buf) : number(v).get<std::string>();
    };
    emit("dim,grand_sum,rugosity,projective_probability\n" + std::to_string(r.dim) + "," +
             cell(r.grand_sum) + "," + cell(r.rugosity) + "," + cell(r.projective_probability) +
             "\n",
         o.out);
  } else {
    emit(canonical_dump(texture_to_json(r)), o.out);
  }
  return kExitFull;
}

int cmd_channel_audit(const Common& o) {
  Rng rng(o.seed);
  std::optional<KrausChannel> channel;
  std::optional<Ket> target;
  std::size_t dim = o.dim;
  if (!o.in.empty()) {
    channel.emplace(parse_channel(read_json(o.in)));
    dim = channel->dim();
  } else {
    if (dim < 2) throw ValidationError("--dim", "must be >= 2");
    target = random_ket(dim, rng);
    channel.emplace(build_free_channel(dim, *target));
  }

  const auto cert = channel->certificate();
  Json out = {{"dim", dim},
              {"kraus_count", channel->ops().size()},
              {"completeness_residual", number(channel->completeness_residual())},
              {"certificate",
               {{"ok", cert.ok},
                {"max_eigen_residual", number(cert.max_eigen_residual)},
                {"weight_sum", number(cert.weight_sum)}}},
              {"seed", o.seed},
              {"trials", o.trials},
              {"version", kVersion}};

  const auto f1 = DensityOperator::from_ket(fourier_ket(dim, 1));
  out["f1_residual"] = number(frobenius_distance(apply_channel(*channel, f1).matrix(), f1.matrix()));
  if (target) {
    const auto f2 = DensityOperator::from_ket(fourier_ket(dim, 2));
    out["conversion_residual"] =
        number(frobenius_distance(apply_channel(*channel, f2).matrix(), projector(*target)));
  }

  if (cert.ok) {
    double worst_gain = std::numeric_limits<double>::infinity();
    double worst_identity = 0.0;
    for (std::size_t i = 0; i < o.trials; ++i) {
      const auto a = monotonicity_audit(*channel, random_density(dim, rng));
      worst_gain = std::min(worst_gain, a.sigma_after - a.sigma_before);
      worst_identity = std::max(worst_identity, a.identity_residual());
    }
    out["audit"] = {{"states", o.trials},
                    {"min_grand_sum_gain", number(worst_gain)},
                    {"max_identity_residual", number(worst_identity)}};
  }
  emit(canonical_dump(out), o.out);
  return cert.ok ? kExitFull : kExitPartial;
}

int cmd_identify(const Common& o) {
  const auto layer = parse_layer(read_json(o.in));
  IdentifyOptions opt;
  opt.trials.trials = o.trials;
  opt.trials.seed = o.seed;
  opt.trials.shots = o.shots;
  opt.tau = o.tau;
  const auto report = identify_layer(layer, opt);
  if (o.format == "csv") {
    emit(stats_csv(report.tracks), o.out);
  } else {
    emit(canonical_dump(report_to_json(report)), o.out);
  }
  for (const auto& d : report.diagnostics) std::cerr << "note: " << d << "\n";
  return report.complete ? kExitFull : kExitPartial;
}

int cmd_paramagnet(const Common& o) {
  const auto grid = parse_grid(o.grid);
  const auto rows = rugosity_magnetization_report(grid, o.quadrature_points);
  emit(o.format == "csv" ? paramagnet_csv(rows) : canonical_dump(paramagnet_to_json(rows)), o.out);
  return kExitFull;
}

int cmd_layer_gen(const Common& o) {
  Rng rng(o.seed);
  const auto layer = random_layer(o.tracks, o.cnots, rng, o.min_amplitude);
  emit(canonical_dump(layer_to_json(layer)), o.out);
  return kExitFull;
}

void check_out_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::absolute(path).parent_path();
  if (!std::filesystem::is_directory(parent)) {
    throw ValidationError("--out", "directory " + parent.string() + " does not exist");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Texture measures, free channels and hidden-basis gate identification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common o;

  const auto add_io = [&](CLI::App* sub, bool needs_in) {
    auto* in = sub->add_option("--in", o.in, "input JSON file")->check(CLI::ExistingFile);
    if (needs_in) in->required();
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* texture = app.add_subcommand("texture", "grand sum and rugosity of a density matrix");
  add_io(texture, true);

  auto* audit = app.add_subcommand("channel-audit", "certify a free channel and audit monotonicity");
  add_io(audit, false);
  audit->add_option("--dim", o.dim, "dimension of the generated channel");
  audit->add_option("--seed", o.seed);
  audit->add_option("--trials", o.trials, "random states to audit")->check(CLI::PositiveNumber);

  auto* identify = app.add_subcommand("identify", "run the gate identification protocol");
  add_io(identify, true);
  identify->add_option("--seed", o.seed);
  identify->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  identify->add_option("--shots", o.shots, "projective shots per trial (default: exact)")
      ->check(CLI::PositiveNumber);
  identify->add_option("--tau", o.tau, "detection threshold")->check(CLI::PositiveNumber);

  auto* para = app.add_subcommand("paramagnet", "averaged rugosity of coherent Gibbs states");
  add_io(para, false);
  para->add_option("--grid", o.grid, "start:stop:step or comma list of x values");
  para->add_option("--quadrature-points", o.quadrature_points)->check(CLI::Range(64, 1 << 24));

  auto* gen = app.add_subcommand("layer-gen", "random layer specification");
  gen->add_option("--out", o.out);
  gen->add_option("--tracks", o.tracks)->check(CLI::PositiveNumber);
  gen->add_option("--cnots", o.cnots);
  gen->add_option("--seed", o.seed);
  gen->add_option("--min-amplitude", o.min_amplitude, "lower bound on |alpha| and |beta|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitFull : kExitError;
  }

  try {
    check_out_path(o.out);
    if (*texture) return cmd_texture(o);
    if (*audit) return cmd_channel_audit(o);
    if (*identify) return cmd_identify(o);
    if (*para) return cmd_paramagnet(o);
    if (*gen) return cmd_layer_gen(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
