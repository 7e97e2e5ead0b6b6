#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <numbers>

#include "texlab/report.hpp"

using namespace texlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("texlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const Json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Result invoke(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = env + " \"" TEXLAB_CLI "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
  }

  fs::path dir_;
};

Json density_json(const DensityOperator& rho) { return density_to_json(rho); }

Json comp_layer(double p = 0.0, double q = 0.0) {
  return {{"tracks", 4},
          {"hidden_basis", {{"alpha", {1, 0}}, {"beta", {0, 0}}}},
          {"gates", {{{"kind", "H"}, {"track", 0}}, {{"kind", "CNOT"}, {"control", 1}, {"target", 2}}}},
          {"noise", {{"p", p}, {"q", q}}}};
}

}  // namespace

TEST_F(Cli, TextureOfFourierStates) {
  auto r = invoke("texture --in " + write("f1.json", density_json(DensityOperator::from_ket(fourier_ket(4, 1)))).string());
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_NEAR(j.at("grand_sum").get<double>(), 4.0, 1e-12);
  EXPECT_NEAR(j.at("rugosity").get<double>(), 0.0, 1e-12);

  r = invoke("texture --in " + write("f2.json", density_json(DensityOperator::from_ket(fourier_ket(4, 2)))).string());
  ASSERT_EQ(r.code, 0) << r.err;
  j = Json::parse(r.out);
  EXPECT_NEAR(j.at("grand_sum").get<double>(), 0.0, 1e-12);
  EXPECT_EQ(j.at("rugosity"), "inf");
}

TEST_F(Cli, TextureOfDiagonalQutrit) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 0.5;
  m(1, 1) = 0.3;
  m(2, 2) = 0.2;
  const auto path = write("diag.json", density_json(DensityOperator(m)));
  const auto r = invoke("texture --in " + path.string() + " --out " + (dir_ / "t.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(slurp(dir_ / "t.json"));
  EXPECT_NEAR(j.at("grand_sum").get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j.at("rugosity").get<double>(), std::log(3.0), 1e-12);
  EXPECT_NEAR(j.at("projective_probability").get<double>(), 1.0 / 3.0, 1e-12);
}

TEST_F(Cli, IdentifyExitCodes) {
  auto r = invoke("identify --in " + write("clean.json", comp_layer()).string() + " --seed 42 --trials 100000");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j.at("complete").get<bool>());
  EXPECT_EQ(j.at("gates").at("0"), "H");
  EXPECT_EQ(j.at("gates").at("2"), "CNOT-target");

  r = invoke("identify --in " + write("noisy.json", comp_layer(0.2, 0.3)).string() + " --seed 42 --trials 100000");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("noise characterization"), std::string::npos);
  EXPECT_FALSE(Json::parse(r.out).at("complete").get<bool>());

  Json bad = comp_layer();
  bad["gates"][1]["target"] = 1;
  r = invoke("identify --in " + write("bad.json", bad).string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gates[1].target"), std::string::npos);
}

TEST_F(Cli, IdentifyCsvAndBadArguments) {
  const auto path = write("clean.json", comp_layer()).string();
  auto r = invoke("identify --in " + path + " --trials 5000 --format csv");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "track,X,stderr_X,Y,stderr_Y,trials");
  EXPECT_EQ(invoke("identify --in " + path + " --format xml").code, 1);
  EXPECT_EQ(invoke("identify --in " + (dir_ / "missing.json").string()).code, 1);
  EXPECT_EQ(invoke("identify --in " + path + " --out /nonexistent/dir/r.json").code, 1);
}

TEST_F(Cli, IdentifyIsThreadCountInvariant) {
  const auto path = write("clean.json", comp_layer()).string();
  const std::string args = "identify --in " + path + " --seed 9 --trials 50000";
  const auto one = invoke(args, "TEXLAB_THREADS=1");
  ASSERT_EQ(one.code, 0);
  for (const char* t : {"TEXLAB_THREADS=4", "TEXLAB_THREADS=8"}) EXPECT_EQ(invoke(args, t).out, one.out) << t;
}

TEST_F(Cli, LayerGenDeterministicAndValid) {
  const std::string args = "layer-gen --tracks 8 --cnots 3 --seed 7";
  const auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, invoke("layer-gen --tracks 8 --cnots 3 --seed 8").out);
  const auto layer = parse_layer(Json::parse(a.out));
  EXPECT_EQ(layer.num_tracks(), 8u);
  EXPECT_EQ(layer.cnot_pairs().size(), 3u);
  EXPECT_EQ(invoke("layer-gen --tracks 4 --cnots 3").code, 1);
}

TEST_F(Cli, LayerGenBasisIsHaar) {
  double sum = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    sum += std::norm(random_layer(4, 1, rng).hidden_basis().alpha());
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
  const auto r = invoke("layer-gen --tracks 4 --cnots 1 --seed 3 --min-amplitude 0.3");
  const auto layer = parse_layer(Json::parse(r.out));
  EXPECT_GE(std::abs(layer.hidden_basis().alpha()), 0.3);
  EXPECT_GE(std::abs(layer.hidden_basis().beta()), 0.3);
}

TEST_F(Cli, ParamagnetAndChannelAudit) {
  auto r = invoke("paramagnet --grid 0,1,50");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json rows = Json::parse(r.out).at("rows");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].at("rugosity_quadrature").get<double>(), 2 * std::numbers::ln2, 1e-6);
  EXPECT_NEAR(rows[2].at("rugosity_quadrature").get<double>(), std::numbers::ln2, 1e-6);
  EXPECT_EQ(invoke("paramagnet --grid 0:1:0.25 --format csv").out.substr(0, 2), "x,");
  EXPECT_EQ(invoke("paramagnet --grid 1:0:0.25").code, 1);

  r = invoke("channel-audit --dim 3 --seed 5 --trials 500");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json audit = Json::parse(r.out);
  EXPECT_TRUE(audit.at("certificate").at("ok").get<bool>());
  EXPECT_GE(audit.at("audit").at("min_grand_sum_gain").get<double>(), -1e-10);

  const Json broken = Json::parse(R"({"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]]})");
  r = invoke("channel-audit --in " + write("x.json", broken).string());
  EXPECT_EQ(r.code, 2);
}
