#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aclab/cli.hpp"
#include "aclab/config.hpp"
#include "aclab/field.hpp"
#include "test_util.hpp"

using namespace aclab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aclab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(ACLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small(const std::string& yaml) { return parse_config(yaml); }

}  // namespace

TEST(Cli, BootstrapMatchesGolden) {
  const auto dir = scratch("bootstrap");
  const auto r = cli::run(small("n: 2\nm: 1\nh: 0.1\nR_max: 2\n"), "bootstrap", dir.string());
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.message;
  const auto j = nlohmann::json::parse(slurp(dir / "bootstrap.json"));
  EXPECT_NEAR(j["fixed_point"].get<double>(), 0.5, 1e-13);
  EXPECT_EQ(j["kind"], "bootstrap");
  EXPECT_EQ(j["units"], "nondimensional");
  EXPECT_EQ(slurp(dir / "bootstrap.json"), slurp(fs::path(ACLAB_GOLDEN_DIR) / "bootstrap.json"));
}

TEST(Cli, VerifyPotentialMatchesGolden) {
  const auto dir = scratch("verify");
  const auto cfg = small("n: 2\nm: 2\nh: 0.1\nR_max: 2\nseed: 3\npotential:\n  family: anisotropic-power\n"
                         "  coeffs: [1, 1]\n  powers: [2, 4]\nanalysis:\n  verify_samples: 50\n");
  const auto r = cli::run(cfg, "verify-potential", dir.string());
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.message;
  const auto j = nlohmann::json::parse(slurp(dir / "verify_potential.json"));
  EXPECT_TRUE(j["pos"]["ok"].get<bool>());
  EXPECT_TRUE(j["lower_bound"]["ok"].get<bool>());
  EXPECT_EQ(slurp(dir / "verify_potential.json"), slurp(fs::path(ACLAB_GOLDEN_DIR) / "verify_potential.json"));
}

TEST(Cli, ConstantDataMinimizesInstantly) {
  const auto dir = scratch("constant");
  const auto r = cli::run(small("n: 2\nm: 2\nh: 0.1\nR_max: 2\npotential:\n  a: [0.5, -1]\n"), "minimize", dir.string());
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.message;
  const auto j = nlohmann::json::parse(slurp(dir / "solve_report.json"));
  EXPECT_EQ(j["solve"]["energy"].get<double>(), 0.0);
  EXPECT_EQ(j["solve"]["iterations"].get<int>(), 0);
  EXPECT_TRUE(j["solve"]["converged"].get<bool>());
  const VectorField u = read_field((dir / "field.bin").string());
  for (std::size_t k = 0; k < u.node_count(); ++k) ASSERT_EQ(u.at(k, 0), 0.5);
  // The canonical config is written alongside.
  EXPECT_EQ(parse_config(slurp(dir / "config.yaml")), small("n: 2\nm: 2\nh: 0.1\nR_max: 2\npotential:\n  a: [0.5, -1]\n"));
}

TEST(Cli, RerunsAreByteIdentical) {
  const auto cfg = small("n: 2\nm: 2\nh: 0.2\nR_max: 3\nseed: 5\nboundary:\n  tag: random-seeded\n  amplitude: 0.5\n"
                         "solver:\n  tol: 1e-7\n");
  for (const std::string sub : {"minimize", "energy-profile", "competitor", "bad-discs"}) {
    const auto d1 = scratch("rerun1"), d2 = scratch("rerun2");
    const auto r1 = cli::run(cfg, sub, d1.string());
    const auto r2 = cli::run(cfg, sub, d2.string());
    ASSERT_EQ(r1.exit_code, r2.exit_code) << sub;
    ASSERT_EQ(r1.artifacts.size(), r2.artifacts.size());
    for (std::size_t k = 0; k < r1.artifacts.size(); ++k)
      EXPECT_EQ(slurp(r1.artifacts[k]), slurp(r2.artifacts[k])) << sub << " " << r1.artifacts[k];
  }
}

TEST(Cli, BatchMatchesSingleRuns) {
  const auto cfg = small("n: 2\nm: 1\nh: 0.2\nR_max: 2\nboundary:\n  tag: radial-profile\n");
  const auto single = scratch("single");
  cli::run(cfg, "minimize", single.string());
  const auto batch = scratch("batch");
  const auto res = cli::run_batch({{cfg, "minimize", (batch / "a").string()}, {cfg, "minimize", (batch / "b").string()}}, 2);
  ASSERT_EQ(res.size(), 2u);
  for (const char* sub : {"a", "b"})
    EXPECT_EQ(slurp(batch / sub / "solve_report.json"), slurp(single / "solve_report.json"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string out = " --out " + (dir / "out").string();

  EXPECT_EQ(run_binary("bootstrap --config " + write("ok.yaml", "n: 2\n") + out), 0);
  EXPECT_EQ(run_binary("bootstrap --config " + write("bad.yaml", "n: 2\nbogus: 1\n") + out), 2);
  EXPECT_EQ(run_binary("nonsense --config " + dir.string() + "/ok.yaml" + out), 2);
  // Double-well fails the radial-monotonicity precondition.
  EXPECT_EQ(run_binary("max-principle --config " +
                       write("dw.yaml", "n: 2\nm: 1\nh: 0.2\nR_max: 2\npotential:\n  family: double-well\n") + out),
            2);
  // Huge data overflow the quartic energy.
  EXPECT_EQ(run_binary("minimize --config " +
                       write("div.yaml", "n: 2\nm: 2\nh: 0.2\nR_max: 2\npotential:\n  family: power-q\n  q: 4\n"
                                         "boundary:\n  tag: angular\n  amplitude: 1e80\n") + out),
            3);
  // A field that does not solve the equation cannot be analysed.
  {
    const auto g = Grid::make(2, 0.2, 2.0);
    write_field((dir / "noise.bin").string(), aclab::fixtures::random_smooth_field(g, 1, 2));
    EXPECT_EQ(run_binary("monotonicity --config " +
                         write("noise.yaml", "n: 2\nm: 1\nh: 0.2\nR_max: 2\ninput_field: " + (dir / "noise.bin").string() + "\n") +
                         out),
              4);
    EXPECT_TRUE(fs::exists(dir / "out" / "config.yaml"));
  }
}

TEST(Cli, FormatNumber) {
  EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(cli::format_number(-std::numeric_limits<double>::infinity()), "-inf");
}
