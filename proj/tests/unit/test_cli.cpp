#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

#include "run.hpp"
#include "sphspec/spectrum.hpp"

using namespace sphspec;
using cli::RunConfig;

namespace {

std::string data(const char* name) { return (std::filesystem::path(SPHSPEC_TEST_DATA) / name).string(); }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.n_max = 5;
  return c;
}

int shell(const std::string& args) {
  const int status = std::system((std::string(SPHSPEC_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, EigsCsvMatchesLibrary) {
  auto cfg = make("eigs");
  cfg.potential = data("coulomb.json");
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, cli::ok) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,lambda,sqrt_lambda,bessel_zero,eps_n");
  const auto recs = eigenvalues(AngularMomentum(0.0), PotentialSpec::coulomb(1.0), BoundaryCondition::dirichlet(), 5);
  for (const auto& rec : recs) {
    ASSERT_TRUE(std::getline(in, line));
    const double lam = std::stod(line.substr(line.find(',') + 1));
    EXPECT_NEAR(lam, rec.lambda, 1e-12 * rec.lambda);
  }
}

TEST(Cli, EigsJson) {
  auto cfg = make("eigs");
  cfg.format = "json";
  cfg.bc = "robin:2";
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, cli::ok) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.dump().find("lambda") != std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"eigs", "norming", "mfun", "export-data"}) {
    auto cfg = make(cmd);
    cfg.potential = data("step_mixed.json");
    cfg.l = "-0.5";
    if (std::string(cmd) == "norming") cfg.bc = "robin:1";
    if (std::string(cmd) == "mfun") cfg.points = 5;
    if (std::string(cmd) == "export-data") cfg.beta = "1";
    const auto a = invoke(cfg), b = invoke(cfg);
    ASSERT_EQ(a.code, cli::ok) << cmd << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_FALSE(a.out.empty()) << cmd;
  }
}

TEST(Cli, ExportRoundTripThroughFile) {
  const auto path = std::filesystem::temp_directory_path() / "sphspec_export_test.json";
  auto cfg = make("export-data");
  cfg.kind = "norming";
  cfg.beta = "inf";
  cfg.format = "json";
  cfg.out = path.string();
  std::ostringstream err;
  ASSERT_EQ(cli::run(cfg, err), cli::ok) << err.str();
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto ds = SpectralDataset::from_json(buf.str());
  EXPECT_EQ(ds.kind, DatasetKind::spectrum_plus_norming);
  ASSERT_EQ(ds.first.size(), 5u);
  EXPECT_NEAR(ds.first[0], std::numbers::pi * std::numbers::pi, 1e-11);
  EXPECT_EQ(ds.to_json(), buf.str());
  std::filesystem::remove(path);
}

TEST(Cli, ConfigErrorsExitOne) {
  auto cfg = make("eigs");
  cfg.l = "minus one";
  EXPECT_EQ(invoke(cfg).code, cli::malformed_config);
  cfg = make("eigs");
  cfg.bc = "neumann";
  EXPECT_EQ(invoke(cfg).code, cli::malformed_config);
  cfg = make("eigs");
  cfg.format = "xml";
  EXPECT_EQ(invoke(cfg).code, cli::malformed_config);
  cfg = make("nonsense");
  EXPECT_EQ(invoke(cfg).code, cli::malformed_config);
  cfg = make("eigs");
  cfg.potential = data("malformed.json");
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, cli::malformed_config);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ValidationFailuresExitTwo) {
  auto cfg = make("eigs");
  cfg.l = "-0.7";
  EXPECT_EQ(invoke(cfg).code, cli::validation_failure);
  cfg = make("eigs");
  cfg.potential = data("inverse_square.json");
  EXPECT_EQ(invoke(cfg).code, cli::validation_failure);
  cfg = make("export-data");
  cfg.kind = "boundary";
  cfg.beta = "0";
  cfg.which = "derivative";
  EXPECT_EQ(invoke(cfg).code, cli::validation_failure);
}

TEST(Cli, OracleCompareAndCounterexample) {
  auto cfg = make("oracle-compare");
  cfg.n_max = 3;
  cfg.potential = data("coulomb.json");
  auto r = invoke(cfg);
  EXPECT_EQ(r.code, cli::ok) << r.err;
  cfg = make("counterexample");
  r = invoke(cfg);
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_NE(r.out.find("z_star"), std::string::npos);
}

TEST(Cli, VerifySingleBound) {
  auto cfg = make("verify-bounds");
  cfg.bound = "estphil";
  cfg.format = "json";
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).dump().find("estphil") != std::string::npos, true);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(shell("eigs --n-max 3"), 0);
  EXPECT_EQ(shell("eigs --n-max three"), 1);
  EXPECT_EQ(shell("--no-such-flag"), 1);
  EXPECT_EQ(shell("eigs --l -2"), 2);
}
