#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "ckrlie/errors.hpp"
#include "run_config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ckrlie;

const fs::path kConfigs = CKRLIE_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "ckrlie_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(CKR_LIE_BINARY) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string cfg(const std::string& name) { return (kConfigs / name).string(); }

cli::RunConfig parse_text(const std::string& text, std::vector<std::string> overrides = {}) {
  std::istringstream in(text);
  return cli::parse_config(in, "test.cfg", overrides);
}

std::string invariant_of(const std::string& text, std::vector<std::string> overrides = {}) {
  try {
    static_cast<void>(parse_text(text, std::move(overrides)));
  } catch (const ValidationError& e) {
    return e.invariant() + " | " + e.what();
  }
  return "";
}

TEST(Config, ReadsEverySection) {
  const cli::RunConfig c = parse_text(
      "[problem]\ncase = II\npotential = x^2\nenergy = 1.5\nmass_profile = 1 + x\nordering = 0, -1, 0\n"
      "[integrator]\nmethod = rk45\nstep = 0.01\n[range]\nx0 = -1\nx1 = 2\npoints = 7\n"
      "[initial]\np1 = 1\np2 = -2\n[oracle]\npsi0 = 1, 2\n[constraints]\nc0 = 0\nsmall_sigma = yes\n");
  EXPECT_EQ(c.kind, cli::CaseKind::kII);
  EXPECT_EQ(c.energy, 1.5);
  EXPECT_EQ(c.mass_profile(2.0), 3.0);
  EXPECT_EQ(c.integrator.method, ode::Method::kRk45);
  EXPECT_EQ(c.range.points, 7u);
  EXPECT_EQ(c.range.x0, -1.0);
  EXPECT_EQ(c.start.p2, -2.0);
  EXPECT_EQ(c.oracle.psi0, std::complex<double>(1.0, 2.0));
  ASSERT_TRUE(c.constraints.c0.has_value());
  EXPECT_EQ(*c.constraints.c0, 0.0);
  EXPECT_TRUE(c.constraints.small_sigma);
}

TEST(Config, ErrorsCarryLineAndKey) {
  const std::string bad_number = invariant_of("[problem]\ncase = I\n\nenergy = abc\n");
  EXPECT_NE(bad_number.find("config.problem.energy"), std::string::npos) << bad_number;
  EXPECT_NE(bad_number.find("test.cfg:4"), std::string::npos) << bad_number;

  const std::string bad_expr = invariant_of("[gauge]\nsigma = sin(x\n");
  EXPECT_NE(bad_expr.find("config.gauge.sigma"), std::string::npos) << bad_expr;
  EXPECT_NE(bad_expr.find("test.cfg:2"), std::string::npos) << bad_expr;
  EXPECT_NE(bad_expr.find("offset"), std::string::npos) << bad_expr;

  EXPECT_NE(invariant_of("[problem]\nenergie = 1\n").find("config.problem.energie"), std::string::npos);
  EXPECT_NE(invariant_of("[nowhere]\nx = 1\n").find("config.nowhere"), std::string::npos);
  EXPECT_NE(invariant_of("[problem\ncase = I\n").find("config.syntax"), std::string::npos);
  EXPECT_NE(invariant_of("[problem]\ncase = IV\n").find("config.problem.case"), std::string::npos);
  EXPECT_NE(invariant_of("[range]\nx0 = 1\nx1 = 1\n").find("config.range"), std::string::npos);
  EXPECT_NE(invariant_of("[problem]\nordering = 1, 1, 1\n").find("config.problem.ordering"), std::string::npos);
  EXPECT_NE(invariant_of("[integrator]\nstep = -1\n").find("config.integrator"), std::string::npos);
}

TEST(Config, OverridesReplaceKeys) {
  const cli::RunConfig c = parse_text("[problem]\nenergy = 1\n", {"problem.energy=2.5", "range.points=11"});
  EXPECT_EQ(c.energy, 2.5);
  EXPECT_EQ(c.range.points, 11u);
  const std::string err = invariant_of("[problem]\nenergy = 1\n", {"problem.energy=oops"});
  EXPECT_NE(err.find("--set problem.energy"), std::string::npos) << err;
  EXPECT_NE(invariant_of("", {"energy"}).find("config.override"), std::string::npos);
}

TEST(Cli, IntegrateOscillatorEndsOnClosedForm) {
  const fs::path dir = scratch("integrate");
  const Outcome r = invoke("integrate -c " + cfg("oscillator.cfg") + " -o " + dir.string(), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(dir / "trajectory.csv");
  std::string line, last;
  std::getline(in, line);
  EXPECT_EQ(line, "x,p1,p2");
  while (std::getline(in, line)) last = line;
  double x = 0, p1 = 0, p2 = 0;
  ASSERT_EQ(std::sscanf(last.c_str(), "%lf,%lf,%lf", &x, &p1, &p2), 3);
  EXPECT_EQ(x, 1.0);
  EXPECT_NEAR(p2, 1.0, 1e-10);
  EXPECT_EQ(p1, 0.0);
}

TEST(Cli, VerifyAlgebraAllPass) {
  const fs::path dir = scratch("algebra");
  const Outcome r = invoke("verify-algebra --points 100 --seed 7 -o " + dir.string(), dir);
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string json = slurp(dir / "algebra.json");
  EXPECT_EQ(json.find("\"pass\": false"), std::string::npos);
  std::size_t count = 0;
  for (std::size_t at = json.find("\"max_error\": "); at != std::string::npos;
       at = json.find("\"max_error\": ", at + 1)) {
    EXPECT_LE(std::stod(json.substr(at + 13)), 1e-9);
    ++count;
  }
  EXPECT_EQ(count, 21u);
}

TEST(Cli, InvalidGaugeExitsTwoNamingInvariant) {
  const fs::path dir = scratch("gauge");
  const Outcome r = invoke("coeffs -c " + cfg("bad_gauge.cfg") + " -o " + dir.string(), dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("gauge.alpha!=0"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "coeffs.csv"));
}

TEST(Cli, NumericalFailureExitsThree) {
  // Upsilon is undefined on the p1 = 0 axis where the oscillator trajectory lives.
  const fs::path dir = scratch("numerical");
  const Outcome r = invoke("lie-integral -c " + cfg("oscillator.cfg") + " -o " + dir.string(), dir);
  EXPECT_EQ(r.status, 3) << r.err;
}

TEST(Cli, UsageErrors) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(invoke("no-such-command", dir).status, 2);
  EXPECT_EQ(invoke("integrate", dir).status, 2);
  EXPECT_EQ(invoke("--help", dir).status, 0);
}

TEST(Cli, ValidateOnlyWritesNothing) {
  const fs::path dir = scratch("validate");
  const Outcome ok = invoke("integrate --validate -c " + cfg("swanson.cfg") + " -o " + dir.string() + "/out", dir);
  EXPECT_EQ(ok.status, 0) << ok.err;
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_EQ(invoke("coeffs --validate -c " + cfg("bad_gauge.cfg"), dir).status, 2);
}

TEST(Cli, OutputsAreByteIdenticalAcrossRunsAndJobCounts) {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"coeffs", "oscillator.cfg"},       {"integrate", "variable_mass.cfg"},
      {"symmetry", "swanson.cfg"},        {"lie-integral", "swanson.cfg"},
      {"constraints", "oscillator.cfg"},  {"oracle-compare", "variable_mass.cfg"},
  };
  for (const auto& [command, config] : runs) {
    const fs::path a = scratch(command + "_a"), b = scratch(command + "_b");
    ASSERT_EQ(invoke(command + " -c " + cfg(config) + " --seed 3 -o " + a.string(), a).status, 0) << command;
    ASSERT_EQ(invoke(command + " -c " + cfg(config) + " --seed 3 --jobs 3 -o " + b.string(), b).status, 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      const std::string name = entry.path().filename().string();
      if (name == "stdout.txt" || name == "stderr.txt") continue;
      EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << command << " " << name;
      ++files;
    }
    EXPECT_GT(files, 0u) << command;
  }
  const fs::path a = scratch("alg_a"), b = scratch("alg_b");
  ASSERT_EQ(invoke("verify-algebra --seed 11 -o " + a.string(), a).status, 0);
  ASSERT_EQ(invoke("verify-algebra --seed 11 --jobs 4 -o " + b.string(), b).status, 0);
  EXPECT_EQ(slurp(a / "algebra.json"), slurp(b / "algebra.json"));
}

TEST(Cli, CsvValuesRoundTrip) {
  const fs::path dir = scratch("roundtrip");
  std::ostringstream out, err;
  cli::Invocation inv;
  inv.command = "coeffs";
  inv.config_path = cfg("swanson.cfg");
  inv.out_dir = dir.string();
  ASSERT_EQ(cli::run(inv, out, err), 0) << err.str();
  const cli::RunConfig c = cli::load_config(cfg("swanson.cfg"));
  std::ifstream in(dir / "coeffs.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,a1,a2,a3");
  const std::vector<double> xs = c.range.nodes();
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ASSERT_LT(k, xs.size());
    EXPECT_EQ(std::stod(line.substr(0, line.find(','))), xs[k]) << line;
    ++k;
  }
  EXPECT_EQ(k, xs.size());
}

}  // namespace
