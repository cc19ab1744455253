#include "doctest.h"

#include "damd/cli/commands.hpp"
#include "damd/cli/config.hpp"
#include "damd/core/csv.hpp"
#include "damd/core/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace damd;
using namespace damd::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const auto p = fs::temp_directory_path() / ("damd_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text)
{
  std::ofstream(p) << text;
}

std::string read_text(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args)
{
  const std::string cmd = std::string("\"") + DAMD_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check_same_outputs(const fs::path& a, const fs::path& b)
{
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto other = b / e.path().filename();
    REQUIRE(fs::exists(other));
    CHECK_MESSAGE(read_text(e.path()) == read_text(other), e.path().filename().string());
    ++files;
  }
  CHECK(files > 0);
}

const char* small_forward = R"(
[domain]
n_x = 40
n_u = 32
dt = 0.02
t_end = 0.3

[prior]
k_mean = 2.0
k_std = 0.2

[output]
snapshot_every = 5
)";

} // namespace

TEST_CASE("config defaults and round trip")
{
  const auto d = parse_config("");
  CHECK(d.domain.n_x == 200);
  CHECK(d.domain.n_u == 128);
  CHECK(d.domain.dt == 0.01);
  CHECK(d.physics.a == 0.1);
  CHECK(d.closure.sign_convention == mdist::SignConvention::appendix);

  auto cfg = parse_config(read_text(fs::path(DAMD_CONFIG_DIR) / "k_exp.ini"));
  const auto text = to_ini(cfg);
  const auto again = parse_config(text);
  CHECK(to_ini(again) == text);
  CHECK(again.prior == cfg.prior);
  CHECK(again.closure.family == cfg.closure.family);

  for (const auto& e : fs::directory_iterator(DAMD_CONFIG_DIR)) {
    const auto c = load_config(e.path());
    CHECK_NOTHROW(c.validate());
    CHECK(to_ini(parse_config(to_ini(c))) == to_ini(c));
  }
}

TEST_CASE("config rejects unknown keys and invalid values")
{
  CHECK_THROWS_AS(parse_config("[domain]\nnx = 10\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[dommain]\nn_x = 10\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[domain]\nn_x = ten\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[closure]\nfamily = gaussian\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[domain]\nn_x = 1\n").validate(), ValidationError);
  CHECK_THROWS_AS(parse_config("[noise]\nsigma_eps = -0.1\n").validate(), ValidationError);
  CHECK_THROWS_AS(parse_config("[prior]\nk_std = -1\n").validate(), ValidationError);
  try {
    parse_config("[domain]\nnx = 10\n");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("domain") != std::string::npos);
  }
}

TEST_CASE("seed override")
{
  auto cfg = parse_config("");
  cfg.override_seeds(10);
  CHECK(cfg.truth.seed == 10);
  CHECK(cfg.noise.seed == 11);
  CHECK(cfg.enkf.seed == 12);
  CHECK(cfg.verify_mc.seed == 13);
}

TEST_CASE("forward command artifacts")
{
  const auto out = scratch("forward_lib");
  const auto cfg = parse_config(small_forward);
  const auto r = cmd_forward(cfg, out);
  for (const char* f : {"cdf_profile.csv", "forward_summary.csv", "summary.csv",
                        "resolved_config.ini"})
    CHECK(fs::exists(out / f));
  const auto prof = core::read_csv(out / "cdf_profile.csv");
  CHECK(prof.header == std::vector<std::string>{"t", "x", "U", "F"});
  const auto summary = core::read_csv(out / "forward_summary.csv");
  CHECK_NOTHROW(summary.column("median"));
  CHECK_NOTHROW(summary.column("iqr"));
  CHECK_THROWS_AS(r.get("no_such_key"), ContractError);
  fs::remove_all(out);
}

TEST_CASE("assimilate rejects inconsistent modes")
{
  const auto out = scratch("modes");
  auto cfg = parse_config(small_forward);
  CHECK_THROWS_AS(cmd_assimilate(cfg, AssimilateMode::inputs, out), ValidationError);
  CHECK_THROWS_AS(cmd_assimilate(cfg, AssimilateMode::k_exp, out), ValidationError);
  CHECK_THROWS_AS(assimilate_mode_from_string("k_gauss"), ValidationError);
  cfg.noise.sigma_eps = 0.0;
  CHECK_THROWS_AS(cmd_assimilate(cfg, AssimilateMode::k_const, out), ValidationError);
  fs::remove_all(out);
}

TEST_CASE("fim command Gaussian self test")
{
  const auto out = scratch("fim");
  auto cfg = load_config(fs::path(DAMD_CONFIG_DIR) / "fim_gaussian.ini");
  const auto r = cmd_fim(cfg, out);
  CHECK(r.get("symmetric") == "true");
  const auto t = core::read_csv(out / "fim.csv");
  const double sigma = cfg.fim.gaussian_sigma;
  for (const auto& row : t.rows) {
    const double g = std::stod(row[t.column("g_ij")]);
    if (row[0] == "mu" && row[1] == "mu")
      CHECK(g == doctest::Approx(1.0 / (sigma * sigma)).epsilon(1e-3));
    if (row[0] == "sigma" && row[1] == "sigma")
      CHECK(g == doctest::Approx(2.0 / (sigma * sigma)).epsilon(1e-3));
  }
  fs::remove_all(out);
}

TEST_CASE("binary exit codes")
{
  const auto dir = scratch("exit");
  write_text(dir / "bad.ini", "[domain]\nbogus = 1\n");
  write_text(dir / "ok.ini", small_forward);
  write_text(dir / "inconsistent.ini", R"(
[physics]
u0 = 0.1
[truth]
k_mean = 1.0
[noise]
sigma_eps = 0.0001
[prior]
k_mean = 1.0
mu0 = 0.9
sigma0 = 0.000001
mub = 0.5
sigmab = 0.1
[closure]
family = exact_deterministic_k
deterministic_inputs = false
)");
  const std::string out = " --out-dir \"" + (dir / "out").string() + "\"";
  CHECK(run_cli("forward --config \"" + (dir / "ok.ini").string() + "\"" + out) == 0);
  CHECK(run_cli("forward --config \"" + (dir / "bad.ini").string() + "\"" + out) == 1);
  CHECK(run_cli("forward --config \"" + (dir / "missing.ini").string() + "\"" + out) == 1);
  CHECK(run_cli("assimilate --mode nope --config \"" + (dir / "ok.ini").string() + "\"" + out) == 1);
  CHECK(run_cli("assimilate --mode inputs --config \"" + (dir / "inconsistent.ini").string() +
                "\"" + out) == 2);
  fs::remove_all(dir);
}

TEST_CASE("binary outputs are deterministic and reproducible from the resolved config")
{
  const auto dir = scratch("determinism");
  write_text(dir / "k.ini", std::string(small_forward) + R"(
[truth]
k_mean = 1.047
[measurements]
schedule = grid
xs = 0.1, 0.8
ts = 0.2, 0.3
[optimizer]
max_iters = 40
)");
  const std::string cfg = " --config \"" + (dir / "k.ini").string() + "\"";
  const auto a = dir / "a", b = dir / "b", c = dir / "c";
  REQUIRE(run_cli("assimilate --mode k_const" + cfg + " --out-dir \"" + a.string() + "\"") == 0);
  REQUIRE(run_cli("assimilate --mode k_const" + cfg + " --out-dir \"" + b.string() + "\"") == 0);
  check_same_outputs(a, b);

  REQUIRE(run_cli("assimilate --mode k_const --config \"" + (a / "resolved_config.ini").string() +
                  "\" --out-dir \"" + c.string() + "\"") == 0);
  check_same_outputs(a, c);

  const auto d = dir / "d";
  REQUIRE(run_cli("assimilate --mode k_const --seed 7" + cfg + " --out-dir \"" + d.string() + "\"") == 0);
  CHECK(read_text(a / "measurements.csv") != read_text(d / "measurements.csv"));
  CHECK(load_config(d / "resolved_config.ini").noise.seed == 8);
  fs::remove_all(dir);
}
