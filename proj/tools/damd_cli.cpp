#include "damd/cli/commands.hpp"
#include "damd/core/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_dir,
        std::optional<std::uint64_t> seed, const std::string& mode)
{
  using namespace damd;
  cli::ExperimentConfig cfg = config_path.empty() ? cli::ExperimentConfig{}
                                                  : cli::load_config(config_path);
  if (seed)
    cfg.override_seeds(*seed);
  cfg.validate();

  cli::CommandResult result;
  if (command == "forward")
    result = cli::cmd_forward(cfg, out_dir);
  else if (command == "assimilate")
    result = cli::cmd_assimilate(cfg, cli::assimilate_mode_from_string(mode), out_dir);
  else if (command == "verify-mc")
    result = cli::cmd_verify_mc(cfg, out_dir);
  else
    result = cli::cmd_fim(cfg, out_dir);

  for (const auto& [k, v] : result.summary)
    std::cout << k << " = " << v << '\n';
  for (const auto& w : result.warnings)
    std::cerr << "warning: " << w << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Data-aware method of distributions: CDF forecasts and sequential assimilation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", mode = "k_const";
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI experiment configuration");
    sub->add_option("--out-dir", out_dir, "Directory for CSV artifacts")->capture_default_str();
    sub->add_option("--seed", seed, "Base seed: truth N, noise N+1, enkf N+2, verify_mc N+3");
  };
  auto* forward = app.add_subcommand("forward", "Solve the CDF equation with the prior parameters");
  auto* assim = app.add_subcommand("assimilate", "DA-MD assimilation plus the matching baseline");
  auto* mc = app.add_subcommand("verify-mc", "Monte Carlo check of the random-constant closure");
  auto* fim = app.add_subcommand("fim", "Fisher information metric at a probe point");
  for (auto* sub : {forward, assim, mc, fim})
    add_common(sub);
  assim->add_option("--mode", mode, "inputs | k_const | k_white | k_exp")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, out_dir, seed, mode);
  } catch (const damd::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const damd::ContractError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const damd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const damd::DegenerateInput& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
