#pragma once

#include "damd/cli/config.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace damd::cli {

enum class AssimilateMode
{
  inputs,
  k_const,
  k_white,
  k_exp
};

std::string to_string(AssimilateMode m);
AssimilateMode assimilate_mode_from_string(const std::string& s);

/// Key/value lines also written to `summary.csv`.
struct CommandResult
{
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> warnings;

  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
  /// Value for `key`; throws ContractError when absent.
  const std::string& get(const std::string& key) const;
};

/// Prior CDF profile: `cdf_profile.csv` and `forward_summary.csv`
/// (x, t, median, q25, q75, iqr at the final time).
CommandResult cmd_forward(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// DA-MD run plus the matching baseline. Always writes `measurements.csv`,
/// `k_field.csv`, `posterior_params.csv` and `kl_profile.csv`; inputs mode adds
/// `bayes_inputs.csv` and `kl_profile_bayes.csv`, k_const adds
/// `bayes_posterior.csv`, the field modes add `ensemble_posterior.csv`,
/// `enkf_steps.csv`, `variogram.csv` and `kl_profile_enkf.csv`.
CommandResult cmd_assimilate(const ExperimentConfig& cfg, AssimilateMode mode,
                             const std::filesystem::path& out_dir);

/// Monte Carlo check of the random-constant closure against Normal,
/// Lognormal and Uniform k with the prior moments: `mc_compare.csv`,
/// `mc_summary.csv`, `mc_moments.csv`.
CommandResult cmd_verify_mc(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// `fim.csv` at the configured probe, plus `fim_halving.csv` comparing the
/// matrix with the one obtained at half the step.
CommandResult cmd_fim(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

} // namespace damd::cli
