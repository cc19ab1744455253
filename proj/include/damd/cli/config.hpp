#pragma once

#include "damd/assimilate/optimizer.hpp"
#include "damd/core/grid.hpp"
#include "damd/mdist/solver.hpp"
#include "damd/physics/model.hpp"
#include "damd/physics/observations.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace damd::cli {

struct DomainSection
{
  double L = 1.0;
  double u_min = 0.0;
  double u_max = 1.0;
  std::size_t n_x = 200;
  std::size_t n_u = 128;
  double dt = 0.01;
  double t_end = 0.6;
};

struct TruthSection
{
  physics::FieldKind kind = physics::FieldKind::constant;
  double k_mean = 1.0;
  double k_std = 0.0;
  double k_corr_len = 0.3;
  std::uint64_t seed = 1;
};

struct NoiseSection
{
  double sigma_eps = 0.02;
  std::uint64_t seed = 2;
};

struct MeasurementsSection
{
  /// two_sensor, or grid (every x in xs read at every t in ts).
  std::string schedule = "two_sensor";
  std::vector<double> xs;
  std::vector<double> ts;
};

struct EnkfSection
{
  std::size_t n_ens = 50;
  std::uint64_t seed = 3;
};

struct ClosureSection
{
  mdist::ClosureFamily family = mdist::ClosureFamily::random_constant_k;
  mdist::SignConvention sign_convention = mdist::SignConvention::appendix;
  mdist::SolverRoute route = mdist::SolverRoute::automatic;
  mdist::QuadratureKernel quadrature_kernel = mdist::QuadratureKernel::constant;
  std::size_t quadrature_intervals = 4000;
  bool deterministic_inputs = true;
};

struct OutputSection
{
  std::size_t snapshot_every = 0;
  /// Time of the KL gain profile; negative means domain.t_end.
  double kl_time = -1.0;
};

struct BayesSection
{
  double k_min = 0.0;
  double k_max = 4.0;
  std::size_t n_k = 4001;
};

struct FimSection
{
  double x = 0.5;
  double t = 0.3;
  std::vector<std::string> coords{"k_mean", "k_std"};
  double h_rel = 1e-3;
  bool gaussian_self_test = false;
  double gaussian_mean = 0.5;
  double gaussian_sigma = 0.1;
};

struct VerifyMcSection
{
  std::size_t n_mc = 1000;
  std::uint64_t seed = 4;
  std::vector<double> probe_xs{0.1, 0.8};
  double probe_t = 0.6;
};

/// Experiment configuration read from an INI file. Every key is optional;
/// unknown sections and keys are rejected.
struct ExperimentConfig
{
  DomainSection domain;
  physics::PhysicsConfig physics;
  TruthSection truth;
  NoiseSection noise;
  MeasurementsSection measurements;
  mdist::StatParams prior;
  assimilate::OptimizerConfig optimizer;
  EnkfSection enkf;
  ClosureSection closure;
  OutputSection output;
  BayesSection bayes;
  FimSection fim;
  VerifyMcSection verify_mc;

  /// Throws ValidationError naming the offending key.
  void validate() const;

  /// Seeds derived from one base: truth N, noise N+1, enkf N+2, verify_mc N+3.
  void override_seeds(std::uint64_t base);

  core::Grid2D grid() const;
  mdist::ClosureSpec closure_spec() const;
  std::vector<physics::Location> locations() const;
  /// Physics configuration with the sampled (or constant) truth k field.
  physics::PhysicsConfig truth_physics() const;
  mdist::ForecastModel forecast_model(const physics::PhysicsConfig& physics) const;
  double kl_time() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);
std::string to_ini(const ExperimentConfig& cfg);
void write_resolved_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

} // namespace damd::cli
