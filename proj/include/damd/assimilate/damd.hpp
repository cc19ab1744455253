#pragma once

#include "damd/assimilate/optimizer.hpp"
#include "damd/core/distribution.hpp"
#include "damd/mdist/solver.hpp"
#include "damd/physics/observations.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace damd::assimilate {

/// Cramer distance between `target` and the model CDF at the measurement
/// location (nearest x node) for coordinates phi.
double damd_loss(const mdist::StatParams& phi, const mdist::ForecastModel& model,
                 const physics::Measurement& m, const core::DiscreteCdf& target);

struct AssimilationStep
{
  std::size_t index;
  physics::Measurement measurement;
  mdist::StatParams before;
  mdist::StatParams after;
  double loss;
  std::size_t iterations;
  std::size_t evaluations;
  bool converged;
};

struct AssimilationTrace
{
  std::vector<AssimilationStep> steps;
  mdist::StatParams final_phi;
  /// Empty unless a step threw; the trace then ends before that step.
  std::string error;
  std::size_t failed_step = 0;

  bool ok() const { return error.empty(); }
};

/// Chooses the coordinates updated by one measurement.
using CoordSelector = std::function<std::vector<Coord>(const physics::Measurement&)>;

/// The same coordinates for every measurement.
CoordSelector fixed_coords(std::vector<Coord> coords);

/// Initial-state pair (mu0, sigma0) for readings with x > v t, inflow pair
/// (mub, sigmab) otherwise.
CoordSelector region_coords(double v);

/// Sequential analysis: for each measurement, the prior slice from phi^(m-1)
/// is conditioned on d_m and phi^(m) minimizes the Cramer distance to that
/// observational CDF, starting from phi^(m-1).
AssimilationTrace damd_assimilate(const physics::MeasurementSet& measurements,
                                  const mdist::StatParams& phi0,
                                  const mdist::ForecastModel& model,
                                  const CoordSelector& coords, const OptimizerConfig& opt);

/// Writes `posterior_params.csv`: step, x, t, d, <coord>_before, <coord>_after
/// for every coordinate set in the initial parameters, loss, iterations,
/// converged.
void write_posterior_params(const std::filesystem::path& path, const AssimilationTrace& trace,
                            const mdist::StatParams& phi0);

} // namespace damd::assimilate
