#pragma once

#include "damd/core/distribution.hpp"
#include "damd/physics/model.hpp"
#include "damd/physics/observations.hpp"

#include <filesystem>
#include <vector>

namespace damd::assimilate {

struct ObservationalPosterior
{
  core::DiscretePdf pdf;
  core::DiscreteCdf cdf;
};

/// Single-datum Bayes update of a model CDF: density proportional to
/// N(d; U, sigma_eps^2) times the prior density, normalized by trapezoid.
/// Throws DegenerateInput when the normalizer is below 1e-300.
ObservationalPosterior observational_posterior(const core::DiscreteCdf& prior, double d,
                                               double sigma_eps);

struct InputsPosterior
{
  core::GaussianDist initial;
  core::GaussianDist boundary;
};

/// Conjugate update of Gaussian initial and inflow states for a known constant
/// k. A reading with x > v t observes u0 e^{-k t}; otherwise it observes
/// (ub + s(t - x/v)) e^{-k x/v}. Both maps are affine, so the posteriors stay
/// Gaussian.
InputsPosterior exact_bayes_inputs(const physics::MeasurementSet& measurements,
                                   const core::GaussianDist& prior0,
                                   const core::GaussianDist& priorb, double k,
                                   const physics::PhysicsConfig& cfg);

/// Posterior density of a spatially constant k on `k_nodes`: the product of
/// Gaussian likelihoods of every reading under the analytic solution, times
/// the Gaussian prior. Deterministic inputs u0, ub are taken from `cfg`.
core::DiscretePdf grid_bayes_k(const physics::MeasurementSet& measurements,
                               const core::GaussianDist& prior,
                               const physics::PhysicsConfig& cfg,
                               const std::vector<double>& k_nodes);

/// Writes `bayes_posterior.csv` (K, density).
void write_bayes_posterior(const std::filesystem::path& path, const core::DiscretePdf& pdf);

} // namespace damd::assimilate
