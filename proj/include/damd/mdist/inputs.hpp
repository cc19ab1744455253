#pragma once

#include "damd/mdist/closure.hpp"
#include "damd/physics/model.hpp"

namespace damd::mdist {

/// Initial CDF F0(U) and inflow CDF Fb(U; t) of the CDF equation.
///
/// Deterministic inputs give Heaviside steps H(U - u0) and H(U - ub - s(t))
/// (value 1 at and above the jump). Random inputs give Gaussian CDFs with
/// (mu0, sigma0) and (mub + s(t), sigmab), truncated to [u_min, u_max].
class InputCdfs
{
public:
  InputCdfs(const StatParams& phi, bool deterministic_inputs, const physics::PhysicsConfig& cfg,
            double u_min, double u_max);

  double initial(double u) const;
  double boundary(double u, double t) const;
  bool deterministic() const { return deterministic_; }

private:
  double truncated_gaussian(double u, double mean, double std) const;

  bool deterministic_;
  physics::PhysicsConfig cfg_;
  double u_min_, u_max_;
  double mu0_ = 0.0, sigma0_ = 1.0, mub_ = 0.0, sigmab_ = 1.0;
};

InputCdfs initial_boundary_cdfs(const StatParams& phi, bool deterministic_inputs,
                                const physics::PhysicsConfig& cfg, double u_min, double u_max);

} // namespace damd::mdist
