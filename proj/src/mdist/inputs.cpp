#include "damd/mdist/inputs.hpp"

#include "damd/core/distribution.hpp"
#include "damd/core/errors.hpp"

#include <algorithm>

namespace damd::mdist {

InputCdfs::InputCdfs(const StatParams& phi, bool deterministic_inputs,
                     const physics::PhysicsConfig& cfg, double u_min, double u_max)
  : deterministic_(deterministic_inputs), cfg_(cfg), u_min_(u_min), u_max_(u_max)
{
  if (!deterministic_inputs) {
    if (!phi.mu0 || !phi.sigma0 || !phi.mub || !phi.sigmab)
      throw ContractError("random inputs need mu0, sigma0, mub and sigmab");
    mu0_ = *phi.mu0;
    sigma0_ = *phi.sigma0;
    mub_ = *phi.mub;
    sigmab_ = *phi.sigmab;
    if (!(sigma0_ > 0.0) || !(sigmab_ > 0.0))
      throw ContractError("random inputs need positive standard deviations");
  }
}

double InputCdfs::truncated_gaussian(double u, double mean, double std) const
{
  if (u <= u_min_)
    return 0.0;
  if (u >= u_max_)
    return 1.0;
  const double lo = core::normal_cdf((u_min_ - mean) / std);
  const double hi = core::normal_cdf((u_max_ - mean) / std);
  const double mass = hi - lo;
  if (!(mass > 0.0))
    // all mass outside the state range: a step at the nearer end
    return mean < u_min_ ? 1.0 : 0.0;
  return std::clamp((core::normal_cdf((u - mean) / std) - lo) / mass, 0.0, 1.0);
}

double InputCdfs::initial(double u) const
{
  if (deterministic_)
    return u >= cfg_.u0 ? 1.0 : 0.0;
  return truncated_gaussian(u, mu0_, sigma0_);
}

double InputCdfs::boundary(double u, double t) const
{
  const double s = physics::forcing_offset(t, cfg_);
  if (deterministic_)
    return u >= cfg_.ub + s ? 1.0 : 0.0;
  return truncated_gaussian(u, mub_ + s, sigmab_);
}

InputCdfs initial_boundary_cdfs(const StatParams& phi, bool deterministic_inputs,
                                const physics::PhysicsConfig& cfg, double u_min, double u_max)
{
  return InputCdfs(phi, deterministic_inputs, cfg, u_min, u_max);
}

} // namespace damd::mdist
