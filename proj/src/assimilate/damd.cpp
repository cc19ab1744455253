#include "damd/assimilate/damd.hpp"

#include "damd/assimilate/bayes.hpp"
#include "damd/core/csv.hpp"
#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"

namespace damd::assimilate {

double damd_loss(const mdist::StatParams& phi, const mdist::ForecastModel& model,
                 const physics::Measurement& m, const core::DiscreteCdf& target)
{
  return core::cramer_distance(target, model.slice(phi, m.x, m.t));
}

CoordSelector fixed_coords(std::vector<Coord> coords)
{
  return [coords = std::move(coords)](const physics::Measurement&) { return coords; };
}

CoordSelector region_coords(double v)
{
  return [v](const physics::Measurement& m) {
    if (m.x > v * m.t)
      return std::vector<Coord>{Coord::mu0, Coord::sigma0};
    return std::vector<Coord>{Coord::mub, Coord::sigmab};
  };
}

AssimilationTrace damd_assimilate(const physics::MeasurementSet& measurements,
                                  const mdist::StatParams& phi0,
                                  const mdist::ForecastModel& model,
                                  const CoordSelector& coords, const OptimizerConfig& opt)
{
  phi0.validate();
  opt.validate();
  AssimilationTrace trace;
  trace.final_phi = phi0;
  for (std::size_t idx = 0; idx < measurements.size(); ++idx) {
    const auto& m = measurements[idx];
    try {
      const mdist::StatParams before = trace.final_phi;
      const core::DiscreteCdf prior = model.slice(before, m.x, m.t);
      const core::DiscreteCdf target = observational_posterior(prior, m.d, m.sigma_eps).cdf;
      auto objective = [&](const mdist::StatParams& phi) {
        return damd_loss(phi, model, m, target);
      };
      const ParamsResult r = minimize_nelder_mead(objective, before, coords(m), opt);
      r.phi.validate();
      trace.steps.push_back({idx, m, before, r.phi, r.loss, r.iterations, r.evaluations, r.converged});
      trace.final_phi = r.phi;
    } catch (const std::exception& e) {
      trace.error = e.what();
      trace.failed_step = idx;
      break;
    }
  }
  return trace;
}

void write_posterior_params(const std::filesystem::path& path, const AssimilationTrace& trace,
                            const mdist::StatParams& phi0)
{
  std::vector<Coord> present;
  for (auto c : {Coord::k_mean, Coord::k_std, Coord::k_corr_len, Coord::mu0, Coord::sigma0,
                 Coord::mub, Coord::sigmab}) {
    try {
      get_coord(phi0, c);
      present.push_back(c);
    } catch (const ContractError&) {
    }
  }
  std::vector<std::string> header{"step", "x", "t", "d"};
  for (auto c : present) {
    header.push_back(to_string(c) + "_before");
    header.push_back(to_string(c) + "_after");
  }
  for (const char* h : {"loss", "iterations", "converged"})
    header.emplace_back(h);
  core::CsvWriter w(path, header);
  for (const auto& s : trace.steps) {
    w.cell(s.index).cell(s.measurement.x).cell(s.measurement.t).cell(s.measurement.d);
    for (auto c : present)
      w.cell(get_coord(s.before, c)).cell(get_coord(s.after, c));
    w.cell(s.loss).cell(s.iterations).cell(s.converged ? 1 : 0);
    w.end_row();
  }
}

} // namespace damd::assimilate
