#include "damd/assimilate/optimizer.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace damd::assimilate {

void OptimizerConfig::validate() const
{
  if (!(tol >= 0.0))
    throw ContractError("OptimizerConfig: tol must be >= 0");
  if (max_iters == 0)
    throw ContractError("OptimizerConfig: max_iters must be >= 1");
  if (!(initial_simplex_scale > 0.0))
    throw ContractError("OptimizerConfig: initial_simplex_scale must be > 0");
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& steps,
                             const OptimizerConfig& cfg)
{
  cfg.validate();
  const std::size_t n = x0.size();
  if (steps.size() != n)
    throw ContractError("nelder_mead: steps and x0 differ in size");
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  if (n == 0)
    return {x0, eval(x0), 0, evals, true};

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i)
    pts[i + 1][i] += steps[i];
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      p2[i] = pts[order[i]];
      v2[i] = vals[order[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double coef) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = c[i] + coef * (w[i] - c[i]);
    return out;
  };

  std::size_t iter = 0;
  bool converged = false;
  sort_simplex();
  while (true) {
    if (vals[n] - vals[0] < cfg.tol) {
      converged = true;
      break;
    }
    if (iter >= cfg.max_iters)
      break;
    ++iter;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        centroid[j] += pts[i][j] / static_cast<double>(n);

    const auto xr = along(centroid, pts[n], -1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const auto xe = along(centroid, pts[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const bool outside = fr < vals[n];
      const auto xc = outside ? along(centroid, xr, 0.5) : along(centroid, pts[n], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          pts[i] = along(pts[0], pts[i], 0.5);
          vals[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  return {pts[0], vals[0], iter, evals, converged};
}

std::string to_string(Coord c)
{
  switch (c) {
  case Coord::k_mean: return "k_mean";
  case Coord::k_std: return "k_std";
  case Coord::k_corr_len: return "k_corr_len";
  case Coord::mu0: return "mu0";
  case Coord::sigma0: return "sigma0";
  case Coord::mub: return "mub";
  case Coord::sigmab: return "sigmab";
  }
  return "";
}

Coord coord_from_string(const std::string& s)
{
  for (auto c : {Coord::k_mean, Coord::k_std, Coord::k_corr_len, Coord::mu0, Coord::sigma0,
                 Coord::mub, Coord::sigmab})
    if (to_string(c) == s)
      return c;
  throw ValidationError("unknown manifold coordinate '" + s + "'");
}

bool is_log_coord(Coord c)
{
  return c == Coord::k_std || c == Coord::k_corr_len || c == Coord::sigma0 || c == Coord::sigmab;
}

double get_coord(const mdist::StatParams& phi, Coord c)
{
  auto req = [&](const std::optional<double>& v) {
    if (!v)
      throw ContractError("coordinate '" + to_string(c) + "' is not set");
    return *v;
  };
  switch (c) {
  case Coord::k_mean: return phi.k_mean;
  case Coord::k_std: return phi.k_std;
  case Coord::k_corr_len: return req(phi.k_corr_len);
  case Coord::mu0: return req(phi.mu0);
  case Coord::sigma0: return req(phi.sigma0);
  case Coord::mub: return req(phi.mub);
  case Coord::sigmab: return req(phi.sigmab);
  }
  return 0.0;
}

void set_coord(mdist::StatParams& phi, Coord c, double value)
{
  switch (c) {
  case Coord::k_mean: phi.k_mean = value; break;
  case Coord::k_std: phi.k_std = value; break;
  case Coord::k_corr_len: phi.k_corr_len = value; break;
  case Coord::mu0: phi.mu0 = value; break;
  case Coord::sigma0: phi.sigma0 = value; break;
  case Coord::mub: phi.mub = value; break;
  case Coord::sigmab: phi.sigmab = value; break;
  }
}

ParamsResult minimize_nelder_mead(const std::function<double(const mdist::StatParams&)>& objective,
                                  const mdist::StatParams& phi0, const std::vector<Coord>& coords,
                                  const OptimizerConfig& cfg)
{
  std::vector<double> x0(coords.size()), steps(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double c = get_coord(phi0, coords[i]);
    if (is_log_coord(coords[i])) {
      x0[i] = std::log(std::max(c, 1e-12));
      steps[i] = cfg.initial_simplex_scale;
    } else {
      x0[i] = c;
      steps[i] = cfg.initial_simplex_scale * (c != 0.0 ? std::abs(c) : 1.0);
    }
  }
  auto to_phi = [&](const std::vector<double>& x) {
    mdist::StatParams phi = phi0;
    for (std::size_t i = 0; i < coords.size(); ++i)
      set_coord(phi, coords[i], is_log_coord(coords[i]) ? std::exp(x[i]) : x[i]);
    return phi;
  };
  auto f = [&](const std::vector<double>& x) { return objective(to_phi(x)); };
  const NelderMeadResult r = nelder_mead(f, x0, steps, cfg);
  return {to_phi(r.x), r.value, r.iterations, r.evaluations, r.converged};
}

} // namespace damd::assimilate
