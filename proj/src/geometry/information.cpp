#include "damd/geometry/information.hpp"

#include "damd/assimilate/optimizer.hpp"
#include "damd/core/csv.hpp"
#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace damd::geometry {

bool FimMatrix::is_symmetric(double tol) const
{
  return (g - g.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double FimMatrix::min_eigenvalue() const
{
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

std::vector<double> log_floored(const core::DiscretePdf& p)
{
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    out[j] = std::log(std::max(p.values()[j], core::density_floor));
  return out;
}

} // namespace

FimMatrix fisher_information(const DensityFamily& family, const std::vector<std::string>& names,
                             const std::vector<double>& point, double h_rel)
{
  if (names.size() != point.size())
    throw ContractError("fisher_information: names and point differ in size");
  if (!(h_rel > 0.0))
    throw ContractError("fisher_information: h_rel must be > 0");
  const std::size_t n = point.size();
  const core::DiscretePdf centre = family(point);
  const auto& u = centre.u_nodes();

  std::vector<std::vector<double>> score(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double h = h_rel * std::max(std::abs(point[c]), 1.0);
    std::vector<std::vector<double>> logs;
    for (double off : {2.0, 1.0, -1.0, -2.0}) {
      auto shifted = point;
      shifted[c] += off * h;
      const core::DiscretePdf f = family(shifted);
      core::require_same_nodes(u, f.u_nodes(), "fisher_information");
      logs.push_back(log_floored(f));
    }
    // five-point central stencil
    score[c].resize(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
      score[c][j] = (-logs[0][j] + 8.0 * logs[1][j] - 8.0 * logs[2][j] + logs[3][j]) / (12.0 * h);
  }

  FimMatrix fim{names, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  std::vector<double> integrand(u.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      for (std::size_t j = 0; j < u.size(); ++j)
        integrand[j] = score[a][j] * score[b][j] * centre.values()[j];
      const double gab = core::trapezoid(u, integrand);
      if (!std::isfinite(gab))
        throw NumericalError("fisher_information: non-finite entry (" + names[a] + ", " +
                             names[b] + ")");
      fim.g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = gab;
      fim.g(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = gab;
    }
  return fim;
}

core::DiscreteCdf slice_at(const mdist::ForecastModel& model, const mdist::StatParams& phi,
                           double x, double t)
{
  if (model.uses_characteristics()) {
    phi.validate();
    return mdist::solve_cdf_characteristics(phi.k_mean, phi, model.cfg, model.deterministic_inputs,
                                            x, t, model.grid.u_nodes());
  }
  const auto& g = model.grid;
  const double pos = std::clamp((x - g.x_min()) / g.dx(), 0.0, static_cast<double>(g.n_x()));
  const auto i0 = std::min(static_cast<std::size_t>(pos), g.n_x() - 1);
  const double w = pos - static_cast<double>(i0);
  const mdist::CdfSolution sol = model.solve(phi, t, g.x_node(i0 + 1));
  const std::size_t last = sol.snapshots.size() - 1;
  const auto a = sol.slice_at_node(last, i0);
  const auto b = sol.slice_at_node(last, i0 + 1);
  std::vector<double> f(a.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    f[j] = (1.0 - w) * a.values()[j] + w * b.values()[j];
  return core::DiscreteCdf(a.u_nodes(), std::move(f));
}

FimMatrix fisher_information(const mdist::ForecastModel& model, const mdist::StatParams& phi,
                             double x, double t, const std::vector<std::string>& coords,
                             double h_rel)
{
  std::vector<double> point;
  for (const auto& name : coords) {
    if (name == "x")
      point.push_back(x);
    else if (name == "t")
      point.push_back(t);
    else
      point.push_back(assimilate::get_coord(phi, assimilate::coord_from_string(name)));
  }
  auto family = [&](const std::vector<double>& p) {
    double xx = x, tt = t;
    mdist::StatParams q = phi;
    for (std::size_t c = 0; c < coords.size(); ++c) {
      if (coords[c] == "x")
        xx = p[c];
      else if (coords[c] == "t")
        tt = p[c];
      else
        assimilate::set_coord(q, assimilate::coord_from_string(coords[c]), p[c]);
    }
    return core::pdf_from_cdf(slice_at(model, q, xx, tt));
  };
  return fisher_information(family, coords, point, h_rel);
}

std::vector<KlPoint> kl_gain_profile(const mdist::ForecastModel& model,
                                     const mdist::StatParams& phi_prior,
                                     const mdist::StatParams& phi_post, double t)
{
  const auto& g = model.grid;
  std::vector<KlPoint> out;
  out.reserve(g.n_x() + 1);
  if (model.uses_characteristics()) {
    for (std::size_t i = 0; i <= g.n_x(); ++i) {
      const double x = g.x_node(i);
      const auto prior = core::pdf_from_cdf(mdist::solve_cdf_characteristics(
          phi_prior.k_mean, phi_prior, model.cfg, model.deterministic_inputs, x, t, g.u_nodes()));
      const auto post = core::pdf_from_cdf(mdist::solve_cdf_characteristics(
          phi_post.k_mean, phi_post, model.cfg, model.deterministic_inputs, x, t, g.u_nodes()));
      out.push_back({x, core::kl_divergence(post, prior)});
    }
    return out;
  }
  const auto prior_sol = model.solve(phi_prior, t, g.x_max());
  const auto post_sol = model.solve(phi_post, t, g.x_max());
  const std::size_t last = prior_sol.snapshots.size() - 1;
  for (std::size_t i = 0; i <= prior_sol.n_x_solved; ++i) {
    const auto prior = core::pdf_from_cdf(prior_sol.slice_at_node(last, i));
    const auto post = core::pdf_from_cdf(post_sol.slice_at_node(post_sol.snapshots.size() - 1, i));
    out.push_back({g.x_node(i), core::kl_divergence(post, prior)});
  }
  return out;
}

void write_fim(const std::filesystem::path& path, const FimMatrix& fim)
{
  core::CsvWriter w(path, {"coord_i", "coord_j", "g_ij"});
  for (std::size_t a = 0; a < fim.coords.size(); ++a)
    for (std::size_t b = 0; b < fim.coords.size(); ++b) {
      w.cell(fim.coords[a]).cell(fim.coords[b]).cell(
          fim.g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      w.end_row();
    }
}

void write_kl_profile(const std::filesystem::path& path, const std::vector<KlPoint>& profile)
{
  core::CsvWriter w(path, {"x", "dkl"});
  for (const auto& p : profile) {
    w.cell(p.x).cell(p.dkl);
    w.end_row();
  }
}

} // namespace damd::geometry
