#include "damd/mdist/solver.hpp"

#include "damd/core/csv.hpp"
#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace damd::mdist {

namespace {

/// Thomas algorithm for a diagonally dominant tridiagonal system. `lower[0]`
/// and `upper[n-1]` are ignored; the solution overwrites `rhs`.
void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs,
                       std::vector<double>& scratch)
{
  const std::size_t n = diag.size();
  scratch.resize(n);
  double beta = diag[0];
  if (beta == 0.0)
    throw NumericalError("solve_cdf_fv: singular tridiagonal system");
  rhs[0] /= beta;
  for (std::size_t j = 1; j < n; ++j) {
    scratch[j] = upper[j - 1] / beta;
    beta = diag[j] - lower[j] * scratch[j];
    if (beta == 0.0)
      throw NumericalError("solve_cdf_fv: singular tridiagonal system");
    rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / beta;
  }
  for (std::size_t j = n - 1; j-- > 0;)
    rhs[j] -= scratch[j + 1] * rhs[j + 1];
}

/// Memory integrals are monotone in nothing in general, so the solver picks
/// the integral belonging to whichever of the three t* candidates is smallest.
struct MemoryTable
{
  std::vector<double> tau_u;        // ln(u_max/U)/<k> per U node (capped)
  std::vector<double> tau_u_half;   // same at U_{j+1/2}
  std::vector<double> i_u, i_u_half;
  std::vector<double> tau_x, i_x;   // x_i / v
};

} // namespace

core::DiscreteCdf CdfSolution::slice_at_node(std::size_t snapshot, std::size_t i) const
{
  if (i > n_x_solved)
    throw ContractError("CdfSolution: x node outside the solved range");
  const std::size_t nu = grid.n_u();
  const auto& vals = snapshots.at(snapshot).values;
  std::vector<double> f(vals.begin() + static_cast<std::ptrdiff_t>(i * (nu + 1)),
                        vals.begin() + static_cast<std::ptrdiff_t>((i + 1) * (nu + 1)));
  return core::DiscreteCdf(grid.u_nodes(), std::move(f));
}

core::DiscreteCdf CdfSolution::slice(std::size_t snapshot, double x) const
{
  return slice_at_node(snapshot, grid.nearest_x(x));
}

CdfSolution solve_cdf_fv(const ClosureSpec& spec, const StatParams& phi,
                         const physics::PhysicsConfig& cfg, bool deterministic_inputs,
                         const core::Grid2D& grid, double t_end, const FvOptions& opts)
{
  phi.validate();
  if (!(t_end >= 0.0))
    throw ContractError("solve_cdf_fv: t_end must be >= 0");
  const InputCdfs inputs(phi, deterministic_inputs, cfg, grid.u_min(), grid.u_max());

  const std::size_t nu = grid.n_u();
  std::size_t nx = grid.n_x();
  if (std::isfinite(opts.x_limit))
    nx = std::min(nx, grid.nearest_x(opts.x_limit) + 1);
  nx = std::max<std::size_t>(nx, 1);
  const std::size_t stride = nu + 1;
  const double dx = grid.dx();
  const double du = grid.du();
  const double u_max = grid.u_max();
  const double v = spec.v;
  const std::vector<double> u_nodes = grid.u_nodes();

  // memory integrals at every candidate t* that does not depend on time
  const double tau_cap = t_end + 1.0;
  auto tau_of_u = [&](double u) {
    if (u > 0.0 && phi.k_mean > 0.0)
      return std::min(std::log(u_max / u) / phi.k_mean, tau_cap);
    return tau_cap;
  };
  MemoryTable mem;
  mem.tau_u.resize(stride);
  mem.i_u.resize(stride);
  mem.tau_u_half.resize(nu);
  mem.i_u_half.resize(nu);
  for (std::size_t j = 0; j < stride; ++j) {
    mem.tau_u[j] = std::max(tau_of_u(u_nodes[j]), 0.0);
    mem.i_u[j] = memory_integral(spec, phi, mem.tau_u[j]);
  }
  for (std::size_t j = 0; j < nu; ++j) {
    mem.tau_u_half[j] = std::max(tau_of_u(0.5 * (u_nodes[j] + u_nodes[j + 1])), 0.0);
    mem.i_u_half[j] = memory_integral(spec, phi, mem.tau_u_half[j]);
  }
  mem.tau_x.resize(nx + 1);
  mem.i_x.resize(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) {
    mem.tau_x[i] = grid.x_node(i) / v;
    mem.i_x[i] = memory_integral(spec, phi, mem.tau_x[i]);
  }

  CdfSolution sol{grid, nx, {}, 0.0, {}};
  std::vector<double> field(stride * (nx + 1));
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j < stride; ++j)
      field[i * stride + j] = i == 0 ? inputs.boundary(u_nodes[j], 0.0) : inputs.initial(u_nodes[j]);
  }
  for (std::size_t i = 0; i <= nx; ++i) {
    field[i * stride] = 0.0;
    field[i * stride + nu] = 1.0;
  }

  // monotonicity is tracked on every time level, stored or not
  double min_diff = 0.0;
  auto track = [&] {
    for (std::size_t i = 0; i <= nx; ++i)
      for (std::size_t j = 0; j < nu; ++j)
        min_diff = std::min(min_diff, field[i * stride + j + 1] - field[i * stride + j]);
  };
  auto record = [&](double t) { sol.snapshots.push_back({t, field}); };
  track();
  record(0.0);

  const std::size_t m = nu - 1;   // interior unknowns j = 1..nu-1
  std::vector<double> lower(m), diag(m), upper(m), rhs(m), scratch(m);
  std::vector<double> q2(stride), d_half(nu);

  double t = 0.0;
  std::size_t step = 0;
  while (t < t_end - 1e-12) {
    const double dt = std::min(grid.dt(), t_end - t);
    t = (t_end - t - dt <= 1e-12) ? t_end : t + dt;
    ++step;
    const double i_t = memory_integral(spec, phi, t);

    for (std::size_t j = 0; j < stride; ++j)
      field[j] = inputs.boundary(u_nodes[j], t);
    field[0] = 0.0;
    field[nu] = 1.0;

    for (std::size_t i = 1; i <= nx; ++i) {
      const double tx = mem.tau_x[i];
      const double ix = mem.i_x[i];
      // choose the memory integral of the smallest t* candidate
      auto pick = [&](double tu, double iu) {
        if (t <= tx && t <= tu)
          return i_t;
        return tx <= tu ? ix : iu;
      };
      for (std::size_t j = 1; j < nu; ++j)
        q2[j] = coefficients_from_integral(spec, phi, u_nodes[j],
                                           pick(mem.tau_u[j], mem.i_u[j])).q2;
      for (std::size_t j = 0; j < nu; ++j) {
        const double uh = 0.5 * (u_nodes[j] + u_nodes[j + 1]);
        d_half[j] = coefficients_from_integral(spec, phi, uh,
                                               pick(mem.tau_u_half[j], mem.i_u_half[j])).d22;
      }

      const double* prev_x = &field[(i - 1) * stride];
      double* cur = &field[i * stride];
      const double base = 1.0 / dt + v / dx;
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t j = r + 1;
        const double up = std::max(q2[j], 0.0) / du;
        const double down = std::min(q2[j], 0.0) / du;
        const double dl = d_half[j - 1] / (du * du);
        const double dr = d_half[j] / (du * du);
        lower[r] = -up - dl;
        upper[r] = down - dr;
        diag[r] = base + up - down + dl + dr;
        rhs[r] = cur[j] / dt + (v / dx) * prev_x[j];
      }
      // Dirichlet rows: F(U_min) = 0 contributes nothing, F(U_max) = 1 moves right
      rhs[m - 1] -= upper[m - 1] * 1.0;
      solve_tridiagonal(lower, diag, upper, rhs, scratch);
      for (std::size_t r = 0; r < m; ++r)
        cur[r + 1] = rhs[r];
    }

    for (double f : field)
      if (!std::isfinite(f))
        throw NumericalError("solve_cdf_fv: non-finite CDF value at t = " + std::to_string(t));
    track();

    const bool last = t >= t_end;
    if (last || (opts.snapshot_every > 0 && step % opts.snapshot_every == 0))
      record(t);
  }

  sol.min_forward_difference = min_diff;
  if (min_diff < -1e-6) {
    std::ostringstream os;
    os << "monotonicity violation: min forward difference " << min_diff;
    sol.warnings.push_back(os.str());
  }
  return sol;
}

core::DiscreteCdf solve_cdf_characteristics(double k, const StatParams& phi,
                                            const physics::PhysicsConfig& cfg,
                                            bool deterministic_inputs, double x, double t,
                                            const std::vector<double>& u_nodes)
{
  if (u_nodes.size() < 2)
    throw ContractError("solve_cdf_characteristics: need at least two U nodes");
  const InputCdfs inputs(phi, deterministic_inputs, cfg, u_nodes.front(), u_nodes.back());
  std::vector<double> f(u_nodes.size());
  const bool from_initial = x > cfg.v * t;
  const double growth = from_initial ? std::exp(k * t) : std::exp(k * x / cfg.v);
  const double t_in = t - x / cfg.v;
  for (std::size_t j = 0; j < u_nodes.size(); ++j) {
    const double arg = u_nodes[j] * growth;
    if (arg >= u_nodes.back())
      f[j] = 1.0;
    else
      f[j] = from_initial ? inputs.initial(arg) : inputs.boundary(arg, t_in);
  }
  f.front() = 0.0;
  f.back() = 1.0;
  return core::DiscreteCdf(u_nodes, std::move(f));
}

std::string to_string(SolverRoute r)
{
  switch (r) {
  case SolverRoute::automatic: return "automatic";
  case SolverRoute::fv: return "fv";
  case SolverRoute::characteristics: return "characteristics";
  }
  return "";
}

SolverRoute solver_route_from_string(const std::string& s)
{
  for (auto r : {SolverRoute::automatic, SolverRoute::fv, SolverRoute::characteristics})
    if (to_string(r) == s)
      return r;
  throw ValidationError("unknown solver route '" + s + "' (automatic | fv | characteristics)");
}

bool ForecastModel::uses_characteristics() const
{
  const bool exact = spec.family == ClosureFamily::exact_deterministic_k;
  switch (route) {
  case SolverRoute::automatic: return exact;
  case SolverRoute::fv: return false;
  case SolverRoute::characteristics:
    if (!exact)
      throw ContractError("characteristics route requires the exact_deterministic_k closure");
    return true;
  }
  return false;
}

core::DiscreteCdf ForecastModel::slice(const StatParams& phi, double x, double t) const
{
  const std::size_t i = grid.nearest_x(x);
  if (uses_characteristics()) {
    phi.validate();
    return solve_cdf_characteristics(phi.k_mean, phi, cfg, deterministic_inputs, grid.x_node(i), t,
                                     grid.u_nodes());
  }
  const CdfSolution sol = solve(phi, t, grid.x_node(i));
  return sol.slice_at_node(sol.snapshots.size() - 1, i);
}

CdfSolution ForecastModel::solve(const StatParams& phi, double t, double x_limit,
                                 std::size_t snapshot_every) const
{
  FvOptions opts;
  opts.x_limit = x_limit;
  opts.snapshot_every = snapshot_every;
  return solve_cdf_fv(spec, phi, cfg, deterministic_inputs, grid, t, opts);
}

CdfSolution ForecastModel::profile(const StatParams& phi, double t,
                                   std::size_t snapshot_every) const
{
  if (!uses_characteristics())
    return solve(phi, t, grid.x_max(), snapshot_every);
  phi.validate();
  std::vector<double> times{0.0};
  if (snapshot_every > 0) {
    const double step = grid.dt() * static_cast<double>(snapshot_every);
    for (std::size_t n = 1; static_cast<double>(n) * step < t - 1e-12; ++n)
      times.push_back(static_cast<double>(n) * step);
  }
  if (t > 0.0)
    times.push_back(t);
  CdfSolution sol{grid, grid.n_x(), {}, 0.0, {}};
  const auto u = grid.u_nodes();
  for (double tt : times) {
    CdfSnapshot snap{tt, {}};
    snap.values.reserve((grid.n_x() + 1) * u.size());
    for (std::size_t i = 0; i <= grid.n_x(); ++i) {
      const auto c = solve_cdf_characteristics(phi.k_mean, phi, cfg, deterministic_inputs,
                                               grid.x_node(i), tt, u);
      snap.values.insert(snap.values.end(), c.values().begin(), c.values().end());
    }
    sol.snapshots.push_back(std::move(snap));
  }
  return sol;
}

void write_cdf_profile(const std::filesystem::path& path, const CdfSolution& sol)
{
  core::CsvWriter w(path, {"t", "x", "U", "F"});
  const auto u = sol.grid.u_nodes();
  for (std::size_t s = 0; s < sol.snapshots.size(); ++s)
    for (std::size_t i = 0; i <= sol.n_x_solved; ++i)
      for (std::size_t j = 0; j < u.size(); ++j) {
        w.cell(sol.snapshots[s].t).cell(sol.grid.x_node(i)).cell(u[j]).cell(sol.at(s, i, j));
        w.end_row();
      }
}

} // namespace damd::mdist
