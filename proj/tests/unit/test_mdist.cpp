#include "doctest.h"

#include "damd/core/csv.hpp"
#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"
#include "damd/core/rng.hpp"
#include "damd/mdist/closure.hpp"
#include "damd/mdist/inputs.hpp"
#include "damd/mdist/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace damd;
using namespace damd::mdist;

namespace {

const core::Grid2D paper_grid(0.0, 1.0, 200, 0.0, 1.0, 128, 0.01, 0.6);

// Composite Simpson rule for int_0^T e^{k tau} C(v tau) d tau.
template <class Cov>
double simpson_memory(double k, double T, Cov cov, double v = 1.0, int n = 20000)
{
  if (T <= 0.0)
    return 0.0;
  const double h = T / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tau = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::exp(k * tau) * cov(v * tau);
  }
  return acc * h / 3.0;
}

StatParams random_inputs(double k)
{
  StatParams phi;
  phi.k_mean = k;
  phi.mu0 = 0.4;
  phi.sigma0 = 0.1;
  phi.mub = 0.5;
  phi.sigmab = 0.1;
  return phi;
}

physics::PhysicsConfig physics_with_k(double k)
{
  physics::PhysicsConfig cfg;
  cfg.k_field = physics::KField::uniform(k, 0.0, 1.0, 1);
  return cfg;
}

double sup_diff(const core::DiscreteCdf& a, const core::DiscreteCdf& b)
{
  return core::sup_distance(a, b);
}

void check_cdf_invariants(const CdfSolution& sol)
{
  const std::size_t nu = sol.grid.n_u();
  for (std::size_t s = 0; s < sol.snapshots.size(); ++s)
    for (std::size_t i = 0; i <= sol.n_x_solved; ++i) {
      CHECK(sol.at(s, i, 0) == 0.0);
      CHECK(sol.at(s, i, nu) == 1.0);
    }
  CHECK(sol.min_forward_difference >= -1e-8);
  CHECK(sol.warnings.empty());
}

} // namespace

TEST_CASE("t_star examples")
{
  CHECK(t_star(0.5, 0.1, 0.6, 2.0, 1.0) == doctest::Approx(0.1));
  CHECK(t_star(1.0, 0.5, 0.6, 2.0, 1.0) == 0.0);
  CHECK(t_star(0.9, 1.0, 0.05, 1.0, 1.0) == doctest::Approx(0.05));
  CHECK(t_star(0.3, 2.0, 3.0, 2.0, 1.0) == doctest::Approx(std::log(1.0 / 0.3) / 2.0));
  CHECK(t_star(0.0, 0.4, 0.6, 2.0, 1.0) == doctest::Approx(0.4));
  CHECK(t_star(-0.1, 0.4, 0.3, 2.0, 1.0) == doctest::Approx(0.3));
}

TEST_CASE("closure coefficient examples")
{
  StatParams phi;
  phi.k_mean = 4.0;
  phi.k_std = 1.0;
  ClosureSpec spec;
  spec.family = ClosureFamily::white_noise_k;
  const auto c = closure_coefficients(spec, phi, 0.5, 0.3, 0.5, 1.0);
  CHECK(c.q1 == 1.0);
  CHECK(c.d22 == doctest::Approx(0.125));
  CHECK(c.q2 == doctest::Approx(-1.75));

  spec.sign_convention = SignConvention::main_text;
  const auto m = closure_coefficients(spec, phi, 0.5, 0.3, 0.5, 1.0);
  CHECK(m.q2 == doctest::Approx(-2.25));
  CHECK(m.d22 == doctest::Approx(0.125));

  StatParams e;
  e.k_mean = 2.0;
  e.k_std = 0.2;
  e.k_corr_len = 0.2;
  ClosureSpec es;
  es.family = ClosureFamily::exponential_k;
  const double I = memory_integral(es, e, 0.1);
  CHECK(I == doctest::Approx(0.04 / -3.0 * (std::exp(-0.3) - 1.0)).epsilon(1e-12));
  CHECK(I == doctest::Approx(0.003456).epsilon(1e-3));
  CHECK(coefficients_from_integral(es, e, 0.7, I).d22 == doctest::Approx(0.49 * I));

  // alpha = 0 limit
  e.k_corr_len = 0.5;
  CHECK(memory_integral(es, e, 0.3) == doctest::Approx(0.04 * 0.3).epsilon(1e-12));
  e.k_corr_len = 0.5 * (1.0 + 1e-12);
  CHECK(std::isfinite(memory_integral(es, e, 0.3)));
}

TEST_CASE("closed-form memory integrals match an independent quadrature")
{
  const double sigma = 0.2;
  for (double k : {0.5, 2.0, 4.0})
    for (double T : {0.0, 0.05, 0.3, 0.6}) {
      StatParams phi;
      phi.k_mean = k;
      phi.k_std = sigma;
      ClosureSpec spec;
      spec.family = ClosureFamily::random_constant_k;
      const double ref_c = simpson_memory(k, T, [&](double) { return sigma * sigma; });
      CHECK(memory_integral(spec, phi, T) == doctest::Approx(ref_c).epsilon(1e-9));

      for (double lambda : {0.05, 0.2, 1.0}) {
        phi.k_corr_len = lambda;
        spec.family = ClosureFamily::exponential_k;
        const double ref_e = simpson_memory(
            k, T, [&](double h) { return sigma * sigma * std::exp(-std::abs(h) / lambda); });
        CHECK(memory_integral(spec, phi, T) == doctest::Approx(ref_e).epsilon(1e-9));
      }
    }
}

TEST_CASE("general quadrature reproduces the closed forms on a probe lattice")
{
  StatParams phi;
  phi.k_mean = 2.0;
  phi.k_std = 0.2;
  phi.k_corr_len = 0.2;

  struct Pair
  {
    ClosureFamily closed;
    QuadratureKernel kernel;
  };
  const Pair pairs[] = {{ClosureFamily::random_constant_k, QuadratureKernel::constant},
                        {ClosureFamily::white_noise_k, QuadratureKernel::white},
                        {ClosureFamily::exponential_k, QuadratureKernel::exponential}};

  const auto xs = core::linspace(0.05, 1.0, 10);
  const auto ts = core::linspace(0.05, 0.6, 10);
  const auto us = core::linspace(0.05, 1.0, 10);
  for (const auto& p : pairs) {
    ClosureSpec closed;
    closed.family = p.closed;
    ClosureSpec quad;
    quad.family = ClosureFamily::general_quadrature;
    quad.kernel = p.kernel;
    double worst = 0.0;
    for (double x : xs)
      for (double t : ts)
        for (double u : us) {
          const auto a = closure_coefficients(closed, phi, x, t, u, 1.0);
          const auto b = closure_coefficients(quad, phi, x, t, u, 1.0);
          worst = std::max({worst, std::abs(a.q2 - b.q2), std::abs(a.d22 - b.d22)});
        }
    CHECK(worst <= 1e-6);
  }

  ClosureSpec custom;
  custom.family = ClosureFamily::general_quadrature;
  custom.covariance = CovarianceModel::exponential(0.04, 0.2);
  ClosureSpec closed;
  closed.family = ClosureFamily::exponential_k;
  for (double t : ts)
    CHECK(memory_integral(custom, phi, t) ==
          doctest::Approx(memory_integral(closed, phi, t)).epsilon(1e-6));
}

TEST_CASE("zero variance reduces every closure to the deterministic coefficients")
{
  StatParams phi;
  phi.k_mean = 1.7;
  phi.k_std = 0.0;
  phi.k_corr_len = 0.3;
  ClosureSpec exact;
  exact.family = ClosureFamily::exact_deterministic_k;
  for (auto fam : {ClosureFamily::random_constant_k, ClosureFamily::white_noise_k,
                   ClosureFamily::exponential_k, ClosureFamily::general_quadrature})
    for (auto sign : {SignConvention::appendix, SignConvention::main_text}) {
      ClosureSpec spec;
      spec.family = fam;
      spec.sign_convention = sign;
      spec.kernel = QuadratureKernel::exponential;
      for (double x : {0.1, 0.5, 0.9})
        for (double t : {0.1, 0.6})
          for (double u : {0.1, 0.5, 0.99}) {
            const auto a = closure_coefficients(exact, phi, x, t, u, 1.0);
            const auto b = closure_coefficients(spec, phi, x, t, u, 1.0);
            CHECK(a.q1 == b.q1);
            CHECK(a.q2 == b.q2);
            CHECK(a.d22 == b.d22);
            CHECK(b.q2 == -1.7 * u);
            CHECK(b.d22 == 0.0);
          }
    }
}

TEST_CASE("diffusion is never negative")
{
  core::Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    StatParams phi;
    phi.k_mean = 4.0 * rng.uniform() - 1.0;
    phi.k_std = rng.uniform();
    phi.k_corr_len = 0.01 + rng.uniform();
    for (auto fam : {ClosureFamily::random_constant_k, ClosureFamily::white_noise_k,
                     ClosureFamily::exponential_k}) {
      ClosureSpec spec;
      spec.family = fam;
      spec.sign_convention = i % 2 ? SignConvention::main_text : SignConvention::appendix;
      const auto c = closure_coefficients(spec, phi, rng.uniform(), rng.uniform(),
                                          rng.uniform(), 1.0);
      CHECK(c.d22 >= 0.0);
      CHECK(c.q1 == 1.0);
    }
  }
}

TEST_CASE("random-constant closure ignores the sign convention")
{
  StatParams phi;
  phi.k_mean = 2.0;
  phi.k_std = 0.2;
  ClosureSpec a, b;
  a.family = b.family = ClosureFamily::random_constant_k;
  b.sign_convention = SignConvention::main_text;
  const auto ca = closure_coefficients(a, phi, 0.5, 0.3, 0.4, 1.0);
  const auto cb = closure_coefficients(b, phi, 0.5, 0.3, 0.4, 1.0);
  CHECK(ca.q2 == cb.q2);
  CHECK(ca.d22 == cb.d22);
  CHECK(ca.q2 > -0.8);
}

TEST_CASE("input CDFs")
{
  const auto cfg = physics_with_k(1.0);
  StatParams det;
  const auto h = initial_boundary_cdfs(det, true, cfg, 0.0, 1.0);
  CHECK(h.initial(0.3999) == 0.0);
  CHECK(h.initial(0.4) == 1.0);
  CHECK(h.boundary(0.4999, 0.25) == 0.0);
  CHECK(h.boundary(0.5, 0.25) == 1.0);

  auto phi = random_inputs(1.0);
  const auto g = initial_boundary_cdfs(phi, false, cfg, 0.0, 1.0);
  // truncation at U = 0 removes Phi(-4) of mass below the median
  CHECK(g.initial(0.4) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(g.initial(0.0) == 0.0);
  CHECK(g.initial(1.0) == 1.0);
  CHECK(g.boundary(0.5, 0.25) == doctest::Approx(0.5).epsilon(1e-9));

  phi.sigma0 = 1e-6;
  const auto narrow = initial_boundary_cdfs(phi, false, cfg, 0.0, 1.0);
  for (double u : {0.1, 0.39, 0.41, 0.8})
    CHECK(narrow.initial(u) == doctest::Approx(h.initial(u)));

  StatParams missing;
  CHECK_THROWS_AS(initial_boundary_cdfs(missing, false, cfg, 0.0, 1.0), ContractError);
}

TEST_CASE("characteristics solution")
{
  const auto cfg = physics_with_k(1.0);
  const auto phi = random_inputs(1.0);
  const auto u = paper_grid.u_nodes();
  const auto in = initial_boundary_cdfs(phi, false, cfg, 0.0, 1.0);

  const auto f0 = solve_cdf_characteristics(1.0, phi, cfg, false, 0.5, 0.0, u);
  for (std::size_t j = 0; j < u.size(); ++j)
    CHECK(f0.values()[j] == doctest::Approx(in.initial(u[j])));

  const auto shifted = solve_cdf_characteristics(0.0, phi, cfg, false, 0.2, 0.5, u);
  for (std::size_t j = 1; j + 1 < u.size(); ++j)
    CHECK(shifted.values()[j] == doctest::Approx(in.boundary(u[j], 0.3)));

  // Median at (0.6, 0.3): MC through the exact solution with Gaussian u0.
  const auto fine = core::linspace(0.0, 1.0, 100001);
  const auto f = solve_cdf_characteristics(1.0, phi, cfg, false, 0.6, 0.3, fine);
  core::Rng rng(77);
  std::vector<double> states(100000);
  for (double& s : states) {
    auto c = cfg;
    c.u0 = rng.normal(0.4, 0.1);
    s = physics::analytic_state(0.6, 0.3, c);
  }
  std::nth_element(states.begin(), states.begin() + 50000, states.end());
  CHECK(f.quantile(0.5) == doctest::Approx(states[50000]).epsilon(2.5e-3));
  CHECK(f.quantile(0.5) == doctest::Approx(0.29633).epsilon(1e-4));
}

TEST_CASE("finite volumes with zero variance equal the deterministic solve")
{
  const auto cfg = physics_with_k(2.0);
  StatParams phi;
  phi.k_mean = 2.0;
  phi.k_std = 0.0;
  ClosureSpec exact, rc;
  exact.family = ClosureFamily::exact_deterministic_k;
  rc.family = ClosureFamily::random_constant_k;
  const core::Grid2D g(0.0, 1.0, 50, 0.0, 1.0, 64, 0.02, 0.4);
  const auto a = solve_cdf_fv(exact, phi, cfg, true, g, 0.4, {5});
  const auto b = solve_cdf_fv(rc, phi, cfg, true, g, 0.4, {5});
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s)
    CHECK(a.snapshots[s].values == b.snapshots[s].values);
}

TEST_CASE("finite volumes keep boundary and monotonicity invariants")
{
  StatParams phi;
  phi.k_mean = 2.0;
  phi.k_std = 0.2;
  phi.k_corr_len = 0.2;
  const auto cfg = physics_with_k(2.0);
  for (auto fam : {ClosureFamily::random_constant_k, ClosureFamily::white_noise_k,
                   ClosureFamily::exponential_k}) {
    ClosureSpec spec;
    spec.family = fam;
    check_cdf_invariants(solve_cdf_fv(spec, phi, cfg, true, paper_grid, 0.6, {10}));
  }
  ClosureSpec exact;
  exact.family = ClosureFamily::exact_deterministic_k;
  check_cdf_invariants(
      solve_cdf_fv(exact, random_inputs(1.0), physics_with_k(1.0), false, paper_grid, 0.6, {10}));
}

TEST_CASE("finite volumes converge to characteristics under refinement")
{
  const auto cfg = physics_with_k(1.0);
  const auto phi = random_inputs(1.0);
  ClosureSpec exact;
  exact.family = ClosureFamily::exact_deterministic_k;

  auto error_at = [&](std::size_t nx, std::size_t nu, double dt) {
    const core::Grid2D g(0.0, 1.0, nx, 0.0, 1.0, nu, dt, 0.3);
    const auto sol = solve_cdf_fv(exact, phi, cfg, false, g, 0.3);
    double worst = 0.0;
    for (double x : {0.1, 0.6, 0.9}) {
      const auto ref = solve_cdf_characteristics(1.0, phi, cfg, false, x, 0.3, g.u_nodes());
      worst = std::max(worst, sup_diff(sol.slice(sol.snapshots.size() - 1, x), ref));
    }
    return worst;
  };
  const double coarse = error_at(100, 64, 0.02);
  const double mid = error_at(200, 128, 0.01);
  const double fine = error_at(400, 256, 0.005);
  CHECK(mid < coarse);
  CHECK(fine < mid);
  CHECK(fine < 0.6 * coarse);
}

TEST_CASE("exact-case Cramer distance at (0.5, 0.2) on the paper grid")
{
  const auto cfg = physics_with_k(1.0);
  const auto phi = random_inputs(1.0);
  ClosureSpec exact;
  exact.family = ClosureFamily::exact_deterministic_k;
  const auto sol = solve_cdf_fv(exact, phi, cfg, false, paper_grid, 0.2);
  const auto fv = sol.slice(sol.snapshots.size() - 1, 0.5);
  const auto ref = solve_cdf_characteristics(1.0, phi, cfg, false, 0.5, 0.2, paper_grid.u_nodes());
  CHECK(core::cramer_distance(fv, ref) <= 0.02);
}

TEST_CASE("median transport in the exact case")
{
  const double k = 1.0;
  const auto cfg = physics_with_k(k);
  const auto phi = random_inputs(k);
  ForecastModel model{{ClosureFamily::exact_deterministic_k}, cfg, false, paper_grid,
                      SolverRoute::fv};
  ForecastModel chars = model;
  chars.route = SolverRoute::characteristics;
  for (double t : {0.1, 0.2, 0.3}) {
    const double expected = 0.4 * std::exp(-k * t);
    CHECK(std::abs(chars.slice(phi, 0.8, t).quantile(0.5) - expected) <= paper_grid.du());
    CHECK(std::abs(model.slice(phi, 0.8, t).quantile(0.5) - expected) <= paper_grid.du());
  }
}

TEST_CASE("forecast model routes")
{
  const auto cfg = physics_with_k(1.0);
  const auto phi = random_inputs(1.0);
  ForecastModel model{{ClosureFamily::exact_deterministic_k}, cfg, false, paper_grid,
                      SolverRoute::automatic};
  CHECK(model.uses_characteristics());
  const auto chars = model.slice(phi, 0.5, 0.2);
  const auto ref = solve_cdf_characteristics(1.0, phi, cfg, false, 0.5, 0.2, paper_grid.u_nodes());
  CHECK(chars.values() == ref.values());

  model.route = SolverRoute::fv;
  CHECK(!model.uses_characteristics());
  const auto sol = model.solve(phi, 0.2, 0.5);
  CHECK(model.slice(phi, 0.5, 0.2).values() == sol.slice(sol.snapshots.size() - 1, 0.5).values());

  ForecastModel bad{{ClosureFamily::random_constant_k}, cfg, true, paper_grid,
                    SolverRoute::characteristics};
  StatParams p;
  p.k_mean = 2.0;
  p.k_std = 0.2;
  CHECK_THROWS_AS(bad.slice(p, 0.5, 0.2), ContractError);

  const auto profile = model.profile(phi, 0.2, 5);
  model.route = SolverRoute::characteristics;
  const auto cprofile = model.profile(phi, 0.2, 5);
  REQUIRE(profile.snapshots.size() == cprofile.snapshots.size());
  for (std::size_t s = 0; s < profile.snapshots.size(); ++s)
    CHECK(profile.snapshots[s].t == doctest::Approx(cprofile.snapshots[s].t));
}

TEST_CASE("cdf profile CSV layout")
{
  const core::Grid2D g(0.0, 1.0, 4, 0.0, 1.0, 4, 0.1, 0.2);
  StatParams phi;
  phi.k_mean = 1.0;
  ClosureSpec spec;
  spec.family = ClosureFamily::exact_deterministic_k;
  const auto sol = solve_cdf_fv(spec, phi, physics_with_k(1.0), true, g, 0.2, {1});
  const auto path = std::filesystem::temp_directory_path() / "damd_cdf_profile.csv";
  write_cdf_profile(path, sol);
  const auto t = core::read_csv(path);
  CHECK(t.header == std::vector<std::string>{"t", "x", "U", "F"});
  CHECK(t.rows.size() == sol.snapshots.size() * 5 * 5);
  std::filesystem::remove(path);
}
