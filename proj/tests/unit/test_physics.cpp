#include "doctest.h"

#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"
#include "damd/physics/model.hpp"
#include "damd/physics/observations.hpp"
#include "damd/physics/random_field.hpp"
#include "damd/physics/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

using namespace damd;
using namespace damd::physics;

namespace {

PhysicsConfig constant_k(double k)
{
  PhysicsConfig cfg;
  cfg.k_field = KField::uniform(k, 0.0, 1.0, 1);
  return cfg;
}

// Explicit upwind for u_t + u_x = -k(x) u on a fine uniform mesh, with the
// reaction applied as an exact decay per step. Returns u at the mesh nodes.
std::vector<double> fine_upwind(const PhysicsConfig& cfg, double t_end, std::size_t n)
{
  const double h = 1.0 / static_cast<double>(n);
  const double cfl = 0.8;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / (cfl * h)));
  const double dt = t_end / static_cast<double>(steps);
  std::vector<double> u(n + 1, cfg.u0), next(n + 1);
  std::vector<double> decay(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    decay[i] = std::exp(-cfg.k_field.at(static_cast<double>(i) * h) * dt);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    next[0] = forcing(t, cfg);
    for (std::size_t i = 1; i <= n; ++i)
      next[i] = (u[i] - dt / h * (u[i] - u[i - 1])) * decay[i];
    u.swap(next);
  }
  return u;
}

} // namespace

TEST_CASE("forcing examples")
{
  PhysicsConfig cfg;
  cfg.ub = 0.5;
  cfg.a = 0.1;
  cfg.nu = 1.0;
  cfg.phase = 1.5 * std::numbers::pi;
  CHECK(forcing(0.0, cfg) == doctest::Approx(0.4));
  CHECK(forcing(0.25, cfg) == doctest::Approx(0.5));
  cfg.a = 0.0;
  for (double t : {0.0, 0.13, 0.7})
    CHECK(forcing(t, cfg) == 0.5);
}

TEST_CASE("analytic_state closed forms")
{
  const auto cfg = constant_k(1.0);
  CHECK(analytic_state(0.5, 0.2, cfg) == doctest::Approx(0.4 * std::exp(-0.2)).epsilon(1e-12));
  CHECK(analytic_state(0.5, 0.2, cfg) == doctest::Approx(0.32749).epsilon(1e-5));
  for (double x : {0.0, 0.3, 0.9})
    CHECK(analytic_state(x, 0.0, cfg) == doctest::Approx(0.4));
  // inflow region: forcing(t - x) decayed over x
  CHECK(analytic_state(0.2, 0.5, cfg) == doctest::Approx(forcing(0.3, cfg) * std::exp(-0.2)));
}

TEST_CASE("analytic_state satisfies the PDE for constant k")
{
  const double k = 1.3, h = 1e-5;
  const auto cfg = constant_k(k);
  for (double x : {0.2, 0.45, 0.8}) {
    for (double t : {0.1, 0.35, 0.6}) {
      if (std::abs(x - t) < 0.05)
        continue;
      const double u = analytic_state(x, t, cfg);
      const double ut = (analytic_state(x, t + h, cfg) - analytic_state(x, t - h, cfg)) / (2 * h);
      const double ux = (analytic_state(x + h, t, cfg) - analytic_state(x - h, t, cfg)) / (2 * h);
      CHECK(std::abs(ut + ux + k * u) <= 1e-4);
    }
  }
}

TEST_CASE("analytic_state matches a fine upwind solve on a white field")
{
  const core::Grid2D grid(0.0, 1.0, 200, 0.0, 1.0, 128, 0.01, 0.6);
  PhysicsConfig cfg;
  cfg.k_field = sample_k_field(FieldKind::white, 1.0, 0.5, 0.0, grid, 7);
  const std::size_t n = 16000;
  for (double t : {0.3, 0.6}) {
    const auto u = fine_upwind(cfg, t, n);
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; i += 40) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      worst = std::max(worst, std::abs(u[i] - analytic_state(x, t, cfg)));
    }
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("analytic_state is bounded by the undecayed inputs")
{
  const core::Grid2D grid(0.0, 1.0, 200, 0.0, 1.0, 128, 0.01, 0.6);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PhysicsConfig cfg;
    cfg.k_field = sample_k_field(FieldKind::exponential, 2.0, 0.3, 0.2, grid, seed);
    const auto& v = cfg.k_field.node_values;
    if (*std::min_element(v.begin(), v.end()) < 0.0)
      continue;
    const double bound = std::max(cfg.u0, cfg.ub + cfg.a);
    for (double x = 0.0; x <= 1.0; x += 0.05)
      for (double t = 0.0; t <= 0.6; t += 0.05) {
        const double u = analytic_state(x, t, cfg);
        CHECK(u >= 0.0);
        CHECK(u <= bound + 1e-12);
      }
  }
}

TEST_CASE("solve_state_fv converges to the analytic state")
{
  const auto cfg = constant_k(1.0);
  double previous = 1.0;
  for (std::size_t n : {100, 400, 1600}) {
    const double h = 1.0 / static_cast<double>(n);
    const core::Grid2D grid(0.0, 1.0, n, 0.0, 1.0, 16, h, 0.5);
    const auto u = solve_state_fv(cfg, grid, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      worst = std::max(worst, std::abs(u[i] - analytic_state(grid.x_node(i), 0.5, cfg)));
    CHECK(worst < previous);
    previous = worst;
  }
  CHECK(previous < 5e-3);
}

TEST_CASE("sample_k_field kinds")
{
  const core::Grid2D grid(0.0, 1.0, 200, 0.0, 1.0, 128, 0.01, 0.6);

  SUBCASE("zero std is the mean everywhere")
  {
    for (auto kind : {FieldKind::constant, FieldKind::white, FieldKind::exponential}) {
      const auto f = sample_k_field(kind, 1.7, 0.0, 0.3, grid, 3);
      for (double v : f.node_values)
        CHECK(v == doctest::Approx(1.7));
    }
  }

  SUBCASE("constant kind shares one draw")
  {
    const auto f = sample_k_field(FieldKind::constant, 2.0, 0.2, 0.0, grid, 3);
    CHECK(f.node_values.size() == 200);
    for (double v : f.node_values)
      CHECK(v == f.node_values.front());
  }

  SUBCASE("reproducible from the seed")
  {
    const auto a = sample_k_field(FieldKind::exponential, 2.0, 0.2, 0.2, grid, 42);
    const auto b = sample_k_field(FieldKind::exponential, 2.0, 0.2, 0.2, grid, 42);
    const auto c = sample_k_field(FieldKind::exponential, 2.0, 0.2, 0.2, grid, 43);
    CHECK(a.node_values == b.node_values);
    CHECK(a.node_values != c.node_values);
  }

  SUBCASE("white moments")
  {
    const core::Grid2D fine(0.0, 1.0, 10000, 0.0, 1.0, 16, 0.01, 0.6);
    const auto f = sample_k_field(FieldKind::white, 1.0, 0.5, 0.0, fine, 5);
    const double n = 10000.0;
    CHECK(std::abs(core::sample_mean(f.node_values) - 1.0) <= 3.0 * 0.5 / std::sqrt(n));
    CHECK(std::abs(core::sample_std(f.node_values) - 0.5) <= 3.0 * 0.5 / std::sqrt(2.0 * n));
  }

  SUBCASE("exponential lag-one autocorrelation")
  {
    const double lambda = 0.3;
    double num = 0.0, den = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto f = sample_k_field(FieldKind::exponential, 0.0, 1.0, lambda, grid, 1000 + seed);
      const auto& v = f.node_values;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        num += v[i] * v[i + 1];
        den += v[i] * v[i];
      }
    }
    CHECK(num / den == doctest::Approx(std::exp(-grid.dx() / lambda)).epsilon(0.05));
  }

  CHECK_THROWS_AS(sample_k_field(FieldKind::white, 1.0, -0.1, 0.0, grid, 1), ContractError);
  CHECK_THROWS_AS(sample_k_field(FieldKind::exponential, 1.0, 0.1, 0.0, grid, 1), ContractError);
}

TEST_CASE("matched-moment marginal families")
{
  const std::size_t n = 20000;
  const double se_mean = 0.2 / std::sqrt(static_cast<double>(n));
  for (auto fam : {MarginalFamily::normal, MarginalFamily::lognormal, MarginalFamily::uniform}) {
    const auto k = sample_constant_k(fam, 2.0, 0.2, n, 17);
    CHECK(std::abs(core::sample_mean(k) - 2.0) <= 3.0 * se_mean);
    CHECK(std::abs(core::sample_std(k) - 0.2) <= 0.01);
  }
  CHECK(marginal_quantile(MarginalFamily::uniform, 2.0, 0.2, 1.0) ==
        doctest::Approx(2.0 + std::sqrt(3.0) * 0.2));
  const double s2 = std::log(1.0 + 0.01);
  CHECK(marginal_quantile(MarginalFamily::lognormal, 2.0, 0.2, 0.5) ==
        doctest::Approx(std::exp(std::log(2.0) - s2 / 2)));
  const auto zero = sample_constant_k(MarginalFamily::lognormal, 2.0, 0.0, 10, 1);
  for (double v : zero)
    CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("observation schedules")
{
  const auto locs = two_sensor_schedule();
  REQUIRE(locs.size() == 20);
  int initial = 0, inflow = 0;
  for (const auto& l : locs)
    (l.x > l.t ? initial : inflow)++;
  CHECK(initial == 10);
  CHECK(inflow == 10);
  for (std::size_t i = 1; i < locs.size(); ++i)
    CHECK((locs[i].t > locs[i - 1].t ||
           (locs[i].t == locs[i - 1].t && locs[i].x > locs[i - 1].x)));
  CHECK(locs.front().t == doctest::Approx(0.15));
  CHECK(locs.back().t == doctest::Approx(0.6));

  const auto grid = schedule_grid({0.8, 0.1}, {0.3, 0.2});
  REQUIRE(grid.size() == 4);
  CHECK(grid[0].t == 0.2);
  CHECK(grid[0].x == 0.1);
}

TEST_CASE("generate_observations")
{
  const auto cfg = constant_k(1.047);
  const auto exact = generate_observations(cfg, two_sensor_schedule(), 0.0, 9);
  for (const auto& m : exact.records())
    CHECK(m.d == analytic_state(m.x, m.t, cfg));

  const auto a = generate_observations(cfg, two_sensor_schedule(), 0.02, 9);
  const auto b = generate_observations(cfg, two_sensor_schedule(), 0.02, 9);
  const auto c = generate_observations(cfg, two_sensor_schedule(), 0.02, 10);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].d == b[i].d);
    differs = differs || a[i].d != c[i].d;
  }
  CHECK(differs);
  CHECK_THROWS_AS(generate_observations(cfg, {{0.5, -0.1}}, 0.02, 1), ContractError);
}

TEST_CASE("measurement and field CSV round trips")
{
  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = constant_k(1.0);
  const auto ms = generate_observations(cfg, two_sensor_schedule(), 0.04, 3);
  write_measurements(dir / "damd_meas.csv", ms);
  const auto back = read_measurements(dir / "damd_meas.csv");
  REQUIRE(back.size() == ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(back[i].x == ms[i].x);
    CHECK(back[i].t == ms[i].t);
    CHECK(back[i].d == ms[i].d);
    CHECK(back[i].sigma_eps == ms[i].sigma_eps);
  }

  const core::Grid2D grid(0.0, 1.0, 50, 0.0, 1.0, 16, 0.01, 0.6);
  const auto f = sample_k_field(FieldKind::white, 1.0, 0.3, 0.0, grid, 4);
  write_k_field(dir / "damd_k.csv", f);
  const auto g = read_k_field(dir / "damd_k.csv");
  REQUIRE(g.node_values.size() == f.node_values.size());
  CHECK(g.cell_width == doctest::Approx(f.cell_width));
  for (std::size_t i = 0; i < f.node_values.size(); ++i)
    CHECK(g.node_values[i] == f.node_values[i]);
  std::filesystem::remove(dir / "damd_meas.csv");
  std::filesystem::remove(dir / "damd_k.csv");
}

TEST_CASE("empirical semivariogram")
{
  const core::Grid2D grid(0.0, 1.0, 200, 0.0, 1.0, 128, 0.01, 0.6);

  std::vector<KField> constant, white, expo;
  for (std::uint64_t s = 0; s < 100; ++s) {
    constant.push_back(sample_k_field(FieldKind::constant, 2.0, 0.2, 0.0, grid, s));
    white.push_back(sample_k_field(FieldKind::white, 2.0, 0.2, 0.0, grid, 500 + s));
    expo.push_back(sample_k_field(FieldKind::exponential, 2.0, 0.2, 0.1, grid, 900 + s));
  }

  for (const auto& b : empirical_semivariogram(constant))
    CHECK(b.gamma == doctest::Approx(0.0));

  const auto gw = empirical_semivariogram(white);
  REQUIRE(!gw.empty());
  for (const auto& b : gw)
    CHECK(b.gamma == doctest::Approx(0.04).epsilon(0.10));

  const auto ge = empirical_semivariogram(expo);
  REQUIRE(!ge.empty());
  for (const auto& b : ge)
    CHECK(b.gamma == doctest::Approx(0.04 * (1.0 - std::exp(-b.lag / 0.1))).epsilon(0.15));

  CHECK_THROWS_AS(empirical_semivariogram({constant.front()}), ContractError);
}
