#include "damd/physics/observations.hpp"

#include "damd/core/csv.hpp"
#include "damd/core/errors.hpp"
#include "damd/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace damd::physics {

namespace {

bool assimilation_less(double t1, double x1, double t2, double x2)
{
  if (t1 != t2)
    return t1 < t2;
  return x1 < x2;
}

} // namespace

MeasurementSet::MeasurementSet(std::vector<Measurement> records) : records_(std::move(records))
{
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!std::isfinite(r.x) || !std::isfinite(r.t) || !std::isfinite(r.d))
      throw ContractError("MeasurementSet: non-finite record");
    if (!(r.sigma_eps >= 0.0))
      throw ContractError("MeasurementSet: sigma_eps must be >= 0");
    if (i > 0) {
      const auto& p = records_[i - 1];
      if (assimilation_less(r.t, r.x, p.t, p.x))
        throw ContractError("MeasurementSet: records not in time-major order");
    }
  }
}

std::vector<std::vector<Measurement>> MeasurementSet::grouped_by_time() const
{
  std::vector<std::vector<Measurement>> groups;
  for (const auto& r : records_) {
    if (groups.empty() || groups.back().front().t != r.t)
      groups.emplace_back();
    groups.back().push_back(r);
  }
  return groups;
}

MeasurementSet MeasurementSet::merged(const MeasurementSet& other) const
{
  std::vector<Measurement> all = records_;
  all.insert(all.end(), other.records_.begin(), other.records_.end());
  std::stable_sort(all.begin(), all.end(), [](const Measurement& a, const Measurement& b) {
    return assimilation_less(a.t, a.x, b.t, b.x);
  });
  return MeasurementSet(std::move(all));
}

void sort_assimilation_order(std::vector<Location>& locs)
{
  std::stable_sort(locs.begin(), locs.end(), [](const Location& a, const Location& b) {
    return assimilation_less(a.t, a.x, b.t, b.x);
  });
}

std::vector<Location> schedule_grid(const std::vector<double>& xs, const std::vector<double>& ts)
{
  std::vector<Location> out;
  for (double t : ts)
    for (double x : xs)
      out.push_back({x, t});
  sort_assimilation_order(out);
  return out;
}

std::vector<Location> two_sensor_schedule()
{
  std::vector<double> ts;
  for (int j = 0; j < 10; ++j)
    ts.push_back(0.15 + 0.05 * j);
  return schedule_grid({0.1, 0.8}, ts);
}

MeasurementSet generate_observations(const PhysicsConfig& cfg, std::vector<Location> locations,
                                     double sigma_eps, std::uint64_t noise_seed)
{
  if (!(sigma_eps >= 0.0))
    throw ContractError("generate_observations: sigma_eps must be >= 0");
  sort_assimilation_order(locations);
  core::Rng rng(noise_seed);
  std::vector<Measurement> records;
  records.reserve(locations.size());
  for (const auto& loc : locations) {
    if (loc.x < 0.0 || loc.t < 0.0)
      throw ContractError("generate_observations: location outside the space-time domain");
    const double eps = sigma_eps > 0.0 ? sigma_eps * rng.normal() : 0.0;
    records.push_back({loc.x, loc.t, analytic_state(loc.x, loc.t, cfg) + eps, sigma_eps});
  }
  return MeasurementSet(std::move(records));
}

void write_measurements(const std::filesystem::path& path, const MeasurementSet& m)
{
  core::CsvWriter w(path, {"idx", "x", "t", "d", "sigma_eps"});
  for (std::size_t i = 0; i < m.size(); ++i) {
    w.cell(i).cell(m[i].x).cell(m[i].t).cell(m[i].d).cell(m[i].sigma_eps);
    w.end_row();
  }
}

MeasurementSet read_measurements(const std::filesystem::path& path)
{
  const auto table = core::read_csv(path);
  const auto cx = table.column("x"), ct = table.column("t"), cd = table.column("d"),
             cs = table.column("sigma_eps");
  std::vector<Measurement> records;
  for (const auto& row : table.rows)
    records.push_back({std::stod(row[cx]), std::stod(row[ct]), std::stod(row[cd]),
                       std::stod(row[cs])});
  return MeasurementSet(std::move(records));
}

void write_k_field(const std::filesystem::path& path, const KField& field)
{
  core::CsvWriter w(path, {"x", "k"});
  for (std::size_t c = 0; c < field.node_values.size(); ++c) {
    w.cell(field.x_min + (static_cast<double>(c) + 0.5) * field.cell_width)
        .cell(field.node_values[c]);
    w.end_row();
  }
}

KField read_k_field(const std::filesystem::path& path)
{
  const auto table = core::read_csv(path);
  const auto cx = table.column("x"), ck = table.column("k");
  if (table.rows.size() < 2)
    throw ValidationError(path.string() + ": need at least two cells");
  KField f;
  std::vector<double> xs;
  for (const auto& row : table.rows) {
    xs.push_back(std::stod(row[cx]));
    f.node_values.push_back(std::stod(row[ck]));
  }
  f.cell_width = xs[1] - xs[0];
  f.x_min = xs[0] - 0.5 * f.cell_width;
  f.kind = FieldKind::white;
  f.mean = f.spatial_mean();
  f.std = f.spatial_std();
  f.validate();
  return f;
}

} // namespace damd::physics
