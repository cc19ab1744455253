#pragma once

#include "damd/physics/model.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace damd::physics {

struct Measurement
{
  double x;
  double t;
  double d;
  double sigma_eps;
};

/// Space-time location of a sensor reading.
struct Location
{
  double x;
  double t;
};

/// Ordered measurement records. Assimilation order is time-major with
/// ascending x inside a timestamp. sigma_eps >= 0 is accepted here;
/// assimilation routines require sigma_eps > 0.
class MeasurementSet
{
public:
  MeasurementSet() = default;
  explicit MeasurementSet(std::vector<Measurement> records);

  const std::vector<Measurement>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Measurement& operator[](std::size_t i) const { return records_[i]; }

  /// Records sharing a timestamp, in assimilation order.
  std::vector<std::vector<Measurement>> grouped_by_time() const;

  /// Union of two sets, re-sorted into assimilation order.
  MeasurementSet merged(const MeasurementSet& other) const;

private:
  std::vector<Measurement> records_;
};

/// Time-major, then x-ascending ordering.
void sort_assimilation_order(std::vector<Location>& locs);

/// Sensors at each x in `xs`, read at every t in `ts`.
std::vector<Location> schedule_grid(const std::vector<double>& xs, const std::vector<double>& ts);

/// x in {0.1, 0.8}, t in {0.15, 0.20, ..., 0.60}: twenty readings, half with
/// x/t > 1 (initial-condition region) and half with x/t < 1 (inflow region).
std::vector<Location> two_sensor_schedule();

/// d_m = analytic_state(x_m, t_m) + eps_m with eps_m ~ N(0, sigma_eps^2),
/// eps_m drawn in order from Rng(noise_seed). sigma_eps = 0 returns the
/// exact states (the set is then flagged noise-free and not usable as a
/// likelihood).
MeasurementSet generate_observations(const PhysicsConfig& cfg, std::vector<Location> locations,
                                     double sigma_eps, std::uint64_t noise_seed);

void write_measurements(const std::filesystem::path& path, const MeasurementSet& m);
MeasurementSet read_measurements(const std::filesystem::path& path);

void write_k_field(const std::filesystem::path& path, const KField& field);
/// Reads cell-centre values; the cell width is inferred from the spacing.
KField read_k_field(const std::filesystem::path& path);

} // namespace damd::physics
