#pragma once

#include <span>
#include <vector>

namespace psdtrack {

// Target sum-current look-up table over (disparity, LED off-axis angle).
// Grids are strictly increasing; queries outside the grid clamp to the edge.
struct PowerLut {
  std::vector<double> disparity_grid;  // mm, ascending (larger = nearer)
  std::vector<double> angle_grid;      // degrees off LED boresight, ascending
  std::vector<double> targets;         // counts, row-major [disparity][angle]

  double at(size_t di, size_t ai) const {
    return targets[di * angle_grid.size() + ai];
  }
};

// Bilinear interpolation inside the grid, clamped outside. Throws
// ErrorCode::config on an empty or malformed table.
double lut_lookup(const PowerLut& lut, double disparity_mm,
                  double off_axis_deg);

struct ControllerState {
  double last_error = 0.0;   // counts
  double power = 0.5;        // commanded level, fraction of maximum
  bool saturated_high = false;
  bool saturated_low = false;
};

// One proportional update: error = target - max(sum_left, sum_right),
// power += kp * error, clamped to [0, 1].
ControllerState control_step(ControllerState state, double sum_left,
                             double sum_right, double target,
                             double kp = 1e-4);

// One sweep observation: the minimal sum current (counts) that met the SNR
// goal at this disparity and off-axis angle.
struct SweepSample {
  double disparity_mm = 0.0;
  double off_axis_deg = 0.0;
  double min_sum = 0.0;
};

// Bin sweep samples onto the grid of unique coordinates, keep the per-bin
// maximum, then smooth to be nonincreasing with disparity (nondecreasing
// with depth). Throws sparse_sweep listing any empty bin.
PowerLut build_lut(std::span<const SweepSample> sweep);

}  // namespace psdtrack
