#include "psdtrack/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "psdtrack/errors.hpp"

namespace psdtrack {

namespace {

// Index pair and weight for 1-D clamped linear interpolation.
struct Bracket {
  size_t lo = 0, hi = 0;
  double w = 0.0;  // weight of hi
};

Bracket bracket(const std::vector<double>& grid, double v) {
  if (v <= grid.front()) return {0, 0, 0.0};
  if (v >= grid.back()) return {grid.size() - 1, grid.size() - 1, 0.0};
  auto it = std::upper_bound(grid.begin(), grid.end(), v);
  size_t hi = static_cast<size_t>(it - grid.begin());
  size_t lo = hi - 1;
  return {lo, hi, (v - grid[lo]) / (grid[hi] - grid[lo])};
}

void check_grid(const std::vector<double>& grid, const char* name) {
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      fail(ErrorCode::config,
           std::string("lut: ") + name + " grid must be strictly increasing");
    }
  }
}

}  // namespace

double lut_lookup(const PowerLut& lut, double disparity_mm,
                  double off_axis_deg) {
  if (lut.disparity_grid.empty() || lut.angle_grid.empty() ||
      lut.targets.size() != lut.disparity_grid.size() * lut.angle_grid.size()) {
    fail(ErrorCode::config, "lut: empty or inconsistent table");
  }
  if (!std::isfinite(disparity_mm) || !std::isfinite(off_axis_deg)) {
    fail(ErrorCode::config, "lut: non-finite query");
  }
  check_grid(lut.disparity_grid, "disparity");
  check_grid(lut.angle_grid, "angle");

  Bracket d = bracket(lut.disparity_grid, disparity_mm);
  Bracket a = bracket(lut.angle_grid, off_axis_deg);
  double v00 = lut.at(d.lo, a.lo);
  double v01 = lut.at(d.lo, a.hi);
  double v10 = lut.at(d.hi, a.lo);
  double v11 = lut.at(d.hi, a.hi);
  double v0 = v00 + (v01 - v00) * a.w;
  double v1 = v10 + (v11 - v10) * a.w;
  return v0 + (v1 - v0) * d.w;
}

ControllerState control_step(ControllerState state, double sum_left,
                             double sum_right, double target, double kp) {
  double error = target - std::max(sum_left, sum_right);
  double power = state.power + kp * error;
  state.last_error = error;
  state.saturated_high = power >= 1.0;
  state.saturated_low = power <= 0.0;
  state.power = std::clamp(power, 0.0, 1.0);
  return state;
}

PowerLut build_lut(std::span<const SweepSample> sweep) {
  if (sweep.empty()) {
    fail(ErrorCode::sparse_sweep, "build_lut: empty sweep");
  }

  // Coordinates are merged within a small tolerance so repeated sweeps over
  // nominally identical stations share one bin.
  constexpr double kMerge = 1e-9;
  auto collect = [](std::vector<double>& grid, double v) {
    for (double g : grid) {
      if (std::abs(g - v) <= kMerge) return;
    }
    grid.push_back(v);
  };

  PowerLut lut;
  for (const auto& s : sweep) {
    collect(lut.disparity_grid, s.disparity_mm);
    collect(lut.angle_grid, s.off_axis_deg);
  }
  std::sort(lut.disparity_grid.begin(), lut.disparity_grid.end());
  std::sort(lut.angle_grid.begin(), lut.angle_grid.end());

  size_t nd = lut.disparity_grid.size();
  size_t na = lut.angle_grid.size();
  lut.targets.assign(nd * na, -1.0);

  auto index_of = [](const std::vector<double>& grid, double v) {
    auto it = std::lower_bound(grid.begin(), grid.end(), v - kMerge);
    return static_cast<size_t>(it - grid.begin());
  };

  for (const auto& s : sweep) {
    size_t di = index_of(lut.disparity_grid, s.disparity_mm);
    size_t ai = index_of(lut.angle_grid, s.off_axis_deg);
    double& cell = lut.targets[di * na + ai];
    cell = std::max(cell, s.min_sum);  // duplicate samples keep the max
  }

  std::string empty_bins;
  for (size_t di = 0; di < nd; ++di) {
    for (size_t ai = 0; ai < na; ++ai) {
      if (lut.targets[di * na + ai] < 0.0) {
        empty_bins += " (d=" + std::to_string(lut.disparity_grid[di]) +
                      ", a=" + std::to_string(lut.angle_grid[ai]) + ")";
      }
    }
  }
  if (!empty_bins.empty()) {
    fail(ErrorCode::sparse_sweep, "build_lut: empty bins:" + empty_bins);
  }

  // Isotonic pass per angle column: target must not decrease with depth,
  // i.e. not increase with disparity. Pool adjacent violators.
  for (size_t ai = 0; ai < na; ++ai) {
    std::vector<double> vals(nd);
    for (size_t di = 0; di < nd; ++di) vals[di] = lut.at(di, ai);
    // Enforce nonincreasing along ascending disparity by running PAV on the
    // reversed (depth-ordered) sequence.
    std::reverse(vals.begin(), vals.end());
    std::vector<double> level;
    std::vector<size_t> count;
    for (double v : vals) {
      level.push_back(v);
      count.push_back(1);
      while (level.size() > 1 && level[level.size() - 2] > level.back()) {
        double merged = (level[level.size() - 2] * count[count.size() - 2] +
                         level.back() * count.back()) /
                        (count[count.size() - 2] + count.back());
        count[count.size() - 2] += count.back();
        level[level.size() - 2] = merged;
        level.pop_back();
        count.pop_back();
      }
    }
    size_t di = 0;
    for (size_t b = 0; b < level.size(); ++b) {
      for (size_t k = 0; k < count[b]; ++k, ++di) vals[di] = level[b];
    }
    std::reverse(vals.begin(), vals.end());
    for (size_t i = 0; i < nd; ++i) lut.targets[i * na + ai] = vals[i];
  }

  return lut;
}

}  // namespace psdtrack
