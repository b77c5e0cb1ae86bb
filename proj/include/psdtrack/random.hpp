#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "psdtrack/geometry.hpp"

namespace psdtrack {

// Deterministic draw helpers on top of mt19937_64. std distributions are
// implementation defined, which would break the byte-identical replay
// contract, so the transforms live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return (engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one value per call, the pair partner is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  double gaussian(double mean, double sigma) {
    return mean + sigma * gaussian();
  }

  Vec3 unit_vector() {
    while (true) {
      Vec3 v(gaussian(), gaussian(), gaussian());
      double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

  // Uniform over SO(3): four gaussians normalized.
  Rotation rotation() {
    double w = gaussian(), x = gaussian(), y = gaussian(), z = gaussian();
    double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (n < 1e-12) return rotation();
    return Rotation::from_quat(w / n, x / n, y / n, z / n);
  }

  // Rotation within `angle_rad` of identity (uniform axis, gaussian angle).
  Rotation small_rotation(double sigma_rad) {
    return Rotation::about_axis(unit_vector(), gaussian(0.0, sigma_rad));
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace psdtrack
