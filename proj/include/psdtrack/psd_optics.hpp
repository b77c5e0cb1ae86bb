#pragma once

#include <vector>

#include "psdtrack/geometry.hpp"

namespace psdtrack {

// The tracked object carries six IR-LEDs on a ring.
inline constexpr int kLedCount = 6;

// Photocurrents of the four PSD electrodes, microamperes. Electrode order
// follows the datasheet quadrant convention used by the decode formula.
struct PsdCurrents {
  double i1 = 0, i2 = 0, i3 = 0, i4 = 0;

  double sum() const { return i1 + i2 + i3 + i4; }
  double diff_x() const { return (i2 + i3) - (i1 + i4); }
  double diff_y() const { return (i2 + i4) - (i1 + i3); }
};

// Light-spot location on the PSD surface, millimeters from the electrical
// center. On-sensor points satisfy |x|, |y| <= L/2.
struct PsdPoint {
  double x = 0, y = 0;
};

// Inverse-distortion model: a bivariate Bernstein surface over the sensor
// square mapped to [0,1]^2. Coefficients are control-net values in sensor
// millimeters, one net per output coordinate.
struct BernsteinNet {
  int degree = 3;
  std::vector<double> coeff_x;  // (degree+1)^2, row-major over (i, j)
  std::vector<double> coeff_y;

  // Control net reproducing the identity map over a sensor of side L.
  static BernsteinNet identity(int degree, double active_length);

  bool is_identity(double active_length, double tol = 1e-12) const;
};

struct PsdIntrinsics {
  double focal_length = 8.5;   // mm
  double principal_x = 0.0;    // mm
  double principal_y = 0.0;    // mm
  double skew = 0.0;
  double active_length = 9.0;  // resistance length L, mm
  BernsteinNet inverse_distortion = BernsteinNet::identity(3, 9.0);
};

// Simulator-side forward warp: radial lens (barrel, k < 0) composed with a
// radial sensor term (pincushion, k > 0). Radii are normalized by L/2.
struct ForwardDistortion {
  double lens_k = 0.0;
  double sensor_k = 0.0;

  bool is_identity() const { return lens_k == 0.0 && sensor_k == 0.0; }
  PsdPoint apply(const PsdPoint& p, const PsdIntrinsics& intr) const;
};

// Pose of the right PSD frame expressed in the left PSD frame.
struct StereoExtrinsics {
  Rotation rotation;
  Vec3 translation = Vec3(160.0, 0.0, 0.0);
};

struct StereoRig {
  PsdIntrinsics left;
  PsdIntrinsics right;
  StereoExtrinsics right_in_left;
};

// Electrode currents -> spot position via the standard pincushion-type PSD
// ratio formula. L is the resistance length. Throws no_signal on zero sum.
PsdPoint currents_to_position(const PsdCurrents& c, double active_length);

// Simulator-side inverse: bilinear split of a target total current across
// the four electrodes so that currents_to_position returns p exactly.
// Throws out_of_range for off-sensor points.
PsdCurrents position_to_currents(const PsdPoint& p, double total_current,
                                 double active_length);

struct UndistortResult {
  PsdPoint point;
  bool extrapolated = false;  // input fell outside the [0,1]^2 fit domain
};

// Evaluate the Bernstein inverse-distortion surface at p.
UndistortResult undistort(const PsdPoint& p, const PsdIntrinsics& intr);

// Pinhole projection of a point given in the rig (left PSD) frame onto one
// PSD. psd_pose is that PSD's pose in the rig frame. When fwd is nonnull the
// simulator's forward warp is applied to the ideal projection.
PsdPoint project(const Vec3& point, const PsdIntrinsics& intr,
                 const RigidTransform& psd_pose,
                 const ForwardDistortion* fwd = nullptr);

// Back-project two undistorted image points and return the midpoint of the
// shortest segment between the rays, in the left PSD frame.
Vec3 triangulate(const PsdPoint& left, const PsdPoint& right,
                 const StereoRig& rig);

inline double disparity(const PsdPoint& left, const PsdPoint& right) {
  return left.x - right.x;
}

}  // namespace psdtrack
