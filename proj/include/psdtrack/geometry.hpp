#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace psdtrack {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Unit-quaternion rotation. Component order is (w, x, y, z) and the stored
// quaternion is normalized and canonicalized to w >= 0 so value comparison
// is well defined. All angles are radians internally; the *_deg helpers
// convert at the boundary.
class Rotation {
 public:
  Rotation() : q_(1.0, 0.0, 0.0, 0.0) {}

  static Rotation from_quat(double w, double x, double y, double z);
  static Rotation from_matrix(const Mat3& m);
  // Axis need not be normalized; angle in radians.
  static Rotation about_axis(const Vec3& axis, double angle_rad);
  static Rotation about_axis_deg(const Vec3& axis, double angle_deg) {
    return about_axis(axis, deg_to_rad(angle_deg));
  }

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Mat3 matrix() const { return q_.toRotationMatrix(); }

  // Composition matches matrix product: (a * b).matrix() == a.matrix() * b.matrix().
  Rotation operator*(const Rotation& rhs) const;
  Vec3 operator*(const Vec3& v) const { return q_ * v; }

  Rotation inverse() const;

  // Geodesic angle to another rotation, radians in [0, pi].
  double angle_to(const Rotation& other) const;

  // Slerp toward `other`; t in [0, 1].
  Rotation slerp(double t, const Rotation& other) const;

  bool isApprox(const Rotation& other, double tol = 1e-12) const {
    return angle_to(other) <= tol;
  }

 private:
  explicit Rotation(const Eigen::Quaterniond& q) : q_(q) { canonicalize(); }
  void canonicalize();

  Eigen::Quaterniond q_;
};

// Nearest rotation matrix in Frobenius norm (orthogonal Procrustes via SVD),
// with det = +1. Throws degenerate_input when m is rank deficient.
Rotation project_to_so3(const Mat3& m);

// Geodesic distance reported in degrees, [0, 180].
double angular_distance_deg(const Rotation& a, const Rotation& b);

// Rigid motion: p -> rotation * p + translation. Units are millimeters.
struct RigidTransform {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform operator*(const RigidTransform& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  RigidTransform inverse() const {
    Rotation rinv = rotation.inverse();
    return {rinv, -(rinv * translation)};
  }
};

}  // namespace psdtrack
