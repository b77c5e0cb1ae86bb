#include "psdtrack/geometry.hpp"

#include <cmath>

#include "psdtrack/errors.hpp"

namespace psdtrack {

void Rotation::canonicalize() {
  q_.normalize();
  // Hemisphere convention: w >= 0, ties broken on the first nonzero component.
  const double* c = q_.coeffs().data();  // (x, y, z, w)
  double lead = c[3];
  if (lead == 0.0) {
    for (int i = 0; i < 3 && lead == 0.0; ++i) lead = c[i];
  }
  if (lead < 0.0) q_.coeffs() = -q_.coeffs();
}

Rotation Rotation::from_quat(double w, double x, double y, double z) {
  return Rotation(Eigen::Quaterniond(w, x, y, z));
}

Rotation Rotation::from_matrix(const Mat3& m) {
  return Rotation(Eigen::Quaterniond(m));
}

Rotation Rotation::about_axis(const Vec3& axis, double angle_rad) {
  return Rotation(Eigen::Quaterniond(
      Eigen::AngleAxisd(angle_rad, axis.normalized())));
}

Rotation Rotation::operator*(const Rotation& rhs) const {
  return Rotation(q_ * rhs.q_);
}

Rotation Rotation::inverse() const { return Rotation(q_.conjugate()); }

double Rotation::angle_to(const Rotation& other) const {
  Eigen::Quaterniond d = q_.conjugate() * other.q_;
  double s = Vec3(d.x(), d.y(), d.z()).norm();
  return 2.0 * std::atan2(s, std::abs(d.w()));
}

Rotation Rotation::slerp(double t, const Rotation& other) const {
  return Rotation(q_.slerp(t, other.q_));
}

Rotation project_to_so3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > sv(0) * 1e-12) || sv(0) == 0.0) {
    fail(ErrorCode::degenerate_input,
         "project_to_so3: input matrix is rank deficient");
  }
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rotation::from_matrix(u * d * v.transpose());
}

double angular_distance_deg(const Rotation& a, const Rotation& b) {
  return rad_to_deg(a.angle_to(b));
}

}  // namespace psdtrack
