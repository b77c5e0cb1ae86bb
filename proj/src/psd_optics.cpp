#include "psdtrack/psd_optics.hpp"

#include <cmath>

#include "psdtrack/errors.hpp"

namespace psdtrack {

namespace {

// Bernstein basis values b^n_i(t) for i = 0..n.
void bernstein_basis(int n, double t, std::vector<double>& out) {
  out.assign(n + 1, 0.0);
  out[0] = 1.0;
  // de Casteljau-style accumulation; stable for t outside [0,1] as well.
  for (int j = 1; j <= n; ++j) {
    double saved = 0.0;
    for (int k = 0; k < j; ++k) {
      double term = out[k];
      out[k] = saved + (1.0 - t) * term;
      saved = t * term;
    }
    out[j] = saved;
  }
}

}  // namespace

BernsteinNet BernsteinNet::identity(int degree, double active_length) {
  BernsteinNet net;
  net.degree = degree;
  int n1 = degree + 1;
  net.coeff_x.resize(n1 * n1);
  net.coeff_y.resize(n1 * n1);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      // Bernstein surfaces reproduce linear functions of (u, v) exactly,
      // so control values on the regular grid give the identity map.
      double u = degree == 0 ? 0.5 : static_cast<double>(i) / degree;
      double v = degree == 0 ? 0.5 : static_cast<double>(j) / degree;
      net.coeff_x[i * n1 + j] = (u - 0.5) * active_length;
      net.coeff_y[i * n1 + j] = (v - 0.5) * active_length;
    }
  }
  return net;
}

bool BernsteinNet::is_identity(double active_length, double tol) const {
  BernsteinNet id = identity(degree, active_length);
  if (coeff_x.size() != id.coeff_x.size()) return false;
  for (size_t k = 0; k < coeff_x.size(); ++k) {
    if (std::abs(coeff_x[k] - id.coeff_x[k]) > tol) return false;
    if (std::abs(coeff_y[k] - id.coeff_y[k]) > tol) return false;
  }
  return true;
}

PsdPoint ForwardDistortion::apply(const PsdPoint& p,
                                  const PsdIntrinsics& intr) const {
  if (is_identity()) return p;
  double half = intr.active_length / 2.0;
  double dx = p.x - intr.principal_x;
  double dy = p.y - intr.principal_y;
  // Lens stage (barrel for lens_k < 0).
  double r2 = (dx * dx + dy * dy) / (half * half);
  double s = 1.0 + lens_k * r2;
  dx *= s;
  dy *= s;
  // Sensor stage (pincushion for sensor_k > 0).
  r2 = (dx * dx + dy * dy) / (half * half);
  s = 1.0 + sensor_k * r2;
  return {intr.principal_x + dx * s, intr.principal_y + dy * s};
}

PsdPoint currents_to_position(const PsdCurrents& c, double active_length) {
  double total = c.sum();
  if (!(total > 0.0)) {
    fail(ErrorCode::no_signal, "currents_to_position: zero total current");
  }
  double half = active_length / 2.0;
  return {half * c.diff_x() / total, half * c.diff_y() / total};
}

PsdCurrents position_to_currents(const PsdPoint& p, double total_current,
                                 double active_length) {
  double half = active_length / 2.0;
  if (std::abs(p.x) > half || std::abs(p.y) > half) {
    fail(ErrorCode::out_of_range, "position_to_currents: point off sensor");
  }
  if (!(total_current > 0.0)) {
    fail(ErrorCode::no_signal, "position_to_currents: nonpositive total");
  }
  // Bilinear split: u, v in [0,1] across the sensor. The split keeps every
  // electrode nonnegative and reproduces p exactly under Eq.-style decoding.
  double u = (p.x + half) / active_length;
  double v = (p.y + half) / active_length;
  PsdCurrents c;
  c.i1 = total_current * (1.0 - u) * (1.0 - v);
  c.i2 = total_current * u * v;
  c.i3 = total_current * u * (1.0 - v);
  c.i4 = total_current * (1.0 - u) * v;
  return c;
}

UndistortResult undistort(const PsdPoint& p, const PsdIntrinsics& intr) {
  const BernsteinNet& net = intr.inverse_distortion;
  int n = net.degree;
  int n1 = n + 1;
  double u = (p.x + intr.active_length / 2.0) / intr.active_length;
  double v = (p.y + intr.active_length / 2.0) / intr.active_length;

  std::vector<double> bu, bv;
  bernstein_basis(n, u, bu);
  bernstein_basis(n, v, bv);

  double x = 0.0, y = 0.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      double w = bu[i] * bv[j];
      x += net.coeff_x[i * n1 + j] * w;
      y += net.coeff_y[i * n1 + j] * w;
    }
  }
  bool outside = u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0;
  return {{x, y}, outside};
}

PsdPoint project(const Vec3& point, const PsdIntrinsics& intr,
                 const RigidTransform& psd_pose, const ForwardDistortion* fwd) {
  Vec3 local = psd_pose.inverse() * point;
  if (!(local.z() > 0.0)) {
    fail(ErrorCode::behind_sensor, "project: point at nonpositive depth");
  }
  double xn = local.x() / local.z();
  double yn = local.y() / local.z();
  PsdPoint p{intr.focal_length * xn + intr.skew * yn + intr.principal_x,
             intr.focal_length * yn + intr.principal_y};
  if (fwd != nullptr) p = fwd->apply(p, intr);
  return p;
}

Vec3 triangulate(const PsdPoint& left, const PsdPoint& right,
                 const StereoRig& rig) {
  auto back_project = [](const PsdPoint& p, const PsdIntrinsics& intr) {
    double yn = (p.y - intr.principal_y) / intr.focal_length;
    double xn = (p.x - intr.principal_x - intr.skew * yn) / intr.focal_length;
    return Vec3(xn, yn, 1.0);
  };

  Vec3 d1 = back_project(left, rig.left);
  Vec3 o2 = rig.right_in_left.translation;
  Vec3 d2 = rig.right_in_left.rotation * back_project(right, rig.right);

  // Closest points on the two rays: o1 + s*d1 and o2 + t*d2.
  double a = d1.dot(d1);
  double b = d1.dot(d2);
  double c = d2.dot(d2);
  double denom = a * c - b * b;
  if (denom <= 1e-12 * a * c) {
    fail(ErrorCode::degenerate_geometry, "triangulate: rays are parallel");
  }
  Vec3 w = -o2;  // o1 - o2 with o1 at the left-frame origin
  double d = d1.dot(w);
  double e = d2.dot(w);
  double s = (b * e - c * d) / denom;
  double t = (a * e - b * d) / denom;
  if (s <= 0.0 || t <= 0.0) {
    fail(ErrorCode::behind_sensor, "triangulate: intersection behind a PSD");
  }
  return 0.5 * (s * d1 + (o2 + t * d2));
}

}  // namespace psdtrack
