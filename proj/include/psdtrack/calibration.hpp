#pragma once

#include <array>
#include <span>
#include <vector>

#include "psdtrack/geometry.hpp"
#include "psdtrack/psd_optics.hpp"

namespace psdtrack {

// Planar target: a fabricated grid of IR-LEDs fired one at a time, playing
// the role of an optical checkerboard. Points are indexed row-major, laid
// out in the target plane (z = 0).
struct GridGeometry {
  int cols = 4;
  int rows = 3;
  double pitch_mm = 60.0;

  int point_count() const { return cols * rows; }
  Vec3 point(int index) const {
    return Vec3((index % cols) * pitch_mm, (index / cols) * pitch_mm, 0.0);
  }
};

// Detections of the grid at one station of the calibration sweep.
struct GridObservation {
  int pose_id = 0;
  struct PointObs {
    int grid_index = 0;
    PsdPoint left;
    PsdPoint right;
  };
  std::vector<PointObs> points;
};

struct StereoCalibOptions {
  int distortion_degree = 3;   // 0 disables the inverse-distortion fit
  int max_outer_iterations = 6;
  int max_lm_iterations = 100;
};

struct StereoCalibSummary {
  StereoRig rig;
  double mean_reprojection_mm = 0.0;
  double rms_reprojection_mm = 0.0;
  int poses = 0;
  int outer_iterations = 0;
};

// Planar-homography initialization per PSD, nonlinear reprojection-error
// refinement, extrinsics from paired per-pose transforms, then a joint
// stereo refinement. The inverse-distortion nets are re-fit between passes.
StereoCalibSummary calibrate_stereo(std::span<const GridObservation> obs,
                                    const GridGeometry& grid,
                                    const StereoCalibOptions& opts = {});

struct DistortionFit {
  BernsteinNet net;
  double rms_mm = 0.0;
};

// Least-squares Bernstein control net mapping measured -> ideal points.
// Throws insufficient_data when the system is underdetermined.
DistortionFit fit_distortion(std::span<const PsdPoint> ideal,
                             std::span<const PsdPoint> measured, int degree,
                             double active_length);

// One sample for the object-IMU alignment: the externally measured object
// orientation and the raw IMU orientation at the same instant.
struct OrientationSamplePair {
  Rotation reference;  // ground-truth object orientation in the g frame
  Rotation measured;   // IMU-reported orientation in the g frame
};

struct ImuAlignment {
  Rotation rotation;                  // object-IMU to object-body rotation
  double pre_projection_residual = 0; // Frobenius gap of the raw LS solution
};

// Pairwise-difference linear system over all sample combinations, solved by
// least squares and projected to SO(3). Throws rank_deficient when the
// differences do not span rank 3.
ImuAlignment calibrate_object_imu(std::span<const OrientationSamplePair> pairs);

// One pivot-sweep measurement for one LED: triangulated LED position and the
// relative orientation computed with the base-IMU mounting taken as identity.
struct LedSample {
  Vec3 position = Vec3::Zero();  // P, left-PSD frame, mm
  Rotation orientation;          // raw bRo
};

struct LedSampleSet {
  int led_index = 1;  // 1..6
  std::vector<LedSample> samples;
};

struct PivotCalibOptions {
  double threshold = 1e-6;        // combined per-sample residual, mm
  int max_iterations = 100;
  double consistency_weight = 1.0; // weight of the pivot-consistency term
  int divergence_patience = 5;
  int pair_cap = 0;               // >0 subsamples the quadratic pair set
};

// The three calibrated quantities plus solver diagnostics. imu_o_r_o is not
// estimated here; the object-IMU step fills it in.
struct CalibrationResult {
  Rotation imu_o_r_o;
  Rotation imu_b_r_b;
  std::array<Vec3, kMaxLeds()> q;  // pivot offset per LED, object frame
  Vec3 pivot = Vec3::Zero();       // estimated common pivot, base frame
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
  std::array<int, kMaxLeds()> pair_rows{};  // block rows per LED system

  static constexpr int kMaxLeds() { return 6; }
};

// Iterative joint estimation of the per-LED pivot offsets, the common pivot
// point, and the base-IMU mounting rotation. Throws rank_deficient naming
// the offending LED on insufficient rotational diversity and divergence when
// the residual keeps growing.
CalibrationResult pivot_calibrate(std::span<const LedSampleSet> sets,
                                  const PivotCalibOptions& opts = {});

}  // namespace psdtrack
