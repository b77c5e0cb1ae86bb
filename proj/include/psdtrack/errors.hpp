#pragma once

#include <stdexcept>
#include <string>

namespace psdtrack {

// Failure categories used across the pipeline. The CLI maps any TrackError
// to a nonzero exit code; tests dispatch on the code.
enum class ErrorCode {
  no_signal,          // zero total photocurrent
  out_of_range,       // point off the active sensor area
  behind_sensor,      // nonpositive depth in a PSD frame
  degenerate_geometry,// parallel rays, collapsed baseline
  degenerate_input,   // rank-deficient matrix where full rank is required
  sync_lost,          // no trigger found in a frame window
  stream_fault,       // too many consecutive sync losses
  frame_drift,        // slot timing outside tolerance
  config,             // malformed or empty configuration
  insufficient_data,  // underdetermined fit
  rank_deficient,     // calibration stack below required rank
  non_convergence,    // iterative solver hit max iterations
  divergence,         // iterative solver error grew repeatedly
  sparse_sweep,       // LUT sweep left empty bins
  stale_orientation,  // no IMU reading inside the staleness window
  no_data,            // empty series where statistics were requested
  empty_visibility,   // trajectory never brings an LED into view
};

class TrackError : public std::runtime_error {
 public:
  TrackError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw TrackError(code, msg);
}

}  // namespace psdtrack
