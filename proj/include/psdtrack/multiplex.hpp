#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "psdtrack/psd_optics.hpp"

namespace psdtrack {

inline constexpr int kLedCount = 6;

// One identification cycle: a trigger slot exciting all LEDs followed by one
// slot per LED, even widths. Times are microseconds.
struct PatternConfig {
  double frame_period_ms = 10.0;
  int slot_count = 1 + kLedCount;
  double trigger_duty = 0.8;          // > 0.5 so both ADC reads land inside
  double led_duty = 0.03;             // keeps the LED pulse under the read gap
  double double_read_interval_us = 50.0;

  double frame_period_us() const { return frame_period_ms * 1000.0; }
  double slot_width_us() const { return frame_period_us() / slot_count; }

  // Throws ErrorCode::config when duty cycles cannot separate trigger from
  // LED slots under the double-read scheme.
  void validate() const;
};

enum class Side { left, right };
enum class Channel { diff_x, diff_y, sum };

struct ChannelId {
  Side side = Side::left;
  Channel channel = Channel::sum;

  auto operator<=>(const ChannelId&) const = default;
};

// Double ADC conversion on one analog channel, synced to a rising edge.
// Counts are stored as doubles; quantized streams carry integral values.
struct AdcSamplePair {
  double t_us = 0.0;
  ChannelId channel;
  double first = 0.0;
  double second = 0.0;
};

// Ambient-cancelled combination signals of one PSD.
struct ChannelTriple {
  double diff_x = 0.0;
  double diff_y = 0.0;
  double sum = 0.0;
};

// Spot position from the cancelled triple (the circuit already forms the
// difference/sum combinations of Eq.-style decoding).
PsdPoint triple_to_position(const ChannelTriple& t, double active_length);

struct DecodedFrame {
  double t_us = 0.0;  // trigger rising edge
  std::map<int, std::pair<ChannelTriple, ChannelTriple>> leds;  // left, right
  std::set<int> detected;
  bool geometry_warning = false;  // more than two LEDs in one cycle
};

// LED indices (1-based) lit at absolute time t_us. Slot 0 drives all LEDs for
// trigger_duty of the slot; slot k drives LED k for led_duty of the slot.
std::vector<int> generate_pattern(const PatternConfig& cfg, double t_us);

// first - second: cancels any offset common to both conversions.
inline double ambient_cancel(const AdcSamplePair& p) {
  return p.first - p.second;
}

struct DecoderConfig {
  double detect_threshold = 50.0;   // counts on a cancelled sum
  double trigger_threshold = 50.0;  // counts, both raw reads must exceed
  double trigger_rel_tol = 0.1;     // |first - second| <= tol * first
  double slot_tol_frac = 0.25;      // slot timing tolerance, fraction of width
  int max_sync_lost = 10;           // consecutive losses before stream_fault
};

// Locate the first trigger rising edge in a window of sum-channel pairs.
// Throws sync_lost when the window holds no trigger.
double detect_trigger(std::span<const AdcSamplePair> sum_pairs,
                      const PatternConfig& pattern, const DecoderConfig& cfg);

// Decode one frame's events given its trigger time. Events are the sample
// pairs with trigger_t <= t < trigger_t + period, all channels interleaved.
// Throws frame_drift when a slot's timing is outside tolerance.
DecodedFrame decode_frame(std::span<const AdcSamplePair> events,
                          double trigger_t_us, const PatternConfig& pattern,
                          const DecoderConfig& cfg);

// Streaming decoder: push sample pairs in time order, frames pop out as the
// following trigger (or end of window) confirms them. Single-owner.
class FrameDecoder {
 public:
  FrameDecoder(const PatternConfig& pattern, const DecoderConfig& cfg);

  std::optional<DecodedFrame> push(const AdcSamplePair& pair);
  // Flush the trailing frame at end of stream.
  std::optional<DecodedFrame> finish();

  int frames_decoded() const { return frames_decoded_; }
  int frames_dropped() const { return frames_dropped_; }
  int sync_losses() const { return sync_losses_; }

 private:
  bool is_trigger(const AdcSamplePair& pair) const;
  std::optional<DecodedFrame> close_frame();
  void note_sync_loss(int count);

  PatternConfig pattern_;
  DecoderConfig cfg_;
  bool in_frame_ = false;
  double trigger_t_ = 0.0;
  double last_trigger_t_ = -1.0;
  std::vector<AdcSamplePair> events_;
  int frames_decoded_ = 0;
  int frames_dropped_ = 0;
  int sync_losses_ = 0;
  int consecutive_losses_ = 0;
};

// Convenience: run a whole record stream through a FrameDecoder.
std::vector<DecodedFrame> decode_stream(std::span<const AdcSamplePair> records,
                                        const PatternConfig& pattern,
                                        const DecoderConfig& cfg);

}  // namespace psdtrack
