#include "psdtrack/multiplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "psdtrack/errors.hpp"

namespace psdtrack {

void PatternConfig::validate() const {
  if (slot_count < 2 || frame_period_ms <= 0.0) {
    fail(ErrorCode::config, "pattern: need a trigger slot plus LED slots");
  }
  if (!(trigger_duty > 0.5) || !(led_duty < 0.5) || led_duty <= 0.0 ||
      trigger_duty >= 1.0) {
    fail(ErrorCode::config,
         "pattern: trigger duty must exceed 50%, LED duty must be under 50%");
  }
  double w = slot_width_us();
  if (!(trigger_duty * w > double_read_interval_us)) {
    fail(ErrorCode::config,
         "pattern: trigger pulse must outlast the double-read interval");
  }
  if (!(led_duty * w <= double_read_interval_us)) {
    fail(ErrorCode::config,
         "pattern: LED pulse must end before the second ADC read");
  }
}

PsdPoint triple_to_position(const ChannelTriple& t, double active_length) {
  if (!(t.sum > 0.0)) {
    fail(ErrorCode::no_signal, "triple_to_position: zero sum signal");
  }
  double half = active_length / 2.0;
  return {half * t.diff_x / t.sum, half * t.diff_y / t.sum};
}

std::vector<int> generate_pattern(const PatternConfig& cfg, double t_us) {
  double period = cfg.frame_period_us();
  double phase = std::fmod(t_us, period);
  if (phase < 0.0) phase += period;
  double w = cfg.slot_width_us();
  int slot = static_cast<int>(phase / w);
  double offset = phase - slot * w;

  std::vector<int> lit;
  if (slot == 0) {
    if (offset <= cfg.trigger_duty * w) {
      for (int i = 1; i <= kLedCount; ++i) lit.push_back(i);
    }
  } else if (slot <= kLedCount) {
    if (offset <= cfg.led_duty * w) lit.push_back(slot);
  }
  return lit;
}

namespace {

bool trigger_test(const AdcSamplePair& p, const DecoderConfig& cfg) {
  if (p.channel.channel != Channel::sum) return false;
  return p.first > cfg.trigger_threshold && p.second > cfg.trigger_threshold &&
         std::abs(p.first - p.second) <= cfg.trigger_rel_tol * p.first;
}

}  // namespace

double detect_trigger(std::span<const AdcSamplePair> sum_pairs,
                      const PatternConfig& pattern, const DecoderConfig& cfg) {
  (void)pattern;
  for (const auto& p : sum_pairs) {
    if (trigger_test(p, cfg)) return p.t_us;
  }
  fail(ErrorCode::sync_lost, "detect_trigger: no trigger edge in window");
}

DecodedFrame decode_frame(std::span<const AdcSamplePair> events,
                          double trigger_t_us, const PatternConfig& pattern,
                          const DecoderConfig& cfg) {
  double w = pattern.slot_width_us();
  double period = pattern.frame_period_us();

  DecodedFrame frame;
  frame.t_us = trigger_t_us;

  // Group records by rising-edge timestamp; one event spans all channels.
  std::map<double, std::array<ChannelTriple, 2>> by_time;
  for (const auto& rec : events) {
    double dt = rec.t_us - trigger_t_us;
    if (dt < 0.0 || dt >= period) continue;
    if (dt < 0.5 * w) continue;  // the trigger event itself
    auto& sides = by_time[rec.t_us];
    ChannelTriple& triple = sides[rec.channel.side == Side::left ? 0 : 1];
    double v = ambient_cancel(rec);
    switch (rec.channel.channel) {
      case Channel::diff_x: triple.diff_x = v; break;
      case Channel::diff_y: triple.diff_y = v; break;
      case Channel::sum: triple.sum = v; break;
    }
  }

  for (const auto& [t, sides] : by_time) {
    double slots = (t - trigger_t_us) / w;
    int k = static_cast<int>(std::lround(slots));
    if (k < 1 || k > kLedCount ||
        std::abs(slots - k) > cfg.slot_tol_frac) {
      fail(ErrorCode::frame_drift, "decode_frame: slot timing out of tolerance");
    }
    const ChannelTriple& l = sides[0];
    const ChannelTriple& r = sides[1];
    if (l.sum >= cfg.detect_threshold || r.sum >= cfg.detect_threshold) {
      frame.leds[k] = {l, r};
      frame.detected.insert(k);
    }
  }

  // The circular LED arrangement exposes at most two LEDs to the base; more
  // than that indicates a decode or geometry problem but the frame is kept.
  frame.geometry_warning = frame.detected.size() > 2;
  return frame;
}

FrameDecoder::FrameDecoder(const PatternConfig& pattern,
                           const DecoderConfig& cfg)
    : pattern_(pattern), cfg_(cfg) {
  pattern_.validate();
}

bool FrameDecoder::is_trigger(const AdcSamplePair& pair) const {
  return trigger_test(pair, cfg_);
}

void FrameDecoder::note_sync_loss(int count) {
  if (count <= 0) return;
  sync_losses_ += count;
  consecutive_losses_ += count;
  if (consecutive_losses_ > cfg_.max_sync_lost) {
    fail(ErrorCode::stream_fault,
         "decoder: sync lost for more than " +
             std::to_string(cfg_.max_sync_lost) + " consecutive frames");
  }
}

std::optional<DecodedFrame> FrameDecoder::close_frame() {
  if (!in_frame_) return std::nullopt;
  in_frame_ = false;
  try {
    DecodedFrame frame = decode_frame(events_, trigger_t_, pattern_, cfg_);
    events_.clear();
    ++frames_decoded_;
    return frame;
  } catch (const TrackError& e) {
    if (e.code() != ErrorCode::frame_drift) throw;
    events_.clear();
    ++frames_dropped_;
    return std::nullopt;
  }
}

std::optional<DecodedFrame> FrameDecoder::push(const AdcSamplePair& pair) {
  double period = pattern_.frame_period_us();
  std::optional<DecodedFrame> out;

  if (is_trigger(pair)) {
    out = close_frame();
    if (last_trigger_t_ >= 0.0) {
      // Frames elapsed since the previous trigger; more than one means the
      // intervening triggers were missed.
      int gap = static_cast<int>(
          std::lround((pair.t_us - last_trigger_t_) / period));
      note_sync_loss(gap - 1);
    }
    consecutive_losses_ = 0;
    in_frame_ = true;
    trigger_t_ = pair.t_us;
    last_trigger_t_ = pair.t_us;
    events_.clear();
    return out;
  }

  if (in_frame_) {
    if (pair.t_us < trigger_t_ + period) {
      events_.push_back(pair);
    } else {
      // Event past the frame window without a new trigger: the next frame's
      // trigger was missed.
      out = close_frame();
      note_sync_loss(1);
    }
  }
  return out;
}

std::optional<DecodedFrame> FrameDecoder::finish() { return close_frame(); }

std::vector<DecodedFrame> decode_stream(std::span<const AdcSamplePair> records,
                                        const PatternConfig& pattern,
                                        const DecoderConfig& cfg) {
  FrameDecoder decoder(pattern, cfg);
  std::vector<DecodedFrame> frames;
  for (const auto& rec : records) {
    if (auto f = decoder.push(rec)) frames.push_back(std::move(*f));
  }
  if (auto f = decoder.finish()) frames.push_back(std::move(*f));
  return frames;
}

}  // namespace psdtrack
