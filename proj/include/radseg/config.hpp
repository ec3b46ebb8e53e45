#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace radseg {

enum class WindowKind { hann, hamming, rect };

std::string window_kind_name(WindowKind kind);
WindowKind window_kind_from_name(const std::string& name);  // throws ConfigError

// Short-time analysis parameters, in pulses.  window_len = 0 means "derive from
// the recording": 0.2 s worth of pulses.  hop = 0 means a quarter of the window.
struct StftParams {
  std::size_t window_len = 0;
  std::size_t hop = 0;
  WindowKind window_kind = WindowKind::hann;

  static constexpr double kAutoWindowSeconds = 0.2;

  StftParams resolved(double prf) const {
    StftParams out = *this;
    if (out.window_len == 0)
      out.window_len = static_cast<std::size_t>(std::lround(kAutoWindowSeconds * prf));
    if (out.hop == 0) out.hop = out.window_len >= 4 ? out.window_len / 4 : 1;
    return out;
  }

  bool operator==(const StftParams&) const = default;
};

struct PreprocConfig {
  double db_floor = -120.0;            // magnitude clamp before log scaling, dB
  std::size_t downsample_rows = 128;   // range bins kept
  std::size_t downsample_cols = 384;   // slow-time columns kept
  int kernel_half_width = 1;           // 1 -> 3x3 mean filter with weight 1/9
  double rm_threshold = 0.75;          // keep pixels >= this after normalization

  bool operator==(const PreprocConfig&) const = default;
};

struct RadonConfig {
  double theta_step = 1.0;             // projection angle grid, degrees
  double peak_min_sep_theta_deg = 5.0; // peak suppression window, degrees
  int peak_min_sep_offset_bins = 5;    // peak suppression window, offset bins
  double peak_min_rel_height = 0.5;    // peaks must reach this fraction of the max
  int max_peaks = 6;

  // Slopes closer than half a grid step are indistinguishable; below this the
  // intersection of two lines is numerically meaningless.
  double slope_epsilon() const {
    return std::tan(0.5 * theta_step * std::numbers::pi / 180.0);
  }

  bool operator==(const RadonConfig&) const = default;
};

struct PbcConfig {
  double band_pos_lo = 20.0;    // Hz
  double band_pos_hi = 270.0;   // Hz
  double band_neg_lo = -270.0;  // Hz
  double band_neg_hi = -20.0;   // Hz
  std::size_t ma_window = 5;    // moving-average length, frames
  double rel_threshold = 0.03;  // fraction of the curve's dynamic range
  double min_span_s = 0.5;      // discard shorter activity spans, seconds
  std::size_t gap_merge = 0;    // merge spans closer than this many frames; 0 = ma_window

  std::size_t gap_merge_frames() const { return gap_merge == 0 ? ma_window : gap_merge; }

  bool operator==(const PbcConfig&) const = default;
};

struct SegmenterConfig {
  double slope_floor = 0.1;  // |physical slope| below this counts as in-place, m/s

  bool operator==(const SegmenterConfig&) const = default;
};

struct PipelineConfig {
  PreprocConfig preproc;
  RadonConfig radon;
  StftParams stft;
  PbcConfig pbc;
  SegmenterConfig segmenter;

  void validate() const;  // throws ConfigError with the offending key and bounds

  bool operator==(const PipelineConfig&) const = default;
};

// Text form used by config files, the run report snapshot, and round-trips.
std::string serialize_config(const PipelineConfig& config);
PipelineConfig parse_config_text(const std::string& text, const std::string& source_name);

}  // namespace radseg
