#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "radseg/config.hpp"
#include "radseg/core.hpp"

namespace radseg {

// Two-sided Doppler spectrogram of a slow-time signal.  power is
// [freq bins x frames]; freq_axis is symmetric about 0 Hz (the asymmetric
// -Nyquist bin of the even-length transform is dropped), frame_times are the
// window centers in recording seconds.
struct Spectrogram {
  MatD power;
  std::vector<double> freq_axis;    // Hz, ascending
  std::vector<double> frame_times;  // s
  double frame_dt = 0.0;            // hop / prf, s
  StftParams params;                // resolved values actually used
};

// Slow-time signal = cube samples summed over range bins [bin_lo, bin_hi]
// (all bins when no mask is given), windowed frames of window_len pulses every
// hop pulses across [pulse_begin, pulse_end), power = |FFT|^2 zero-padded to
// the next power of two.
Spectrogram spectrogram(const RadarCube& cube, std::size_t pulse_begin,
                        std::size_t pulse_end, const StftParams& params,
                        std::optional<std::pair<std::size_t, std::size_t>> range_mask =
                            std::nullopt);

// Per-frame band power over the analysis window.
struct PowerCurve {
  std::vector<double> values;
  std::vector<double> frame_times;  // s
  double frame_dt = 0.0;
  bool filtered = false;
};

// Sum of spectrogram power over the two Doppler bands, per frame.  The bands
// are inclusive on bin centers and must exclude 0 Hz so the static return
// cannot leak into the curve.
PowerCurve power_burst_curve(const Spectrogram& spec, std::pair<double, double> band_pos,
                             std::pair<double, double> band_neg);

// Causal moving average over the last w values; the first w - 1 frames average
// over however many values exist.
PowerCurve smooth_pbc(const PowerCurve& pbc, std::size_t w);

// Segmentation threshold: min + rel_threshold * (max - min) of the curve.
double pbc_threshold(const PowerCurve& pbc, double rel_threshold);

// One in-place activity: a contiguous burst of band power.
struct ActivitySpan {
  double start_s = 0.0;
  double end_s = 0.0;
  double peak_power = 0.0;
  std::size_t frame_begin = 0;  // inclusive
  std::size_t frame_end = 0;    // inclusive
};

// Maximal runs of frames at or above the threshold become spans; runs separated
// by fewer than gap_merge frames are merged first, then spans shorter than
// min_span_s are discarded.  A flat curve has no burst structure to segment.
std::vector<ActivitySpan> segment_pbc(const PowerCurve& pbc, double rel_threshold,
                                      double min_span_s, std::size_t gap_merge);

}  // namespace radseg
