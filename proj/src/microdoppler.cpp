#include "radseg/microdoppler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radseg/errors.hpp"
#include "radseg/fft.hpp"

namespace radseg {

namespace {

std::vector<double> window_weights(WindowKind kind, std::size_t len) {
  std::vector<double> w(len, 1.0);
  const double n = static_cast<double>(len);
  switch (kind) {
    case WindowKind::hann:
      for (std::size_t i = 0; i < len; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
      break;
    case WindowKind::hamming:
      for (std::size_t i = 0; i < len; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
      break;
    case WindowKind::rect:
      break;
  }
  return w;
}

}  // namespace

Spectrogram spectrogram(const RadarCube& cube, std::size_t pulse_begin,
                        std::size_t pulse_end, const StftParams& params,
                        std::optional<std::pair<std::size_t, std::size_t>> range_mask) {
  if (cube.samples.empty()) throw EmptyInputError("spectrogram: empty cube");
  if (!(cube.prf > 0.0)) throw DataError("spectrogram: cube prf must be positive");
  if (pulse_end > cube.num_pulses() || pulse_begin >= pulse_end)
    throw SizeError("spectrogram: pulse span [" + std::to_string(pulse_begin) + ", " +
                    std::to_string(pulse_end) + ") not inside cube with " +
                    std::to_string(cube.num_pulses()) + " pulses");

  const StftParams resolved = params.resolved(cube.prf);
  const std::size_t span = pulse_end - pulse_begin;
  if (resolved.window_len < 2)
    throw ConfigError("spectrogram: window must hold at least 2 pulses");
  if (resolved.window_len > span)
    throw SizeError("spectrogram: window of " + std::to_string(resolved.window_len) +
                    " pulses does not fit in a span of " + std::to_string(span));

  std::size_t bin_lo = 0;
  std::size_t bin_hi = cube.num_bins() - 1;
  if (range_mask) {
    bin_lo = range_mask->first;
    bin_hi = range_mask->second;
    if (bin_lo > bin_hi || bin_hi >= cube.num_bins())
      throw SizeError("spectrogram: range mask [" + std::to_string(bin_lo) + ", " +
                      std::to_string(bin_hi) + "] not inside cube with " +
                      std::to_string(cube.num_bins()) + " bins");
  }

  std::vector<std::complex<double>> signal(span);
  for (std::size_t r = bin_lo; r <= bin_hi; ++r) {
    const std::complex<float>* row = cube.samples.row_ptr(r);
    for (std::size_t t = 0; t < span; ++t)
      signal[t] += std::complex<double>(row[pulse_begin + t]);
  }

  const std::size_t W = resolved.window_len;
  const std::size_t hop = resolved.hop;
  const std::size_t n_frames = (span - W) / hop + 1;
  const std::size_t nfft = next_power_of_two(W);
  const std::size_t half = nfft / 2;
  const std::size_t n_bins = nfft - 1;  // drop the lone -Nyquist bin

  Spectrogram out;
  out.params = resolved;
  out.frame_dt = static_cast<double>(hop) / cube.prf;
  out.power = MatD(n_bins, n_frames);
  out.freq_axis.resize(n_bins);
  out.frame_times.resize(n_frames);
  const double df = cube.prf / static_cast<double>(nfft);
  for (std::size_t i = 0; i < n_bins; ++i)
    out.freq_axis[i] = (static_cast<double>(i) - static_cast<double>(half - 1)) * df;

  const std::vector<double> w = window_weights(resolved.window_kind, W);
  std::vector<std::complex<double>> frame(nfft);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t start = f * hop;
    out.frame_times[f] =
        (static_cast<double>(pulse_begin + start) + static_cast<double>(W) / 2.0) / cube.prf;
    std::fill(frame.begin(), frame.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < W; ++i) frame[i] = signal[start + i] * w[i];
    fft_inplace(frame);
    for (std::size_t i = 0; i < n_bins; ++i) {
      const long k_signed = static_cast<long>(i) - static_cast<long>(half - 1);
      const std::size_t k =
          k_signed >= 0 ? static_cast<std::size_t>(k_signed)
                        : static_cast<std::size_t>(k_signed + static_cast<long>(nfft));
      out.power(i, f) = std::norm(frame[k]);
    }
  }
  return out;
}

PowerCurve power_burst_curve(const Spectrogram& spec, std::pair<double, double> band_pos,
                             std::pair<double, double> band_neg) {
  if (spec.power.empty()) throw EmptyInputError("power_burst_curve: empty spectrogram");
  auto check_band = [&](std::pair<double, double> band, const char* name) {
    if (!(band.first < band.second))
      throw ConfigError(std::string("power_burst_curve: ") + name +
                        " band is empty (lo >= hi)");
    if (band.first <= 0.0 && band.second >= 0.0)
      throw ConfigError(std::string("power_burst_curve: ") + name +
                        " band covers 0 Hz; the static return must stay excluded");
    if (band.first < spec.freq_axis.front() || band.second > spec.freq_axis.back())
      throw ConfigError(std::string("power_burst_curve: ") + name +
                        " band exceeds the Doppler axis [" +
                        std::to_string(spec.freq_axis.front()) + ", " +
                        std::to_string(spec.freq_axis.back()) + "] Hz");
  };
  check_band(band_pos, "positive");
  check_band(band_neg, "negative");

  std::vector<std::size_t> bins;
  for (std::size_t i = 0; i < spec.freq_axis.size(); ++i) {
    const double f = spec.freq_axis[i];
    const bool in_pos = f >= band_pos.first && f <= band_pos.second;
    const bool in_neg = f >= band_neg.first && f <= band_neg.second;
    if (in_pos || in_neg) bins.push_back(i);
  }

  PowerCurve out;
  out.frame_times = spec.frame_times;
  out.frame_dt = spec.frame_dt;
  out.values.assign(spec.power.cols(), 0.0);
  for (std::size_t f = 0; f < spec.power.cols(); ++f) {
    double acc = 0.0;
    for (std::size_t i : bins) acc += spec.power(i, f);
    out.values[f] = acc;
  }
  return out;
}

PowerCurve smooth_pbc(const PowerCurve& pbc, std::size_t w) {
  if (pbc.values.empty()) throw EmptyInputError("smooth_pbc: empty curve");
  if (w < 1) throw ConfigError("smooth_pbc: window must be >= 1 frames");

  PowerCurve out = pbc;
  out.filtered = true;
  for (std::size_t i = 0; i < pbc.values.size(); ++i) {
    const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
    double acc = 0.0;
    for (std::size_t j = lo; j <= i; ++j) acc += pbc.values[j];
    out.values[i] = acc / static_cast<double>(i - lo + 1);
  }
  return out;
}

double pbc_threshold(const PowerCurve& pbc, double rel_threshold) {
  if (pbc.values.empty()) throw EmptyInputError("pbc_threshold: empty curve");
  const auto [lo_it, hi_it] = std::minmax_element(pbc.values.begin(), pbc.values.end());
  return *lo_it + rel_threshold * (*hi_it - *lo_it);
}

std::vector<ActivitySpan> segment_pbc(const PowerCurve& pbc, double rel_threshold,
                                      double min_span_s, std::size_t gap_merge) {
  if (pbc.values.empty()) throw EmptyInputError("segment_pbc: empty curve");
  if (!pbc.filtered) throw Error("segment_pbc expects a smoothed curve");

  const auto [lo_it, hi_it] = std::minmax_element(pbc.values.begin(), pbc.values.end());
  if (*lo_it == *hi_it)
    throw NoActivityError("segment_pbc: flat power curve, nothing to segment");
  const double thresh = *lo_it + rel_threshold * (*hi_it - *lo_it);

  struct Run {
    std::size_t first, last;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < pbc.values.size(); ++i) {
    if (pbc.values[i] < thresh) continue;
    if (!runs.empty() && runs.back().last + 1 == i)
      runs.back().last = i;
    else
      runs.push_back({i, i});
  }

  // Gaps shorter than the smoothing window are filtering artifacts, not real
  // activity boundaries; close them before the length cut.
  std::vector<Run> merged;
  for (const Run& run : runs) {
    if (!merged.empty() && run.first - merged.back().last - 1 < gap_merge)
      merged.back().last = run.last;
    else
      merged.push_back(run);
  }

  std::vector<ActivitySpan> spans;
  for (const Run& run : merged) {
    const double duration =
        static_cast<double>(run.last - run.first + 1) * pbc.frame_dt;
    if (duration + 1e-9 < min_span_s) continue;
    ActivitySpan span;
    span.frame_begin = run.first;
    span.frame_end = run.last;
    span.start_s = pbc.frame_times[run.first];
    span.end_s = pbc.frame_times[run.last] + pbc.frame_dt;
    span.peak_power = *std::max_element(pbc.values.begin() + static_cast<long>(run.first),
                                        pbc.values.begin() + static_cast<long>(run.last) + 1);
    spans.push_back(span);
  }
  return spans;
}

}  // namespace radseg
