#include "radseg/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "kv.hpp"
#include "radseg/errors.hpp"

namespace radseg {

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void require(bool ok, const std::string& key, const std::string& bounds,
             const std::string& value) {
  if (!ok)
    throw ConfigError("config key '" + key + "' = " + value + " out of range, expected " +
                      bounds);
}

void require(bool ok, const std::string& key, const std::string& bounds, double value) {
  require(ok, key, bounds, format_double(value));
}

}  // namespace

std::string window_kind_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::rect: return "rect";
  }
  return "hann";
}

WindowKind window_kind_from_name(const std::string& name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "rect") return WindowKind::rect;
  throw ConfigError("config key 'stft.window_kind' = " + name +
                    " out of range, expected one of hann, hamming, rect");
}

void PipelineConfig::validate() const {
  require(std::isfinite(preproc.db_floor), "preproc.db_floor", "a finite value",
          preproc.db_floor);
  require(preproc.downsample_rows >= 1, "preproc.downsample_rows", ">= 1",
          static_cast<double>(preproc.downsample_rows));
  require(preproc.downsample_cols >= 1, "preproc.downsample_cols", ">= 1",
          static_cast<double>(preproc.downsample_cols));
  require(preproc.kernel_half_width >= 0, "preproc.kernel_half_width", ">= 0",
          static_cast<double>(preproc.kernel_half_width));
  require(preproc.rm_threshold > 0.0 && preproc.rm_threshold <= 1.0, "preproc.rm_threshold",
          "(0, 1]", preproc.rm_threshold);

  require(radon.theta_step > 0.0 && radon.theta_step <= 90.0, "radon.theta_step",
          "(0, 90] degrees", radon.theta_step);
  require(radon.peak_min_sep_theta_deg >= 0.0, "radon.peak_min_sep_theta_deg", ">= 0",
          radon.peak_min_sep_theta_deg);
  require(radon.peak_min_sep_offset_bins >= 0, "radon.peak_min_sep_offset_bins", ">= 0",
          static_cast<double>(radon.peak_min_sep_offset_bins));
  require(radon.peak_min_rel_height > 0.0 && radon.peak_min_rel_height <= 1.0,
          "radon.peak_min_rel_height", "(0, 1]", radon.peak_min_rel_height);
  require(radon.max_peaks >= 1, "radon.max_peaks", ">= 1",
          static_cast<double>(radon.max_peaks));

  require(pbc.band_pos_lo < pbc.band_pos_hi, "pbc.band_pos_lo",
          "< pbc.band_pos_hi", pbc.band_pos_lo);
  require(pbc.band_neg_lo < pbc.band_neg_hi, "pbc.band_neg_lo",
          "< pbc.band_neg_hi", pbc.band_neg_lo);
  require(pbc.ma_window >= 1, "pbc.ma_window", ">= 1",
          static_cast<double>(pbc.ma_window));
  require(pbc.rel_threshold > 0.0 && pbc.rel_threshold < 1.0, "pbc.rel_threshold", "(0, 1)",
          pbc.rel_threshold);
  require(pbc.min_span_s >= 0.0, "pbc.min_span_s", ">= 0", pbc.min_span_s);

  require(segmenter.slope_floor >= 0.0, "segmenter.slope_floor", ">= 0 m/s",
          segmenter.slope_floor);
}

std::string serialize_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "preproc.db_floor = " << format_double(c.preproc.db_floor) << "\n";
  out << "preproc.downsample_rows = " << c.preproc.downsample_rows << "\n";
  out << "preproc.downsample_cols = " << c.preproc.downsample_cols << "\n";
  out << "preproc.kernel_half_width = " << c.preproc.kernel_half_width << "\n";
  out << "preproc.rm_threshold = " << format_double(c.preproc.rm_threshold) << "\n";
  out << "radon.theta_step = " << format_double(c.radon.theta_step) << "\n";
  out << "radon.peak_min_sep_theta_deg = " << format_double(c.radon.peak_min_sep_theta_deg)
      << "\n";
  out << "radon.peak_min_sep_offset_bins = " << c.radon.peak_min_sep_offset_bins << "\n";
  out << "radon.peak_min_rel_height = " << format_double(c.radon.peak_min_rel_height)
      << "\n";
  out << "radon.max_peaks = " << c.radon.max_peaks << "\n";
  out << "stft.window_len = " << c.stft.window_len << "\n";
  out << "stft.hop = " << c.stft.hop << "\n";
  out << "stft.window_kind = " << window_kind_name(c.stft.window_kind) << "\n";
  out << "pbc.band_pos_lo = " << format_double(c.pbc.band_pos_lo) << "\n";
  out << "pbc.band_pos_hi = " << format_double(c.pbc.band_pos_hi) << "\n";
  out << "pbc.band_neg_lo = " << format_double(c.pbc.band_neg_lo) << "\n";
  out << "pbc.band_neg_hi = " << format_double(c.pbc.band_neg_hi) << "\n";
  out << "pbc.ma_window = " << c.pbc.ma_window << "\n";
  out << "pbc.rel_threshold = " << format_double(c.pbc.rel_threshold) << "\n";
  out << "pbc.min_span_s = " << format_double(c.pbc.min_span_s) << "\n";
  out << "pbc.gap_merge = " << c.pbc.gap_merge << "\n";
  out << "segmenter.slope_floor = " << format_double(c.segmenter.slope_floor) << "\n";
  return out.str();
}

PipelineConfig parse_config_text(const std::string& text, const std::string& source_name) {
  PipelineConfig c;
  std::vector<kv::Entry> entries;
  try {
    entries = kv::parse(text, source_name);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& entry : entries) {
    const std::string& key = entry.key;
    auto num = [&]() {
      try {
        return kv::to_double(entry, source_name);
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      }
    };
    auto integer = [&]() {
      try {
        return kv::to_int(entry, source_name);
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      }
    };
    auto size = [&]() {
      const long long v = integer();
      require(v >= 0, key, ">= 0", entry.value);
      return static_cast<std::size_t>(v);
    };

    if (key == "preproc.db_floor") c.preproc.db_floor = num();
    else if (key == "preproc.downsample_rows") c.preproc.downsample_rows = size();
    else if (key == "preproc.downsample_cols") c.preproc.downsample_cols = size();
    else if (key == "preproc.kernel_half_width")
      c.preproc.kernel_half_width = static_cast<int>(integer());
    else if (key == "preproc.rm_threshold") c.preproc.rm_threshold = num();
    else if (key == "radon.theta_step") c.radon.theta_step = num();
    else if (key == "radon.peak_min_sep_theta_deg") c.radon.peak_min_sep_theta_deg = num();
    else if (key == "radon.peak_min_sep_offset_bins")
      c.radon.peak_min_sep_offset_bins = static_cast<int>(integer());
    else if (key == "radon.peak_min_rel_height") c.radon.peak_min_rel_height = num();
    else if (key == "radon.max_peaks") c.radon.max_peaks = static_cast<int>(integer());
    else if (key == "stft.window_len") c.stft.window_len = size();
    else if (key == "stft.hop") c.stft.hop = size();
    else if (key == "stft.window_kind") c.stft.window_kind = window_kind_from_name(entry.value);
    else if (key == "pbc.band_pos_lo") c.pbc.band_pos_lo = num();
    else if (key == "pbc.band_pos_hi") c.pbc.band_pos_hi = num();
    else if (key == "pbc.band_neg_lo") c.pbc.band_neg_lo = num();
    else if (key == "pbc.band_neg_hi") c.pbc.band_neg_hi = num();
    else if (key == "pbc.ma_window") c.pbc.ma_window = size();
    else if (key == "pbc.rel_threshold") c.pbc.rel_threshold = num();
    else if (key == "pbc.min_span_s") c.pbc.min_span_s = num();
    else if (key == "pbc.gap_merge") c.pbc.gap_merge = size();
    else if (key == "segmenter.slope_floor") c.segmenter.slope_floor = num();
    else
      throw ConfigError("unknown config key '" + key + "' (" + source_name + ":" +
                        std::to_string(entry.line) + ")");
  }

  c.validate();
  return c;
}

}  // namespace radseg
