#include "radseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>

#include "radseg/errors.hpp"
#include "radseg/io.hpp"
#include "radseg/pnm.hpp"
#include "radseg/synth.hpp"

namespace radseg {

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// Pulse window of a line's valid span, end exclusive; the end column's own
// duration is included so its pulses are analyzed too.
std::pair<std::size_t, std::size_t> line_pulse_span(const LineModel& line,
                                                    const RadarCube& cube) {
  const double t0 = line.start_s();
  const double t1 = line.end_s() + line.geometry.col_to_seconds.step;
  const auto n = static_cast<long>(cube.num_pulses());
  const long p0 = std::clamp(std::lround(t0 * cube.prf), 0L, n);
  const long p1 = std::clamp(std::lround(t1 * cube.prf), p0, n);
  return {static_cast<std::size_t>(p0), static_cast<std::size_t>(p1)};
}

// Cube range bins occupied by the line's supporting pixels, padded by one
// downsampling stride plus the spread of the point response.
std::pair<std::size_t, std::size_t> line_range_mask(const LineModel& line,
                                                    const RangeMapImage& thresholded,
                                                    const RadarCube& cube) {
  const MatD& px = thresholded.pixels;
  long r_lo = static_cast<long>(px.rows());
  long r_hi = -1;
  const long c0 = std::clamp(std::lround(line.col_start), 0L, static_cast<long>(px.cols()) - 1);
  const long c1 = std::clamp(std::lround(line.col_end), c0, static_cast<long>(px.cols()) - 1);
  for (long c = c0; c <= c1; ++c) {
    const double at = line.row_at(static_cast<double>(c));
    const long lo = std::max(0L, static_cast<long>(std::ceil(at - 2.0)));
    const long hi = std::min(static_cast<long>(px.rows()) - 1,
                             static_cast<long>(std::floor(at + 2.0)));
    for (long r = lo; r <= hi; ++r) {
      if (px(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) > 0.0) {
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
      }
    }
  }
  const long max_bin = static_cast<long>(cube.num_bins()) - 1;
  if (r_hi < r_lo) return {0, static_cast<std::size_t>(max_bin)};

  const AxisMap& rows = thresholded.row_to_meters;
  auto to_bin = [&](long r) {
    return std::lround((rows.at(static_cast<double>(r)) - cube.range_offset) /
                       cube.range_resolution);
  };
  const long stride = std::lround(std::ceil(rows.step / cube.range_resolution));
  const long margin = stride + 2;
  const long b_lo = std::clamp(to_bin(r_lo) - margin, 0L, max_bin);
  const long b_hi = std::clamp(to_bin(r_hi) + margin, b_lo, max_bin);
  return {static_cast<std::size_t>(b_lo), static_cast<std::size_t>(b_hi)};
}

// Files written so far, removed as a group when the run fails midway.
class ArtifactTracker {
public:
  void add(const std::string& path) { paths_.push_back(path); }
  const std::vector<std::string>& paths() const { return paths_; }

  void discard_all() {
    for (const std::string& p : paths_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    paths_.clear();
  }

private:
  std::vector<std::string> paths_;
};

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string peaks_to_text(const std::vector<RadonPeak>& peaks) {
  std::string out = "peak_count = " + std::to_string(peaks.size()) + "\n";
  char buf[160];
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "peak.%zu = %.3f %.3f %.9g %s\n", i,
                  peaks[i].theta_deg, peaks[i].x_prime, peaks[i].value,
                  peaks[i].class_hint == PeakClass::horizontal ? "horizontal" : "sloped");
    out += buf;
  }
  return out;
}

std::string pbc_to_text(const PowerCurve& pbc) {
  std::string out;
  char buf[96];
  for (std::size_t i = 0; i < pbc.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f %.9g\n", pbc.frame_times[i], pbc.values[i]);
    out += buf;
  }
  return out;
}

// Burst curve as a standalone SVG: the smoothed curve, the detection threshold
// as a dashed line (its value in data-value), and one shaded box per span.
std::string pbc_to_svg(const InPlaceAnalysis& ip) {
  const PowerCurve& pbc = ip.pbc;
  const double left = 60.0, top = 16.0, width = 780.0, height = 260.0;
  const double t0 = pbc.frame_times.front();
  const double t1 = pbc.frame_times.back();
  const double t_scale = t1 > t0 ? width / (t1 - t0) : 0.0;
  double v_hi = 0.0;
  for (double v : pbc.values) v_hi = std::max(v_hi, v);
  if (v_hi <= 0.0) v_hi = 1.0;
  v_hi *= 1.05;

  auto x_of = [&](double t) { return left + (t - t0) * t_scale; };
  auto y_of = [&](double v) { return top + height * (1.0 - v / v_hi); };

  char buf[512];
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 860 320\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"860\" height=\"320\" fill=\"white\"/>\n";

  for (const ActivitySpan& span : ip.spans) {
    const double x = x_of(span.start_s);
    const double w = std::max(1.0, x_of(span.end_s) - x);
    std::snprintf(buf, sizeof(buf),
                  "<rect class=\"span\" x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                  "height=\"%.2f\" fill=\"#2ca02c\" fill-opacity=\"0.18\"/>\n",
                  x, top, w, height);
    svg += buf;
  }

  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pbc.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", i ? " " : "", x_of(pbc.frame_times[i]),
                  y_of(pbc.values[i]));
    svg += buf;
  }
  svg += "\"/>\n";

  const double ty = y_of(ip.threshold);
  std::snprintf(buf, sizeof(buf),
                "<line class=\"threshold\" data-value=\"%.9g\" x1=\"%.2f\" y1=\"%.2f\" "
                "x2=\"%.2f\" y2=\"%.2f\" stroke=\"#d62728\" stroke-width=\"1.5\" "
                "stroke-dasharray=\"6 3\"/>\n",
                ip.threshold, left, ty, left + width, ty);
  svg += buf;

  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                left, top + height, left + width, top + height);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                left, top, left, top + height);
  svg += buf;
  std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\">%.2f s</text>\n", left,
                top + height + 18.0, t0);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.2f s</text>\n",
                left + width, top + height + 18.0, t1);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.3g</text>\n", left - 6.0,
                top + 10.0, v_hi);
  svg += buf;
  svg += "<text x=\"430\" y=\"310\" text-anchor=\"middle\">band power over time</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace

AnalysisResult analyze_cube(const RadarCube& cube, const PipelineConfig& config,
                            bool keep_stage_images) {
  config.validate();

  AnalysisResult out;
  out.observation_s = cube.duration_s();

  stage("ingest", [&] {
    if (cube.samples.empty()) throw EmptyInputError("cube has no samples");
    if (!(cube.prf > 0.0)) throw DataError("cube prf must be positive");
    if (!(cube.range_resolution > 0.0))
      throw DataError("cube range resolution must be positive");
    return 0;
  });

  stage("rangemap", [&] {
    out.raw_db = magnitude_db(cube, config.preproc.db_floor);
    out.normalized = normalize_columns(out.raw_db);
    const std::size_t rows = std::min(config.preproc.downsample_rows, out.raw_db.pixels.rows());
    const std::size_t cols = std::min(config.preproc.downsample_cols, out.raw_db.pixels.cols());
    out.downsampled = downsample_slow_time(out.normalized, rows, cols);
    out.filtered = smooth(out.downsampled, config.preproc.kernel_half_width);
    out.thresholded = threshold(out.filtered, config.preproc.rm_threshold);
    if (!keep_stage_images) {
      out.raw_db = RangeMapImage{};
      out.normalized = RangeMapImage{};
    }
    return 0;
  });

  stage("radon", [&] {
    out.radon = radon_transform(out.thresholded, config.radon.theta_step);
    PeakParams params;
    params.min_sep_theta_deg = config.radon.peak_min_sep_theta_deg;
    params.min_sep_offset_bins = config.radon.peak_min_sep_offset_bins;
    params.min_rel_height = config.radon.peak_min_rel_height;
    params.max_peaks = config.radon.max_peaks;
    out.peaks = detect_peaks(out.radon, params);

    std::vector<LineModel> lines;
    for (const RadonPeak& peak : out.peaks)
      if (peak.theta_deg != 0.0) lines.push_back(peak_to_line(peak, out.radon.geometry));
    if (lines.empty())
      throw NoPeaksError("every projection peak describes a vertical trace");
    lines = order_lines_by_support(std::move(lines), out.thresholded);
    out.transitions = transition_times(lines, config.radon.slope_epsilon());
    out.lines = std::move(lines);
    return 0;
  });

  stage("microdoppler", [&] {
    const StftParams resolved = config.stft.resolved(cube.prf);
    if (cube.num_pulses() >= resolved.window_len && resolved.window_len >= 2)
      out.overview = spectrogram(cube, 0, cube.num_pulses(), config.stft);

    for (std::size_t i = 0; i < out.lines.size(); ++i) {
      const LineModel& line = out.lines[i];
      if (classify_slope(line, config.segmenter.slope_floor).motion_class !=
          MotionClass::in_place)
        continue;
      const auto [p0, p1] = line_pulse_span(line, cube);
      if (p1 - p0 < resolved.window_len) continue;  // too short to analyze

      InPlaceAnalysis ip;
      ip.line_index = i;
      ip.pulse_begin = p0;
      ip.pulse_end = p1;
      std::tie(ip.bin_lo, ip.bin_hi) = line_range_mask(line, out.thresholded, cube);
      ip.spec = spectrogram(cube, p0, p1, config.stft, std::pair{ip.bin_lo, ip.bin_hi});
      PowerCurve raw = power_burst_curve(ip.spec,
                                         {config.pbc.band_pos_lo, config.pbc.band_pos_hi},
                                         {config.pbc.band_neg_lo, config.pbc.band_neg_hi});
      ip.pbc = smooth_pbc(raw, config.pbc.ma_window);
      ip.threshold = pbc_threshold(ip.pbc, config.pbc.rel_threshold);
      ip.spans = segment_pbc(ip.pbc, config.pbc.rel_threshold, config.pbc.min_span_s,
                             config.pbc.gap_merge_frames());
      out.in_place.push_back(std::move(ip));
    }
    return 0;
  });

  stage("segmenter", [&] {
    std::vector<std::vector<ActivitySpan>> spans_per_line(out.lines.size());
    for (const InPlaceAnalysis& ip : out.in_place)
      spans_per_line[ip.line_index] = ip.spans;
    out.timeline = build_timeline(out.lines, out.transitions, spans_per_line,
                                  config.segmenter.slope_floor, out.observation_s);
    return 0;
  });

  return out;
}

std::string report_to_text(const RunReport& report) {
  const AnalysisResult& a = report.analysis;
  std::string out;
  out += "input = " + report.cube_path + "\n";
  out += "range_bins = " + std::to_string(report.cube_bins) + "\n";
  out += "pulses = " + std::to_string(report.cube_pulses) + "\n";
  out += "prf = " + fmt("%.9g", report.prf) + "\n";
  out += "range_resolution = " + fmt("%.9g", report.range_resolution) + "\n";
  out += "range_offset = " + fmt("%.9g", report.range_offset) + "\n";
  out += "duration_s = " + fmt("%.3f", a.observation_s) + "\n";

  out += "line_count = " + std::to_string(a.lines.size()) + "\n";
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    const LineModel& line = a.lines[i];
    const SlopeLabel label = classify_slope(line, report.parameters.segmenter.slope_floor);
    const std::string base = "line." + std::to_string(i);
    out += base + ".class = " + motion_class_name(label.motion_class) + "\n";
    out += base + ".direction = " + direction_name(label.direction) + "\n";
    out += base + ".slope_m_per_s = " + fmt("%.6f", label.slope_m_per_s) + "\n";
    out += base + ".theta_deg = " + fmt("%.3f", line.theta_src) + "\n";
    out += base + ".start_s = " + fmt("%.3f", line.start_s()) + "\n";
    out += base + ".end_s = " + fmt("%.3f", line.end_s()) + "\n";
  }

  out += "transition_count = " + std::to_string(a.transitions.size()) + "\n";
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    const std::string base = "transition." + std::to_string(i);
    out += base + ".time_s = " + fmt("%.3f", a.transitions[i].time_s) + "\n";
    out += base + ".range_m = " + fmt("%.3f", a.transitions[i].range_m) + "\n";
  }

  out += "span_count = " + std::to_string(report.spans.size()) + "\n";
  for (std::size_t i = 0; i < report.spans.size(); ++i) {
    const std::string base = "span." + std::to_string(i);
    out += base + ".start_s = " + fmt("%.3f", report.spans[i].start_s) + "\n";
    out += base + ".end_s = " + fmt("%.3f", report.spans[i].end_s) + "\n";
    out += base + ".peak_power = " + fmt("%.6g", report.spans[i].peak_power) + "\n";
  }

  const Timeline& tl = a.timeline;
  out += "segment_count = " + std::to_string(tl.segments.size()) + "\n";
  for (std::size_t i = 0; i < tl.segments.size(); ++i) {
    const MotionSegment& seg = tl.segments[i];
    const std::string base = "segment." + std::to_string(i);
    out += base + ".start_s = " + fmt("%.3f", seg.start_s) + "\n";
    out += base + ".end_s = " + fmt("%.3f", seg.end_s) + "\n";
    out += base + ".class = " + motion_class_name(seg.motion_class) + "\n";
    out += base + ".direction = " + direction_name(seg.direction) + "\n";
    out += base + ".slope_m_per_s = " + fmt("%.6f", seg.slope_m_per_s) + "\n";
    out += base + ".source = " + segment_source_name(seg.source) + "\n";
  }
  out += "coverage = " + fmt("%.4f", tl.coverage) + "\n";
  return out;
}

RunReport run_pipeline(const std::string& cube_path, const std::string& config_path,
                       const std::string& out_dir, bool dump_stages) {
  PipelineConfig config;
  if (!config_path.empty()) config = load_config(config_path);

  RadarCube cube;
  try {
    cube = load_radar_cube(cube_path);
  } catch (const Error& e) {
    throw StageError("ingest", e);
  }

  RunReport report;
  report.cube_path = cube_path;
  report.cube_bins = cube.num_bins();
  report.cube_pulses = cube.num_pulses();
  report.prf = cube.prf;
  report.range_resolution = cube.range_resolution;
  report.range_offset = cube.range_offset;
  report.parameters = config;
  report.analysis = analyze_cube(cube, config, true);
  for (const InPlaceAnalysis& ip : report.analysis.in_place)
    report.spans.insert(report.spans.end(), ip.spans.begin(), ip.spans.end());

  ensure_dir(out_dir);
  ArtifactTracker written;
  try {
    auto emit_text = [&](const std::string& name, const std::string& text) {
      const std::string path = join(out_dir, name);
      written.add(path);
      write_text_file(path, text);
    };
    emit_text("timeline.csv", timeline_to_csv(report.analysis.timeline));
    emit_text("report.txt", report_to_text(report));
    emit_text("config_used.txt", serialize_config(config));

    if (dump_stages) {
      const AnalysisResult& a = report.analysis;
      auto emit_stage = [&](const RangeMapImage& img) {
        if (img.pixels.empty()) return;
        const std::string path = join(out_dir, "rangemap_" + stage_name(img.stage) + ".pgm");
        written.add(path);
        write_rangemap_pgm(img, path);
      };
      emit_stage(a.raw_db);
      emit_stage(a.normalized);
      emit_stage(a.downsampled);
      emit_stage(a.filtered);
      emit_stage(a.thresholded);

      const std::string radon_path = join(out_dir, "radon.pgm");
      written.add(radon_path);
      write_radon_pgm(a.radon, radon_path);
      emit_text("radon_peaks.txt", peaks_to_text(a.peaks));

      for (std::size_t i = 0; i < a.in_place.size(); ++i) {
        const std::string spec_path =
            join(out_dir, "spectrogram_" + std::to_string(i) + ".pgm");
        written.add(spec_path);
        write_spectrogram_pgm(a.in_place[i].spec, spec_path);
        emit_text("pbc_" + std::to_string(i) + ".txt", pbc_to_text(a.in_place[i].pbc));
      }
    }
  } catch (...) {
    written.discard_all();
    throw;
  }

  report.artifact_paths = written.paths();
  return report;
}

std::vector<std::string> render_plots(const RunReport& report, const std::string& out_dir) {
  ensure_dir(out_dir);
  const AnalysisResult& a = report.analysis;
  ArtifactTracker written;
  try {
    auto emit_stage = [&](const RangeMapImage& img) {
      if (img.pixels.empty()) return;
      const std::string path =
          join(out_dir, "plot_rangemap_" + stage_name(img.stage) + ".pgm");
      written.add(path);
      write_rangemap_pgm(img, path);
    };
    emit_stage(a.raw_db);
    emit_stage(a.normalized);
    emit_stage(a.downsampled);
    emit_stage(a.filtered);
    emit_stage(a.thresholded);

    if (!a.radon.accum.empty()) {
      const std::string path = join(out_dir, "plot_radon.pgm");
      written.add(path);
      write_radon_pgm(a.radon, path);
    }

    if (!a.overview.power.empty()) {
      MatD img = spectrogram_image(a.overview);
      const std::vector<double>& times = a.overview.frame_times;
      for (const TransitionPoint& tp : a.transitions) {
        if (tp.time_s < times.front() - 0.5 * a.overview.frame_dt ||
            tp.time_s > times.back() + 0.5 * a.overview.frame_dt)
          continue;
        const double f = (tp.time_s - times.front()) / a.overview.frame_dt;
        const auto col = static_cast<std::size_t>(
            std::clamp(std::lround(f), 0L, static_cast<long>(img.cols()) - 1));
        for (std::size_t r = 0; r < img.rows(); ++r) img(r, col) = 1.0;
      }
      const std::string path = join(out_dir, "plot_spectrogram.pgm");
      written.add(path);
      write_pgm(img, path);
    }

    for (std::size_t i = 0; i < a.in_place.size(); ++i) {
      if (a.in_place[i].pbc.values.empty()) continue;
      const std::string path = join(out_dir, "plot_pbc_" + std::to_string(i) + ".svg");
      written.add(path);
      write_text_file(path, pbc_to_svg(a.in_place[i]));
    }
  } catch (...) {
    written.discard_all();
    throw;
  }
  return written.paths();
}

std::vector<std::string> synth_to_files(const std::string& spec_path, std::uint64_t seed,
                                        const std::string& out_path) {
  const ScenarioSpec spec = load_scenario(spec_path);
  auto [cube, truth] = synth_cube(spec, seed);

  ArtifactTracker written;
  try {
    written.add(out_path);
    written.add(cube_header_path(out_path));
    save_radar_cube(out_path, cube);
    const std::string truth_path = out_path + ".truth";
    written.add(truth_path);
    write_text_file(truth_path, serialize_ground_truth(truth));
  } catch (...) {
    written.discard_all();
    throw;
  }
  return written.paths();
}

}  // namespace radseg
