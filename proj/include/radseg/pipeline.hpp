#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radseg/config.hpp"
#include "radseg/core.hpp"
#include "radseg/microdoppler.hpp"
#include "radseg/radon.hpp"
#include "radseg/rangemap.hpp"
#include "radseg/segmenter.hpp"

namespace radseg {

// Everything the micro-Doppler pass produced for one in-place line.
struct InPlaceAnalysis {
  std::size_t line_index = 0;   // into AnalysisResult::lines
  std::size_t pulse_begin = 0;  // analysis window, pulses, [begin, end)
  std::size_t pulse_end = 0;
  std::size_t bin_lo = 0;       // range mask, cube bins, inclusive
  std::size_t bin_hi = 0;
  Spectrogram spec;
  PowerCurve pbc;               // smoothed curve the spans came from
  double threshold = 0.0;
  std::vector<ActivitySpan> spans;
};

// Full state of one analysis pass, stage by stage.
struct AnalysisResult {
  RangeMapImage raw_db;      // empty when keep_stage_images = false
  RangeMapImage normalized;  // empty when keep_stage_images = false
  RangeMapImage downsampled;
  RangeMapImage filtered;
  RangeMapImage thresholded;
  RadonImage radon;
  std::vector<RadonPeak> peaks;
  std::vector<LineModel> lines;              // ordered, spans clipped
  std::vector<TransitionPoint> transitions;  // lines.size() - 1 of them
  Spectrogram overview;                      // whole recording, all bins; may be empty
  std::vector<InPlaceAnalysis> in_place;
  Timeline timeline;
  double observation_s = 0.0;
};

// Runs rangemap -> radon -> (per in-place line) microdoppler -> segmenter on a
// cube already in memory.  Failures are rethrown as StageError tagged with the
// stage that raised them.  keep_stage_images = false drops the two full-rate
// images to save memory; the downsampled stages are always kept.
AnalysisResult analyze_cube(const RadarCube& cube, const PipelineConfig& config,
                            bool keep_stage_images = true);

struct RunReport {
  std::string cube_path;
  std::size_t cube_bins = 0;
  std::size_t cube_pulses = 0;
  double prf = 0.0;
  double range_resolution = 0.0;
  double range_offset = 0.0;
  PipelineConfig parameters;          // the config actually used
  AnalysisResult analysis;            // timeline and transitions live here
  std::vector<ActivitySpan> spans;    // all activity spans, line order
  std::vector<std::string> artifact_paths;  // files written by the run
};

// Loads the cube (stage "ingest") and config (empty config_path = defaults),
// analyzes, and writes timeline.csv, report.txt and config_used.txt into
// out_dir; dump_stages adds the stage images, the projection accumulator and
// peak list, and per-line spectrogram / burst-curve dumps.  On failure every
// file written so far is removed before the error propagates.
RunReport run_pipeline(const std::string& cube_path, const std::string& config_path,
                       const std::string& out_dir, bool dump_stages = false);

// Key/value text form of a report (the content of report.txt).
std::string report_to_text(const RunReport& report);

// Static plots: every kept range-map stage and the projection accumulator as
// PGM, the overview spectrogram as PGM with detected transitions marked as
// bright columns, and each in-place burst curve as an SVG with the threshold
// line and span boxes.  Returns the files written.  An empty timeline just
// means no overlays.
std::vector<std::string> render_plots(const RunReport& report, const std::string& out_dir);

// Generates a cube from a scenario document and writes it (payload + header)
// plus a "<out_path>.truth" ground-truth sidecar.  Returns the files written.
std::vector<std::string> synth_to_files(const std::string& spec_path, std::uint64_t seed,
                                        const std::string& out_path);

}  // namespace radseg
