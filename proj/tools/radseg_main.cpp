#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "radseg/errors.hpp"
#include "radseg/io.hpp"
#include "radseg/pipeline.hpp"

namespace {

int exit_code_for(radseg::ErrorKind kind) {
  switch (kind) {
    case radseg::ErrorKind::config: return 2;
    case radseg::ErrorKind::data: return 3;
    case radseg::ErrorKind::processing: return 4;
  }
  return 4;
}

void print_report_summary(const radseg::RunReport& report) {
  const radseg::AnalysisResult& a = report.analysis;
  std::printf("lines: %zu  transitions: %zu  spans: %zu  segments: %zu  coverage: %.3f\n",
              a.lines.size(), a.transitions.size(), report.spans.size(),
              a.timeline.segments.size(), a.timeline.coverage);
  for (const std::string& path : report.artifact_paths) std::printf("wrote %s\n", path.c_str());
}

int cmd_run(const std::string& cube_path, const std::string& config_path,
            const std::string& out_dir, bool dump_stages, bool with_plots) {
  radseg::RunReport report = radseg::run_pipeline(cube_path, config_path, out_dir, dump_stages);
  print_report_summary(report);
  if (with_plots)
    for (const std::string& path : radseg::render_plots(report, out_dir))
      std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_synth(const std::string& spec_path, std::uint64_t seed, const std::string& out_path) {
  for (const std::string& path : radseg::synth_to_files(spec_path, seed, out_path))
    std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_plot(const std::string& cube_path, const std::string& config_path,
             const std::string& out_dir) {
  radseg::RunReport report = radseg::run_pipeline(cube_path, config_path, out_dir, false);
  for (const std::string& path : radseg::render_plots(report, out_dir))
    std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_inspect(const std::string& cube_path) {
  const radseg::RadarCube cube = radseg::load_radar_cube(cube_path);
  std::printf("file = %s\n", cube_path.c_str());
  std::printf("range_bins = %zu\n", cube.num_bins());
  std::printf("pulses = %zu\n", cube.num_pulses());
  std::printf("prf = %.9g\n", cube.prf);
  std::printf("range_resolution = %.9g\n", cube.range_resolution);
  std::printf("range_offset = %.9g\n", cube.range_offset);
  std::printf("duration_s = %.3f\n", cube.duration_s());
  std::printf("range_span_m = %.3f .. %.3f\n", cube.range_offset,
              cube.range_axis().at(static_cast<double>(cube.num_bins()) - 1.0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar activity segmentation: range-map line detection plus "
               "micro-Doppler burst analysis"};
  app.require_subcommand(1);

  std::string cube_path, config_path, out_dir = "out", spec_path, out_path;
  std::uint64_t seed = 1;
  bool dump_stages = false, with_plots = false;

  CLI::App* run = app.add_subcommand("run", "Segment a recording into a motion timeline");
  run->add_option("cube", cube_path, "Cube payload file (expects <cube>.hdr next to it)")
      ->required();
  run->add_option("--config", config_path, "Parameter file; omit for defaults");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--dump-stages", dump_stages, "Also write intermediate images and curves");
  run->add_flag("--plots", with_plots, "Also render the plot set");

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic recording");
  synth->add_option("scenario", spec_path, "Scenario document")->required();
  synth->add_option("--out", out_path, "Cube payload path to write")->required();
  synth->add_option("--seed", seed, "Noise seed");

  CLI::App* plot = app.add_subcommand("plot", "Analyze and render plots only");
  plot->add_option("cube", cube_path, "Cube payload file")->required();
  plot->add_option("--config", config_path, "Parameter file; omit for defaults");
  plot->add_option("--out", out_dir, "Output directory");

  CLI::App* inspect = app.add_subcommand("inspect", "Print a recording's header");
  inspect->add_option("cube", cube_path, "Cube payload file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(cube_path, config_path, out_dir, dump_stages, with_plots);
    if (synth->parsed()) return cmd_synth(spec_path, seed, out_path);
    if (plot->parsed()) return cmd_plot(cube_path, config_path, out_dir);
    if (inspect->parsed()) return cmd_inspect(cube_path);
  } catch (const radseg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
