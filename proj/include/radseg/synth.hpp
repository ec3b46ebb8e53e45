#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "radseg/core.hpp"
#include "radseg/rangemap.hpp"

namespace radseg {

// Point-scatterer scenario player for a 24 GHz radar.  A walk moves the
// scatterer at constant speed (Doppler tone at 2 v / lambda); a still burst
// keeps the range fixed and injects a band-limited Doppler chirp on top of the
// static return.  The scatterer enters the scene with the first non-quiet
// event and stays: quiet time after that is a motionless person (static return
// only), while quiet time before it is an empty room.
enum class EventKind { walk, still_burst, quiet };

// Amplitude shaping of a burst: raised cosine over the whole span, or a flat
// top with short cosine ramps (sharper onsets, for boundary-accuracy checks).
enum class EnvelopeKind { raised_cosine, plateau };

struct ScenarioEvent {
  EventKind kind = EventKind::quiet;
  double duration_s = 0.0;
  double speed_m_per_s = 0.0;            // walk only, within +-3 m/s
  double band_lo_hz = 0.0;               // still_burst only
  double band_hi_hz = 0.0;
  double amplitude = 1.0;                // still_burst only, vs unit target return
  EnvelopeKind envelope = EnvelopeKind::raised_cosine;
};

struct ScenarioSpec {
  std::size_t num_range_bins = 128;
  std::size_t num_pulses = 0;            // 0 = derive from event durations
  double prf = 1000.0;                   // Hz
  double range_resolution = 0.06;        // m per bin
  double range_offset = 0.5;             // m
  double start_range_m = 7.5;            // scatterer range at t = 0
  double noise_db = 30.0;                // scatterer per-pulse power over noise power
  std::vector<ScenarioEvent> events;
};

constexpr double kCarrierFrequencyHz = 24.0e9;
constexpr double kSpeedOfLightMps = 299792458.0;
inline double carrier_wavelength_m() { return kSpeedOfLightMps / kCarrierFrequencyHz; }

// What the scenario actually contains, for scoring a pipeline run against it.
// Line parameters are in raw range-map coordinates (cube bins x pulses): m in
// rows per column, n in rows above the image center at the center column.
struct LineTruth {
  double m = 0.0;
  double n = 0.0;
  double theta_deg = 0.0;
  double x_prime = 0.0;
};

struct GroundTruth {
  std::vector<double> transition_times_s;                   // walk <-> rest boundaries
  std::vector<std::pair<double, double>> activity_spans_s;  // one per still burst
  std::vector<LineTruth> line_params;
};

// Deterministic: the same (spec, seed) yields bit-identical cubes.
std::pair<RadarCube, GroundTruth> synth_cube(const ScenarioSpec& spec, std::uint64_t seed);

// Anti-aliased straight traces on a zero background, stage = thresholded, unit
// axis maps.  Input lines are (m, n) pairs in the image's own coordinates.
std::pair<RangeMapImage, GroundTruth> synth_line_image(
    const std::vector<std::pair<double, double>>& lines, std::size_t rows,
    std::size_t cols, double amplitude = 1.0, double noise_sigma = 0.0,
    std::uint64_t seed = 0);

// Scenario documents are "key = value" text; repeated `event` keys list the
// timeline in order, e.g. `event = walk 15 -0.3`.
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source_name);
ScenarioSpec load_scenario(const std::string& path);

std::string serialize_ground_truth(const GroundTruth& truth);

}  // namespace radseg
