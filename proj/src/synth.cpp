#include "radseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "kv.hpp"
#include "radseg/errors.hpp"
#include "radseg/io.hpp"
#include "radseg/radon.hpp"

namespace radseg {

namespace {

constexpr double kMaxWalkSpeed = 3.0;  // m/s

// Cross-range body extent smears the return over a few bins.
constexpr int kProfileHalfWidth = 2;
constexpr double kProfileWeights[2 * kProfileHalfWidth + 1] = {0.55, 0.85, 1.0, 0.85, 0.55};

// Box-Muller on a seeded engine; deterministic across runs of the same binary.
class Gaussian {
public:
  explicit Gaussian(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// raised_cosine peaks mid-burst and fades to zero at both ends; plateau holds
// full amplitude with cosine ramps over the first and last 15% (capped at
// 0.25 s), so the band power rises and falls within a couple of analysis
// frames.
double burst_envelope(EnvelopeKind kind, double t, double duration, double prf) {
  const double edge = std::min(t, duration - t);
  if (edge <= 0.0) return 0.0;
  if (kind == EnvelopeKind::raised_cosine)
    return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t / duration));
  double ramp = std::min(0.15 * duration, 0.25);
  ramp = std::max(ramp, 2.0 / prf);
  if (edge >= ramp) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * edge / ramp));
}

void validate_scenario(const ScenarioSpec& spec) {
  if (spec.num_range_bins < 1)
    throw ConfigError("scenario: range_bins must be >= 1");
  if (!(spec.prf > 0.0)) throw ConfigError("scenario: prf must be positive");
  if (!(spec.range_resolution > 0.0))
    throw ConfigError("scenario: range_resolution must be positive");
  if (spec.events.empty()) throw ConfigError("scenario: no events");

  const double range_max =
      spec.range_offset + spec.range_resolution * static_cast<double>(spec.num_range_bins - 1);
  double range = spec.start_range_m;
  for (std::size_t i = 0; i < spec.events.size(); ++i) {
    const ScenarioEvent& ev = spec.events[i];
    if (!(ev.duration_s > 0.0))
      throw ConfigError("scenario: event " + std::to_string(i) +
                        " must have a positive duration");
    if (ev.kind == EventKind::walk) {
      if (std::abs(ev.speed_m_per_s) > kMaxWalkSpeed)
        throw ConfigError("scenario: event " + std::to_string(i) + " speed " +
                          std::to_string(ev.speed_m_per_s) + " outside +-" +
                          std::to_string(kMaxWalkSpeed) + " m/s");
      range += ev.speed_m_per_s * ev.duration_s;
    }
    if (ev.kind == EventKind::still_burst) {
      if (!(ev.band_lo_hz < ev.band_hi_hz))
        throw ConfigError("scenario: event " + std::to_string(i) + " has an empty band");
      if (std::abs(ev.band_lo_hz) > spec.prf / 2.0 ||
          std::abs(ev.band_hi_hz) > spec.prf / 2.0)
        throw ConfigError("scenario: event " + std::to_string(i) +
                          " band exceeds +-prf/2");
      if (!(ev.amplitude > 0.0))
        throw ConfigError("scenario: event " + std::to_string(i) +
                          " amplitude must be positive");
    }
    if (range < spec.range_offset || range > range_max)
      throw ConfigError("scenario: target leaves the observed range span after event " +
                        std::to_string(i));
  }
}

struct EventWindow {
  const ScenarioEvent* event;
  double t_begin;
  double t_end;
  double range_begin;  // scatterer range entering the event
  bool present;        // a non-quiet event has already introduced the scatterer
};

std::vector<EventWindow> lay_out_events(const ScenarioSpec& spec) {
  std::vector<EventWindow> windows;
  double t = 0.0;
  double range = spec.start_range_m;
  bool present = false;
  for (const ScenarioEvent& ev : spec.events) {
    present = present || ev.kind != EventKind::quiet;
    EventWindow w{&ev, t, t + ev.duration_s, range, present};
    windows.push_back(w);
    t = w.t_end;
    if (ev.kind == EventKind::walk) range += ev.speed_m_per_s * ev.duration_s;
  }
  return windows;
}

GroundTruth derive_truth(const ScenarioSpec& spec, const std::vector<EventWindow>& windows,
                         std::size_t num_pulses) {
  GroundTruth truth;

  for (const EventWindow& w : windows)
    if (w.event->kind == EventKind::still_burst)
      truth.activity_spans_s.emplace_back(w.t_begin, w.t_end);

  // Collapse the timeline into runs of walking vs resting.
  struct Run {
    bool walking;
    double t_begin, t_end;
    double range_begin;
    double speed;
    bool has_target;  // false only for quiet time before the scatterer appears
  };
  std::vector<Run> runs;
  for (const EventWindow& w : windows) {
    const bool walking = w.event->kind == EventKind::walk;
    if (!runs.empty() && runs.back().walking == walking) {
      runs.back().t_end = w.t_end;
      runs.back().has_target |= w.present;
    } else {
      runs.push_back({walking, w.t_begin, w.t_end, w.range_begin,
                      walking ? w.event->speed_m_per_s : 0.0, w.present});
    }
  }

  // A transition needs a visible trace on both sides of the boundary.
  for (std::size_t i = 0; i + 1 < runs.size(); ++i)
    if (runs[i].has_target && runs[i + 1].has_target)
      truth.transition_times_s.push_back(runs[i].t_end);

  const double cy = std::floor((static_cast<double>(spec.num_range_bins) - 1.0) / 2.0);
  const double cx = std::floor((static_cast<double>(num_pulses) - 1.0) / 2.0);
  for (const Run& run : runs) {
    if (!run.has_target) continue;
    LineTruth line;
    const double row0 = (run.range_begin - spec.range_offset) / spec.range_resolution;
    const double col0 = run.t_begin * spec.prf;
    line.m = run.walking ? run.speed / spec.range_resolution / spec.prf : 0.0;
    line.n = cy - (row0 + line.m * (cx - col0));
    line.theta_deg = 90.0 - std::atan(line.m) * 180.0 / std::numbers::pi;
    line.x_prime = line.n * deg_sin(line.theta_deg);
    truth.line_params.push_back(line);
  }
  return truth;
}

}  // namespace

std::pair<RadarCube, GroundTruth> synth_cube(const ScenarioSpec& spec, std::uint64_t seed) {
  validate_scenario(spec);

  const std::vector<EventWindow> windows = lay_out_events(spec);
  const double total_s = windows.back().t_end;
  const auto needed_pulses =
      static_cast<std::size_t>(std::ceil(total_s * spec.prf - 1e-9));
  std::size_t num_pulses = spec.num_pulses;
  if (num_pulses == 0)
    num_pulses = needed_pulses;
  else if (needed_pulses > num_pulses)
    throw SizeError("scenario: events need " + std::to_string(needed_pulses) +
                    " pulses, spec allows " + std::to_string(num_pulses));

  RadarCube cube;
  cube.prf = spec.prf;
  cube.range_resolution = spec.range_resolution;
  cube.range_offset = spec.range_offset;
  cube.samples = MatCF(spec.num_range_bins, num_pulses);

  // Noise first, in a scenario-independent order.
  const double noise_power = std::pow(10.0, -spec.noise_db / 10.0);
  const double noise_sigma = std::sqrt(noise_power / 2.0);
  Gaussian rng(seed);
  for (auto& sample : cube.samples.data())
    sample = {static_cast<float>(noise_sigma * rng.next()),
              static_cast<float>(noise_sigma * rng.next())};

  const double lambda = carrier_wavelength_m();
  const long max_bin = static_cast<long>(spec.num_range_bins) - 1;
  for (const EventWindow& w : windows) {
    if (!w.present) continue;  // empty room until the scatterer's first event
    const auto p_begin = static_cast<std::size_t>(std::llround(w.t_begin * spec.prf));
    const auto p_end = std::min(
        num_pulses, static_cast<std::size_t>(std::llround(w.t_end * spec.prf)));
    for (std::size_t p = p_begin; p < p_end; ++p) {
      const double tau = static_cast<double>(p) / spec.prf - w.t_begin;
      const double range = w.event->kind == EventKind::walk
                               ? w.range_begin + w.event->speed_m_per_s * tau
                               : w.range_begin;
      const double carrier_phase = 4.0 * std::numbers::pi * range / lambda;
      std::complex<double> ret = std::polar(1.0, carrier_phase);
      if (w.event->kind == EventKind::still_burst) {
        const double dur = w.event->duration_s;
        const double sweep = (w.event->band_hi_hz - w.event->band_lo_hz) / dur;
        const double burst_phase =
            2.0 * std::numbers::pi * (w.event->band_lo_hz * tau + 0.5 * sweep * tau * tau);
        ret += w.event->amplitude * burst_envelope(w.event->envelope, tau, dur, spec.prf) *
               std::polar(1.0, carrier_phase + burst_phase);
      }
      const long bin = std::lround((range - spec.range_offset) / spec.range_resolution);
      for (int d = -kProfileHalfWidth; d <= kProfileHalfWidth; ++d) {
        const long b = bin + d;
        if (b < 0 || b > max_bin) continue;
        const std::complex<double> add = kProfileWeights[d + kProfileHalfWidth] * ret;
        auto& cell = cube.samples(static_cast<std::size_t>(b), p);
        cell += std::complex<float>(static_cast<float>(add.real()),
                                    static_cast<float>(add.imag()));
      }
    }
  }

  return {std::move(cube), derive_truth(spec, windows, num_pulses)};
}

std::pair<RangeMapImage, GroundTruth> synth_line_image(
    const std::vector<std::pair<double, double>>& lines, std::size_t rows,
    std::size_t cols, double amplitude, double noise_sigma, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw SizeError("synth_line_image: empty dimensions");

  RangeMapImage img;
  img.pixels = MatD(rows, cols);
  img.stage = Stage::thresholded;

  const double cy = std::floor((static_cast<double>(rows) - 1.0) / 2.0);
  const double cx = std::floor((static_cast<double>(cols) - 1.0) / 2.0);

  auto deposit = [&](double rf, std::size_t c) {
    const double r0 = std::floor(rf);
    const double frac = rf - r0;
    const long lo = static_cast<long>(r0);
    if (lo >= 0 && lo < static_cast<long>(rows))
      img.pixels(static_cast<std::size_t>(lo), c) += amplitude * (1.0 - frac);
    if (frac > 0.0 && lo + 1 >= 0 && lo + 1 < static_cast<long>(rows))
      img.pixels(static_cast<std::size_t>(lo + 1), c) += amplitude * frac;
  };
  auto deposit_col = [&](double cf, std::size_t r) {
    const double c0 = std::floor(cf);
    const double frac = cf - c0;
    const long lo = static_cast<long>(c0);
    if (lo >= 0 && lo < static_cast<long>(cols))
      img.pixels(r, static_cast<std::size_t>(lo)) += amplitude * (1.0 - frac);
    if (frac > 0.0 && lo + 1 >= 0 && lo + 1 < static_cast<long>(cols))
      img.pixels(r, static_cast<std::size_t>(lo + 1)) += amplitude * frac;
  };

  GroundTruth truth;
  for (const auto& [m, n] : lines) {
    if (std::abs(m) <= 1.0) {
      for (std::size_t c = 0; c < cols; ++c)
        deposit(cy - n + m * (static_cast<double>(c) - cx), c);
    } else {
      for (std::size_t r = 0; r < rows; ++r)
        deposit_col(cx + (static_cast<double>(r) - cy + n) / m, r);
    }
    LineTruth line;
    line.m = m;
    line.n = n;
    line.theta_deg = 90.0 - std::atan(m) * 180.0 / std::numbers::pi;
    line.x_prime = n * deg_sin(line.theta_deg);
    truth.line_params.push_back(line);
  }

  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    const auto& [ma, na] = lines[i];
    const auto& [mb, nb] = lines[i + 1];
    if (ma == mb) continue;
    truth.transition_times_s.push_back(cx - (nb - na) / (ma - mb));
  }

  if (noise_sigma > 0.0) {
    Gaussian rng(seed);
    for (double& v : img.pixels.data()) v = std::max(0.0, v + noise_sigma * rng.next());
  }
  return {std::move(img), std::move(truth)};
}

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source_name) {
  ScenarioSpec spec;
  std::vector<kv::Entry> entries;
  try {
    entries = kv::parse(text, source_name);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& entry : entries) {
    auto num = [&]() {
      try {
        return kv::to_double(entry, source_name);
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      }
    };
    const std::string& key = entry.key;
    if (key == "range_bins") spec.num_range_bins = static_cast<std::size_t>(num());
    else if (key == "pulses") spec.num_pulses = static_cast<std::size_t>(num());
    else if (key == "prf") spec.prf = num();
    else if (key == "range_resolution") spec.range_resolution = num();
    else if (key == "range_offset") spec.range_offset = num();
    else if (key == "start_range_m") spec.start_range_m = num();
    else if (key == "noise_db") spec.noise_db = num();
    else if (key == "event") {
      std::istringstream fields(entry.value);
      std::string kind;
      fields >> kind;
      ScenarioEvent ev;
      bool ok = true;
      if (kind == "walk") {
        ev.kind = EventKind::walk;
        ok = static_cast<bool>(fields >> ev.duration_s >> ev.speed_m_per_s);
      } else if (kind == "still_burst") {
        ev.kind = EventKind::still_burst;
        ok = static_cast<bool>(fields >> ev.duration_s >> ev.band_lo_hz >> ev.band_hi_hz >>
                               ev.amplitude);
        std::string envelope;
        if (ok && (fields >> envelope)) {
          if (envelope == "raised_cosine") ev.envelope = EnvelopeKind::raised_cosine;
          else if (envelope == "plateau") ev.envelope = EnvelopeKind::plateau;
          else
            throw ConfigError(source_name + ":" + std::to_string(entry.line) +
                              ": unknown burst envelope '" + envelope + "'");
        }
      } else if (kind == "quiet") {
        ev.kind = EventKind::quiet;
        ok = static_cast<bool>(fields >> ev.duration_s);
      } else {
        throw ConfigError(source_name + ":" + std::to_string(entry.line) +
                          ": unknown event kind '" + kind + "'");
      }
      std::string extra;
      if (!ok || (fields >> extra))
        throw ConfigError(source_name + ":" + std::to_string(entry.line) +
                          ": malformed event '" + entry.value + "'");
      spec.events.push_back(ev);
    } else {
      throw ConfigError("unknown scenario key '" + key + "' (" + source_name + ":" +
                        std::to_string(entry.line) + ")");
    }
  }

  validate_scenario(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_scenario_text(text, path);
}

std::string serialize_ground_truth(const GroundTruth& truth) {
  std::ostringstream out;
  char buf[160];
  out << "transition_count = " << truth.transition_times_s.size() << "\n";
  for (std::size_t i = 0; i < truth.transition_times_s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "transition.%zu = %.6f", i,
                  truth.transition_times_s[i]);
    out << buf << "\n";
  }
  out << "span_count = " << truth.activity_spans_s.size() << "\n";
  for (std::size_t i = 0; i < truth.activity_spans_s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "span.%zu = %.6f %.6f", i,
                  truth.activity_spans_s[i].first, truth.activity_spans_s[i].second);
    out << buf << "\n";
  }
  out << "line_count = " << truth.line_params.size() << "\n";
  for (std::size_t i = 0; i < truth.line_params.size(); ++i) {
    const LineTruth& line = truth.line_params[i];
    std::snprintf(buf, sizeof(buf), "line.%zu = %.6f %.6f %.6f %.6f", i, line.m, line.n,
                  line.theta_deg, line.x_prime);
    out << buf << "\n";
  }
  return out.str();
}

}  // namespace radseg
