#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "radseg/config.hpp"
#include "radseg/core.hpp"
#include "radseg/errors.hpp"
#include "radseg/microdoppler.hpp"
#include "radseg/synth.hpp"

namespace {

radseg::RadarCube tone_cube(std::size_t pulses, double freq_hz, double prf) {
  radseg::RadarCube cube;
  cube.prf = prf;
  cube.range_resolution = 0.06;
  cube.range_offset = 0.5;
  cube.samples = radseg::MatCF(1, pulses);
  for (std::size_t p = 0; p < pulses; ++p) {
    const double phase = 2.0 * std::numbers::pi * freq_hz * static_cast<double>(p) / prf;
    cube.samples(0, p) = {static_cast<float>(std::cos(phase)),
                          static_cast<float>(std::sin(phase))};
  }
  return cube;
}

radseg::PowerCurve curve_of(std::vector<double> values, double frame_dt,
                            bool filtered = true) {
  radseg::PowerCurve pbc;
  pbc.values = std::move(values);
  pbc.frame_dt = frame_dt;
  pbc.frame_times.resize(pbc.values.size());
  for (std::size_t i = 0; i < pbc.values.size(); ++i)
    pbc.frame_times[i] = frame_dt * static_cast<double>(i);
  pbc.filtered = filtered;
  return pbc;
}

std::size_t argmax_row(const radseg::MatD& power, std::size_t frame) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < power.rows(); ++i)
    if (power(i, frame) > power(best, frame)) best = i;
  return best;
}

}  // namespace

TEST_CASE("pure tone lands on its Doppler bin") {
  const radseg::RadarCube cube = tone_cube(1024, 125.0, 1000.0);
  radseg::StftParams params;
  params.window_len = 256;
  params.hop = 64;
  params.window_kind = radseg::WindowKind::rect;

  const radseg::Spectrogram spec = radseg::spectrogram(cube, 0, 1024, params);
  CHECK(spec.power.rows() == 255);            // nfft - 1, the -Nyquist bin is dropped
  CHECK(spec.power.cols() == 13);             // (1024 - 256) / 64 + 1
  CHECK(spec.freq_axis.front() == doctest::Approx(-1000.0 * 127.0 / 256.0));
  CHECK(spec.freq_axis.back() == doctest::Approx(+1000.0 * 127.0 / 256.0));
  CHECK(spec.freq_axis[159] == doctest::Approx(125.0));
  CHECK(spec.frame_dt == doctest::Approx(0.064));
  CHECK(spec.frame_times[0] == doctest::Approx(0.128));  // (0 + 256/2) / prf
  CHECK(spec.frame_times[1] == doctest::Approx(0.192));

  for (std::size_t f = 0; f < spec.power.cols(); ++f) {
    CHECK(argmax_row(spec.power, f) == 159);
    // 125 Hz is exactly bin 32 of a 256-point transform at 1 kHz.
    CHECK(spec.power(159, f) == doctest::Approx(65536.0).epsilon(1e-6));
  }

  const radseg::RadarCube neg = tone_cube(1024, -125.0, 1000.0);
  const radseg::Spectrogram nspec = radseg::spectrogram(neg, 0, 1024, params);
  CHECK(nspec.freq_axis[95] == doctest::Approx(-125.0));
  CHECK(argmax_row(nspec.power, 0) == 95);
}

TEST_CASE("window weights scale the zero-frequency response") {
  radseg::RadarCube cube;
  cube.prf = 100.0;
  cube.range_resolution = 0.06;
  cube.samples = radseg::MatCF(1, 8, {1.0f, 0.0f});
  radseg::StftParams params;
  params.window_len = 8;
  params.hop = 8;

  params.window_kind = radseg::WindowKind::rect;
  const radseg::Spectrogram rect = radseg::spectrogram(cube, 0, 8, params);
  CHECK(rect.power.rows() == 7);
  CHECK(rect.freq_axis[3] == 0.0);
  CHECK(rect.power(3, 0) == doctest::Approx(64.0));

  params.window_kind = radseg::WindowKind::hann;
  const radseg::Spectrogram hann = radseg::spectrogram(cube, 0, 8, params);
  CHECK(hann.power(3, 0) == doctest::Approx(16.0));  // hann weights sum to W/2

  params.window_kind = radseg::WindowKind::hamming;
  const radseg::Spectrogram hamm = radseg::spectrogram(cube, 0, 8, params);
  CHECK(hamm.power(3, 0) == doctest::Approx(8.0 * 0.54 * 8.0 * 0.54));
}

TEST_CASE("window and hop resolve from the recording when left at zero") {
  const radseg::RadarCube cube = tone_cube(1500, 50.0, 1000.0);
  const radseg::Spectrogram spec = radseg::spectrogram(cube, 0, 1500, {});
  CHECK(spec.params.window_len == 200);  // 0.2 s at 1 kHz
  CHECK(spec.params.hop == 50);
  CHECK(spec.frame_dt == doctest::Approx(0.05));
  CHECK(spec.frame_times[0] == doctest::Approx(0.1));
  // Frames are timestamped in recording time, not span-relative time.
  const radseg::Spectrogram late = radseg::spectrogram(cube, 500, 1500, {});
  CHECK(late.frame_times[0] == doctest::Approx(0.6));
}

TEST_CASE("spectrogram span and mask guards") {
  const radseg::RadarCube cube = tone_cube(300, 10.0, 1000.0);
  CHECK_THROWS_AS(radseg::spectrogram(cube, 0, 301, {}), radseg::SizeError);
  CHECK_THROWS_AS(radseg::spectrogram(cube, 100, 100, {}), radseg::SizeError);
  CHECK_THROWS_AS(radseg::spectrogram(cube, 0, 100, {}), radseg::SizeError);  // 200 > 100
  radseg::StftParams tiny;
  tiny.window_len = 1;
  CHECK_THROWS_AS(radseg::spectrogram(cube, 0, 300, tiny), radseg::ConfigError);
  CHECK_THROWS_AS(radseg::spectrogram(cube, 0, 300, {}, {{2, 1}}), radseg::SizeError);
  CHECK_THROWS_AS(radseg::spectrogram(cube, 0, 300, {}, {{0, 1}}), radseg::SizeError);
  CHECK_THROWS_AS(radseg::spectrogram(radseg::RadarCube{}, 0, 10, {}),
                  radseg::EmptyInputError);
}

TEST_CASE("range mask keeps other bins out of the slow-time signal") {
  radseg::RadarCube cube = tone_cube(512, 100.0, 1000.0);
  radseg::RadarCube low = tone_cube(512, -200.0, 1000.0);
  cube.samples = radseg::MatCF(3, 512);
  for (std::size_t p = 0; p < 512; ++p) {
    cube.samples(0, p) = tone_cube(512, 100.0, 1000.0).samples(0, p);
    cube.samples(2, p) = low.samples(0, p);
  }
  radseg::StftParams params;
  params.window_len = 128;
  params.window_kind = radseg::WindowKind::rect;

  const radseg::Spectrogram top = radseg::spectrogram(cube, 0, 512, params, {{0, 0}});
  const radseg::Spectrogram bottom = radseg::spectrogram(cube, 0, 512, params, {{2, 2}});
  const std::size_t half = 64;
  // 100 Hz -> bin 12.8 of 128 at 1 kHz: straddles bins, so check the sign only.
  CHECK(top.freq_axis[argmax_row(top.power, 0)] > 0.0);
  CHECK(bottom.freq_axis[argmax_row(bottom.power, 0)] < 0.0);
  CHECK(top.power.rows() == 2 * half - 1);
}

TEST_CASE("band power sums exactly the covered bins") {
  radseg::Spectrogram spec;
  spec.power = radseg::MatD(7, 3);
  spec.freq_axis = {-300, -200, -100, 0, 100, 200, 300};
  spec.frame_times = {0.1, 0.2, 0.3};
  spec.frame_dt = 0.1;
  double v = 1.0;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t f = 0; f < 3; ++f) spec.power(i, f) = v++;

  const radseg::PowerCurve pbc =
      radseg::power_burst_curve(spec, {50.0, 250.0}, {-250.0, -50.0});
  REQUIRE(pbc.values.size() == 3);
  // Bins -200, -100, 100, 200 are rows 1, 2, 4, 5; frame 0 holds 4, 7, 13, 16.
  CHECK(pbc.values[0] == doctest::Approx(40.0));
  CHECK(pbc.values[1] == doctest::Approx(44.0));
  CHECK(pbc.values[2] == doctest::Approx(48.0));
  CHECK(pbc.frame_times == spec.frame_times);
  CHECK(pbc.frame_dt == spec.frame_dt);
  CHECK_FALSE(pbc.filtered);

  // Band edges are inclusive on bin centers.
  const radseg::PowerCurve edge =
      radseg::power_burst_curve(spec, {100.0, 200.0}, {-200.0, -100.0});
  CHECK(edge.values[0] == doctest::Approx(40.0));
}

TEST_CASE("bands covering zero or leaving the axis are rejected") {
  radseg::Spectrogram spec;
  spec.power = radseg::MatD(7, 1, 1.0);
  spec.freq_axis = {-300, -200, -100, 0, 100, 200, 300};
  spec.frame_times = {0.1};
  spec.frame_dt = 0.1;

  CHECK_THROWS_AS(radseg::power_burst_curve(spec, {-50.0, 50.0}, {-250.0, -50.0}),
                  radseg::ConfigError);
  CHECK_THROWS_AS(radseg::power_burst_curve(spec, {0.0, 100.0}, {-250.0, -50.0}),
                  radseg::ConfigError);
  CHECK_THROWS_AS(radseg::power_burst_curve(spec, {50.0, 350.0}, {-250.0, -50.0}),
                  radseg::ConfigError);
  CHECK_THROWS_AS(radseg::power_burst_curve(spec, {50.0, 250.0}, {-350.0, -50.0}),
                  radseg::ConfigError);
  CHECK_THROWS_AS(radseg::power_burst_curve(spec, {250.0, 50.0}, {-250.0, -50.0}),
                  radseg::ConfigError);
  CHECK_THROWS_AS(radseg::power_burst_curve(radseg::Spectrogram{}, {50.0, 250.0},
                                            {-250.0, -50.0}),
                  radseg::EmptyInputError);
}

TEST_CASE("causal moving average with warm-up") {
  const radseg::PowerCurve flat = radseg::smooth_pbc(curve_of({2, 2, 2, 2, 2, 2}, 0.1, false), 5);
  CHECK(flat.filtered);
  for (const double v : flat.values) CHECK(v == doctest::Approx(2.0));

  std::vector<double> impulse(20, 0.0);
  impulse[10] = 1.0;
  const radseg::PowerCurve sm = radseg::smooth_pbc(curve_of(std::move(impulse), 0.1, false), 5);
  for (std::size_t i = 0; i < 10; ++i) CHECK(sm.values[i] == 0.0);
  for (std::size_t i = 10; i <= 14; ++i) CHECK(sm.values[i] == doctest::Approx(0.2));
  for (std::size_t i = 15; i < 20; ++i) CHECK(sm.values[i] == 0.0);

  const radseg::PowerCurve head = radseg::smooth_pbc(curve_of({1, 0, 0, 0, 0, 0}, 0.1, false), 5);
  CHECK(head.values[0] == doctest::Approx(1.0));        // one value seen so far
  CHECK(head.values[1] == doctest::Approx(0.5));
  CHECK(head.values[2] == doctest::Approx(1.0 / 3.0));
  CHECK(head.values[3] == doctest::Approx(0.25));
  CHECK(head.values[4] == doctest::Approx(0.2));
  CHECK(head.values[5] == 0.0);

  CHECK_THROWS_AS(radseg::smooth_pbc(curve_of({}, 0.1), 5), radseg::EmptyInputError);
  CHECK_THROWS_AS(radseg::smooth_pbc(curve_of({1.0}, 0.1), 0), radseg::ConfigError);
}

TEST_CASE("threshold interpolates the dynamic range") {
  CHECK(radseg::pbc_threshold(curve_of({0, 10}, 0.1), 0.03) == doctest::Approx(0.3));
  CHECK(radseg::pbc_threshold(curve_of({5, 7}, 0.1), 0.5) == doctest::Approx(6.0));
  CHECK(radseg::pbc_threshold(curve_of({3, 3, 3}, 0.1), 0.03) == doctest::Approx(3.0));
  CHECK_THROWS_AS(radseg::pbc_threshold(curve_of({}, 0.1), 0.03), radseg::EmptyInputError);
}

TEST_CASE("runs above threshold become spans with half-open end times") {
  const radseg::PowerCurve pbc = curve_of({0, 0, 1, 1, 1, 0, 0}, 0.1);
  const std::vector<radseg::ActivitySpan> spans = radseg::segment_pbc(pbc, 0.5, 0.25, 1);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].frame_begin == 2);
  CHECK(spans[0].frame_end == 4);
  CHECK(spans[0].start_s == doctest::Approx(0.2));
  CHECK(spans[0].end_s == doctest::Approx(0.5));
  CHECK(spans[0].peak_power == doctest::Approx(1.0));
}

TEST_CASE("gaps shorter than the merge window close up") {
  const radseg::PowerCurve pbc = curve_of({1, 1, 0, 1, 1}, 0.1);
  const std::vector<radseg::ActivitySpan> merged = radseg::segment_pbc(pbc, 0.5, 0.05, 2);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].frame_begin == 0);
  CHECK(merged[0].frame_end == 4);

  // The single-frame gap survives when the merge window is 1 frame.
  const std::vector<radseg::ActivitySpan> split = radseg::segment_pbc(pbc, 0.5, 0.05, 1);
  REQUIRE(split.size() == 2);
  CHECK(split[0].frame_end == 1);
  CHECK(split[1].frame_begin == 3);
}

TEST_CASE("short spans are dropped after merging") {
  const radseg::PowerCurve pbc = curve_of({0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0}, 0.1);
  const std::vector<radseg::ActivitySpan> spans = radseg::segment_pbc(pbc, 0.5, 0.45, 1);
  REQUIRE(spans.size() == 1);  // the lone frame is 0.1 s, under the cut
  CHECK(spans[0].frame_begin == 5);
  CHECK(spans[0].frame_end == 9);

  // Exactly at the cut stays: 3 frames x 0.1 s vs a 0.3 s minimum.
  const radseg::PowerCurve three = curve_of({0, 1, 1, 1, 0}, 0.1);
  CHECK(radseg::segment_pbc(three, 0.5, 0.3, 1).size() == 1);
}

TEST_CASE("flat or unfiltered curves cannot be segmented") {
  CHECK_THROWS_AS(radseg::segment_pbc(curve_of({3, 3, 3}, 0.1), 0.03, 0.5, 1),
                  radseg::NoActivityError);
  CHECK_THROWS_AS(radseg::segment_pbc(curve_of({0, 1, 0}, 0.1, false), 0.03, 0.5, 1),
                  radseg::Error);
  CHECK_THROWS_AS(radseg::segment_pbc(curve_of({}, 0.1), 0.03, 0.5, 1),
                  radseg::EmptyInputError);
}

TEST_CASE("two synthetic bursts come back as two spans") {
  radseg::ScenarioSpec spec;
  spec.num_range_bins = 32;
  spec.prf = 1000.0;
  spec.range_resolution = 0.06;
  spec.range_offset = 0.5;
  spec.start_range_m = 1.5;
  spec.noise_db = 30.0;
  spec.events = {
      {radseg::EventKind::quiet, 2.0, 0, 0, 0, 1.0, radseg::EnvelopeKind::raised_cosine},
      {radseg::EventKind::still_burst, 1.5, 0, -200.0, -40.0, 2.0,
       radseg::EnvelopeKind::plateau},
      {radseg::EventKind::quiet, 3.0, 0, 0, 0, 1.0, radseg::EnvelopeKind::raised_cosine},
      {radseg::EventKind::still_burst, 1.2, 0, 40.0, 200.0, 2.0,
       radseg::EnvelopeKind::plateau},
      {radseg::EventKind::quiet, 2.0, 0, 0, 0, 1.0, radseg::EnvelopeKind::raised_cosine},
  };

  auto [cube, truth] = radseg::synth_cube(spec, 17);
  REQUIRE(truth.activity_spans_s.size() == 2);
  CHECK(truth.activity_spans_s[0].first == doctest::Approx(2.0));
  CHECK(truth.activity_spans_s[0].second == doctest::Approx(3.5));
  CHECK(truth.activity_spans_s[1].first == doctest::Approx(6.5));
  CHECK(truth.activity_spans_s[1].second == doctest::Approx(7.7));

  const radseg::Spectrogram spec_img =
      radseg::spectrogram(cube, 0, cube.num_pulses(), {});
  radseg::PowerCurve pbc =
      radseg::power_burst_curve(spec_img, {20.0, 270.0}, {-270.0, -20.0});
  pbc = radseg::smooth_pbc(pbc, 5);
  const std::vector<radseg::ActivitySpan> spans = radseg::segment_pbc(pbc, 0.03, 0.5, 5);

  REQUIRE(spans.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(spans[i].start_s - truth.activity_spans_s[i].first) <= 0.3);
    CHECK(std::abs(spans[i].end_s - truth.activity_spans_s[i].second) <= 0.3);
  }
}
