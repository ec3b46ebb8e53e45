#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "radseg/core.hpp"
#include "radseg/errors.hpp"
#include "radseg/radon.hpp"
#include "radseg/rangemap.hpp"
#include "radseg/synth.hpp"

#include "radon_oracle.hpp"

namespace {

radseg::RangeMapImage image_of(radseg::MatD px) {
  radseg::RangeMapImage img;
  img.pixels = std::move(px);
  img.row_to_meters = {0.06, 0.5};
  img.col_to_seconds = {0.1, 0.0};
  img.stage = radseg::Stage::thresholded;
  return img;
}

radseg::ImageGeometry square_geometry(std::size_t side) {
  radseg::ImageGeometry g;
  g.rows = side;
  g.cols = side;
  g.row_to_meters = {0.06, 0.5};
  g.col_to_seconds = {0.1, 0.0};
  return g;
}

double column_sum(const radseg::MatD& accum, std::size_t j) {
  double acc = 0.0;
  for (std::size_t i = 0; i < accum.rows(); ++i) acc += accum(i, j);
  return acc;
}

}  // namespace

TEST_CASE("center pixel projects to the center bin at every angle") {
  radseg::MatD px(7, 7);
  px(3, 3) = 1.0;
  const radseg::RadonImage radon = radseg::radon_transform(image_of(std::move(px)), 1.0);
  CHECK(radon.thetas.size() == 180);
  CHECK(radon.offsets.size() == 11);  // ceil(hypot(7,7)/2) = 5 -> 2*5+1
  CHECK(radon.offsets.front() == -5.0);
  CHECK(radon.offsets.back() == 5.0);
  for (std::size_t j = 0; j < radon.thetas.size(); ++j) {
    CHECK(radon.accum(5, j) == 1.0);  // exact: four quarters of one pixel
    CHECK(column_sum(radon.accum, j) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("a full row stacks into one bin at ninety degrees") {
  radseg::MatD px(9, 11);
  for (std::size_t c = 0; c < 11; ++c) px(2, c) = 1.0;
  const radseg::RadonImage radon = radseg::radon_transform(image_of(std::move(px)), 1.0);
  // cy = 4, so row 2 sits at y = +2; L = ceil(hypot(9,11)/2) = 8 -> index 10.
  const std::size_t j90 = 90;
  CHECK(radon.thetas[j90] == 90.0);
  CHECK(radon.accum(10, j90) == doctest::Approx(11.0).epsilon(1e-12));
  for (std::size_t i = 0; i < radon.offsets.size(); ++i)
    if (i != 10) CHECK(radon.accum(i, j90) == 0.0);
}

TEST_CASE("projection mass is conserved at every angle") {
  std::mt19937_64 eng(21);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  radseg::MatD px(23, 37);
  double total = 0.0;
  for (double& v : px.data()) {
    const double draw = dist(eng);
    v = draw < 0.6 ? 0.0 : draw;  // plenty of empty pixels, like a thresholded map
    total += v;
  }
  const radseg::RadonImage radon = radseg::radon_transform(image_of(std::move(px)), 1.0);
  for (std::size_t j = 0; j < radon.thetas.size(); ++j)
    CHECK(column_sum(radon.accum, j) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("matches the brute-force reference on random images") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    radseg::MatD px(16, 16);
    for (double& v : px.data()) {
      const double draw = dist(eng);
      v = draw < 0.5 ? 0.0 : draw;
    }
    const radseg::RangeMapImage img = image_of(std::move(px));
    const radseg::RadonImage fast = radseg::radon_transform(img, 1.0);
    const radseg::MatD slow = oracle::radon_reference(img.pixels, fast.thetas);
    REQUIRE(slow.rows() == fast.accum.rows());
    REQUIRE(slow.cols() == fast.accum.cols());
    double worst = 0.0;
    for (std::size_t i = 0; i < slow.size(); ++i)
      worst = std::max(worst, std::abs(slow.data()[i] - fast.accum.data()[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("scatter splits mass sitting exactly on a bin border") {
  std::vector<double> bins(11, 0.0);
  radseg::detail::scatter_projection(bins, 5, 2.5, 1.0);
  CHECK(bins[7] == 0.5);  // bin 2
  CHECK(bins[8] == 0.5);  // bin 3
  radseg::detail::scatter_projection(bins, 5, -0.5, 2.0);
  CHECK(bins[4] == 1.0);  // bin -1
  CHECK(bins[5] == 1.0);  // bin 0
  radseg::detail::scatter_projection(bins, 5, 0.2, 4.0);
  CHECK(bins[5] == 5.0);  // interior hit, no split

  CHECK_THROWS_AS(radseg::detail::scatter_projection(bins, 5, 5.6, 1.0), radseg::Error);
  CHECK_THROWS_AS(radseg::detail::scatter_projection(bins, 5, -5.5, 1.0), radseg::Error);
}

TEST_CASE("angle grid construction") {
  radseg::MatD px(4, 4);
  px(1, 1) = 1.0;
  const radseg::RangeMapImage img = image_of(std::move(px));
  CHECK(radseg::radon_transform(img, 45.0).thetas == std::vector<double>{0.0, 45.0, 90.0, 135.0});
  CHECK(radseg::radon_transform(img, 90.0).thetas == std::vector<double>{0.0, 90.0});
  CHECK(radseg::radon_transform(img, 0.5).thetas.size() == 360);
  CHECK_THROWS_AS(radseg::radon_transform(img, 0.0), radseg::ConfigError);
  CHECK_THROWS_AS(radseg::radon_transform(img, 120.0), radseg::ConfigError);
  CHECK_THROWS_AS(radseg::radon_transform(image_of(radseg::MatD()), 1.0),
                  radseg::EmptyInputError);
}

TEST_CASE("peak detection on a hand-built accumulator") {
  radseg::RadonImage radon;
  radon.theta_step = 1.0;
  radon.thetas = {0, 1, 2, 3, 4, 5, 6};
  radon.offsets = {-4, -3, -2, -1, 0, 1, 2, 3, 4};
  radon.accum = radseg::MatD(9, 7);
  radon.accum(4, 3) = 10.0;
  radon.accum(5, 3) = 9.0;   // shadowed by the 10 next door
  radon.accum(2, 1) = 8.0;
  radon.accum(6, 5) = 8.0;   // ties with the above; lower theta index wins
  radon.accum(8, 6) = 7.0;
  radon.accum(0, 0) = 6.0;
  radon.accum(1, 4) = 3.0;   // below half the global max

  radseg::PeakParams params;
  params.min_sep_theta_deg = 1.0;
  params.min_sep_offset_bins = 1;
  params.min_rel_height = 0.5;
  params.max_peaks = 6;

  const std::vector<radseg::RadonPeak> peaks = radseg::detect_peaks(radon, params);
  REQUIRE(peaks.size() == 5);
  CHECK(peaks[0].value == 10.0);
  CHECK(peaks[0].theta_deg == 3.0);
  CHECK(peaks[0].x_prime == 0.0);
  CHECK(peaks[1].value == 8.0);
  CHECK(peaks[1].theta_deg == 1.0);
  CHECK(peaks[1].x_prime == -2.0);
  CHECK(peaks[2].value == 8.0);
  CHECK(peaks[2].theta_deg == 5.0);
  CHECK(peaks[3].value == 7.0);
  CHECK(peaks[4].value == 6.0);
  for (const auto& p : peaks) CHECK(p.class_hint == radseg::PeakClass::sloped);

  params.max_peaks = 2;
  CHECK(radseg::detect_peaks(radon, params).size() == 2);

  params.max_peaks = 6;
  params.min_rel_height = 0.75;
  CHECK(radseg::detect_peaks(radon, params).size() == 3);  // 10, 8, 8
}

TEST_CASE("equal neighbors collapse to one peak") {
  radseg::RadonImage radon;
  radon.theta_step = 1.0;
  radon.thetas = {0, 1, 2, 3, 4, 5, 6};
  radon.offsets = {-4, -3, -2, -1, 0, 1, 2, 3, 4};
  radon.accum = radseg::MatD(9, 7);
  radon.accum(4, 3) = 10.0;
  radon.accum(4, 4) = 10.0;  // plateau: both are neighborhood maxima

  radseg::PeakParams params;
  params.min_sep_theta_deg = 1.0;
  params.min_sep_offset_bins = 1;
  const std::vector<radseg::RadonPeak> peaks = radseg::detect_peaks(radon, params);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].theta_deg == 3.0);  // lower angle index breaks the tie
}

TEST_CASE("no mass means no peaks") {
  radseg::MatD px(8, 8);  // all zero
  const radseg::RadonImage radon = radseg::radon_transform(image_of(std::move(px)), 1.0);
  CHECK_THROWS_AS(radseg::detect_peaks(radon, {}), radseg::NoPeaksError);
  CHECK_THROWS_AS(radseg::detect_peaks(radseg::RadonImage{}, {}), radseg::EmptyInputError);
}

TEST_CASE("peak to line inverts the projection geometry") {
  const radseg::ImageGeometry g = square_geometry(101);

  radseg::RadonPeak horizontal{90.0, 10.0, 5.0, radseg::PeakClass::horizontal};
  const radseg::LineModel h = radseg::peak_to_line(horizontal, g);
  CHECK(h.m == 0.0);
  CHECK(h.n == 10.0);
  CHECK(h.row_at(0.0) == doctest::Approx(40.0));
  CHECK(h.row_at(100.0) == doctest::Approx(40.0));
  CHECK(h.col_start == 0.0);
  CHECK(h.col_end == 100.0);
  CHECK(h.peak_value == 5.0);

  radseg::RadonPeak diagonal{45.0, 0.0, 1.0, radseg::PeakClass::sloped};
  const radseg::LineModel d = radseg::peak_to_line(diagonal, g);
  CHECK(d.m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.n == doctest::Approx(0.0));
  CHECK(d.row_at(50.0) == doctest::Approx(50.0));
  CHECK(d.row_at(60.0) == doctest::Approx(60.0));  // row grows with column

  radseg::RadonPeak thirty{30.0, 5.0, 1.0, radseg::PeakClass::sloped};
  const radseg::LineModel t = radseg::peak_to_line(thirty, g);
  CHECK(t.m == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(t.n == doctest::Approx(10.0).epsilon(1e-12));

  radseg::RadonPeak vertical{0.0, 3.0, 1.0, radseg::PeakClass::sloped};
  CHECK_THROWS_AS(radseg::peak_to_line(vertical, g), radseg::VerticalLineError);
}

TEST_CASE("line intersection in image and physical coordinates") {
  const radseg::ImageGeometry g = square_geometry(101);
  radseg::LineModel a;
  a.m = 0.0;
  a.n = 50.0;
  a.geometry = g;
  radseg::LineModel b;
  b.m = 2.0;
  b.n = 0.0;
  b.geometry = g;

  const double eps = std::tan(0.5 * std::numbers::pi / 180.0);
  const radseg::TransitionPoint tp = radseg::intersect_lines(a, b, eps);
  CHECK(tp.col == doctest::Approx(25.0));
  CHECK(tp.row == doctest::Approx(0.0));
  CHECK(tp.time_s == doctest::Approx(2.5));   // col * 0.1 s
  CHECK(tp.range_m == doctest::Approx(0.5));  // row 0 -> range origin

  const radseg::TransitionPoint mirrored = radseg::intersect_lines(b, a, eps);
  CHECK(mirrored.col == doctest::Approx(tp.col));
  CHECK(mirrored.row == doctest::Approx(tp.row));

  radseg::LineModel almost = a;
  almost.m = 0.005;  // inside tan(0.5 deg)
  CHECK_THROWS_AS(radseg::intersect_lines(a, almost, eps), radseg::ParallelLinesError);

  radseg::LineModel elsewhere = b;
  elsewhere.geometry.cols = 55;
  CHECK_THROWS_AS(radseg::intersect_lines(a, elsewhere, eps), radseg::ConsistencyError);
}

TEST_CASE("single synthetic traces are recovered on the angle grid") {
  std::mt19937_64 eng(33);
  std::uniform_int_distribution<int> theta_pick(20, 160);
  std::uniform_real_distribution<double> n_pick(-6.0, 6.0);
  const double slope_tol = std::tan(1.0 * std::numbers::pi / 180.0);

  for (int trial = 0; trial < 12; ++trial) {
    const double theta = static_cast<double>(theta_pick(eng));
    if (theta == 90.0) continue;  // cot jumps through zero; covered below
    const double m = radseg::deg_cos(theta) / radseg::deg_sin(theta);
    const double n = n_pick(eng);
    auto [img, truth] = radseg::synth_line_image({{m, n}}, 64, 64);
    img.row_to_meters = {0.06, 0.5};
    img.col_to_seconds = {0.1, 0.0};

    const radseg::RadonImage radon = radseg::radon_transform(img, 1.0);
    radseg::PeakParams params;
    params.max_peaks = 1;
    const std::vector<radseg::RadonPeak> peaks = radseg::detect_peaks(radon, params);
    REQUIRE(peaks.size() == 1);

    CHECK(std::abs(peaks[0].theta_deg - theta) <= 1.0);
    CHECK(std::abs(peaks[0].x_prime - truth.line_params[0].x_prime) <= 1.0);

    const radseg::LineModel line = radseg::peak_to_line(peaks[0], radseg::geometry_of(img));
    CHECK(std::abs(line.m - m) <= slope_tol);
    CHECK(std::abs(line.n - n) <= 2.0);
  }

  // Horizontal trace: the peak must carry the horizontal hint.
  auto [img, truth] = radseg::synth_line_image({{0.0, -9.0}}, 64, 64);
  const radseg::RadonImage radon = radseg::radon_transform(img, 1.0);
  radseg::PeakParams params;
  params.max_peaks = 1;
  const std::vector<radseg::RadonPeak> peaks = radseg::detect_peaks(radon, params);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].theta_deg == 90.0);
  CHECK(peaks[0].x_prime == -9.0);
  CHECK(peaks[0].class_hint == radseg::PeakClass::horizontal);
}

TEST_CASE("support ordering and span clipping around a crossing") {
  radseg::MatD px(64, 64);
  for (std::size_t c = 0; c <= 30; ++c) px(10 + c, c) = 1.0;   // descending walk
  for (std::size_t c = 30; c < 64; ++c) px(40, c) = 1.0;       // rest afterwards
  const radseg::RangeMapImage img = image_of(std::move(px));
  const radseg::ImageGeometry g = radseg::geometry_of(img);

  radseg::LineModel walk;
  walk.m = 1.0;
  walk.n = -10.0;  // row(col) = 31 + 10 + (col - 31) = 10 + col
  walk.peak_value = 3.0;
  walk.col_start = 0.0;
  walk.col_end = 63.0;
  walk.geometry = g;
  radseg::LineModel rest;
  rest.m = 0.0;
  rest.n = -9.0;  // row = 40
  rest.peak_value = 2.0;
  rest.col_start = 0.0;
  rest.col_end = 63.0;
  rest.geometry = g;

  // Deliberately out of order.
  std::vector<radseg::LineModel> lines = radseg::order_lines_by_support({rest, walk}, img);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].m == 1.0);  // the walk's support sits earlier in slow time
  CHECK(lines[1].m == 0.0);
  CHECK(lines[0].col_start == 0.0);
  CHECK(lines[0].col_end == 32.0);   // rest pixels within 2 rows of the extended walk
  CHECK(lines[1].col_start == 28.0);
  CHECK(lines[1].col_end == 63.0);

  const double eps = std::tan(0.5 * std::numbers::pi / 180.0);
  const std::vector<radseg::TransitionPoint> transitions =
      radseg::transition_times(lines, eps);
  REQUIRE(transitions.size() == 1);
  CHECK(transitions[0].col == doctest::Approx(30.0));
  CHECK(transitions[0].row == doctest::Approx(40.0));
  CHECK(transitions[0].time_s == doctest::Approx(3.0));
  CHECK(transitions[0].range_m == doctest::Approx(0.5 + 40 * 0.06));
  CHECK(lines[0].col_end == doctest::Approx(30.0));    // clipped to the crossing
  CHECK(lines[1].col_start == doctest::Approx(30.0));
}

TEST_CASE("near-parallel duplicate lines merge before intersecting") {
  const radseg::ImageGeometry g = square_geometry(101);
  auto make = [&](double m, double n, double value, double c0, double c1) {
    radseg::LineModel line;
    line.m = m;
    line.n = n;
    line.peak_value = value;
    line.col_start = c0;
    line.col_end = c1;
    line.geometry = g;
    return line;
  };

  const double eps = std::tan(0.5 * std::numbers::pi / 180.0);
  std::vector<radseg::LineModel> lines = {
      make(0.5, 4.0, 9.0, 0.0, 40.0),
      make(0.5 + 0.5 * eps, 3.0, 5.0, 20.0, 60.0),  // weaker twin of the first
      make(-1.0, 0.0, 8.0, 40.0, 100.0),
  };
  const std::vector<radseg::TransitionPoint> transitions =
      radseg::transition_times(lines, eps);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].peak_value == 9.0);       // the stronger twin survives
  CHECK(lines[0].col_start == 0.0);        // spans were unioned before clipping
  CHECK(transitions.size() == 1);

  // A single line after merging yields no transitions.
  std::vector<radseg::LineModel> lone = {make(0.2, 0.0, 5.0, 0.0, 100.0),
                                         make(0.2, 1.0, 4.0, 0.0, 100.0)};
  CHECK(radseg::transition_times(lone, eps).empty());
  CHECK(lone.size() == 1);
}
