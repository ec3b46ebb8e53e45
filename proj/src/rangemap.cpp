#include "radseg/rangemap.hpp"

#include <algorithm>
#include <cmath>

#include "radseg/errors.hpp"

namespace radseg {

namespace {

void expect_stage(const RangeMapImage& img, Stage expected, const char* op) {
  if (img.stage != expected)
    throw Error(std::string(op) + " expects a " + stage_name(expected) +
                " image, got " + stage_name(img.stage));
  if (img.pixels.empty()) throw EmptyInputError(std::string(op) + ": empty image");
}

}  // namespace

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::raw_db: return "raw_db";
    case Stage::normalized: return "normalized";
    case Stage::downsampled: return "downsampled";
    case Stage::filtered: return "filtered";
    case Stage::thresholded: return "thresholded";
  }
  return "?";
}

RangeMapImage magnitude_db(const RadarCube& cube, double db_floor) {
  if (cube.samples.empty()) throw EmptyInputError("magnitude_db: empty cube");
  if (!(cube.prf > 0.0)) throw DataError("magnitude_db: cube prf must be positive");

  RangeMapImage out;
  out.pixels = MatD(cube.num_bins(), cube.num_pulses());
  out.row_to_meters = cube.range_axis();
  out.col_to_seconds = cube.time_axis();
  out.stage = Stage::raw_db;

  const double floor_amp = std::pow(10.0, db_floor / 20.0);
  for (std::size_t i = 0; i < cube.samples.size(); ++i) {
    const double mag = std::abs(std::complex<double>(cube.samples.data()[i]));
    out.pixels.data()[i] = 20.0 * std::log10(std::max(mag, floor_amp));
  }
  return out;
}

RangeMapImage normalize_columns(const RangeMapImage& img) {
  expect_stage(img, Stage::raw_db, "normalize_columns");

  RangeMapImage out = img;
  out.stage = Stage::normalized;
  const std::size_t rows = img.pixels.rows();
  const std::size_t cols = img.pixels.cols();
  for (std::size_t c = 0; c < cols; ++c) {
    double lo = img.pixels(0, c);
    for (std::size_t r = 1; r < rows; ++r) lo = std::min(lo, img.pixels(r, c));
    double hi = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double shifted = img.pixels(r, c) - lo;
      out.pixels(r, c) = shifted;
      hi = std::max(hi, shifted);
    }
    if (hi > 0.0)
      for (std::size_t r = 0; r < rows; ++r) out.pixels(r, c) /= hi;
  }
  return out;
}

RangeMapImage downsample_slow_time(const RangeMapImage& img, std::size_t target_rows,
                                   std::size_t target_cols) {
  expect_stage(img, Stage::normalized, "downsample_slow_time");
  const std::size_t rows = img.pixels.rows();
  const std::size_t cols = img.pixels.cols();
  if (target_rows > rows || target_cols > cols)
    throw SizeError("downsample_slow_time: target " + std::to_string(target_rows) + "x" +
                    std::to_string(target_cols) + " exceeds source " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  if (target_rows == 0 || target_cols == 0)
    throw SizeError("downsample_slow_time: target dimensions must be >= 1");

  const double row_stride = static_cast<double>(rows) / static_cast<double>(target_rows);
  const double col_stride = static_cast<double>(cols) / static_cast<double>(target_cols);

  auto pick = [](double stride, std::size_t index, std::size_t limit) {
    auto src = static_cast<std::size_t>(std::llround(stride * static_cast<double>(index)));
    return std::min(src, limit - 1);
  };

  RangeMapImage out;
  out.pixels = MatD(target_rows, target_cols);
  out.stage = Stage::downsampled;
  out.row_to_meters = {img.row_to_meters.step * row_stride, img.row_to_meters.origin};
  out.col_to_seconds = {img.col_to_seconds.step * col_stride, img.col_to_seconds.origin};

  for (std::size_t r = 0; r < target_rows; ++r) {
    const std::size_t src_r = pick(row_stride, r, rows);
    for (std::size_t c = 0; c < target_cols; ++c)
      out.pixels(r, c) = img.pixels(src_r, pick(col_stride, c, cols));
  }
  return out;
}

RangeMapImage smooth(const RangeMapImage& img, int kernel_half_width) {
  expect_stage(img, Stage::downsampled, "smooth");
  if (kernel_half_width < 0) throw ConfigError("smooth: kernel_half_width must be >= 0");

  const int k = kernel_half_width;
  const int rows = static_cast<int>(img.pixels.rows());
  const int cols = static_cast<int>(img.pixels.cols());
  const int side = 2 * k + 1;
  const double weight = 1.0 / (static_cast<double>(side) * side);

  RangeMapImage out = img;
  out.stage = Stage::filtered;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int dr = -k; dr <= k; ++dr) {
        const int rr = r + dr;
        if (rr < 0 || rr >= rows) continue;  // zero padding
        for (int dc = -k; dc <= k; ++dc) {
          const int cc = c + dc;
          if (cc < 0 || cc >= cols) continue;
          acc += img.pixels(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        }
      }
      out.pixels(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc * weight;
    }
  }
  return out;
}

RangeMapImage threshold(const RangeMapImage& img, double tau) {
  expect_stage(img, Stage::filtered, "threshold");

  RangeMapImage out = img;
  out.stage = Stage::thresholded;
  for (double& v : out.pixels.data())
    if (v < tau) v = 0.0;
  return out;
}

}  // namespace radseg
