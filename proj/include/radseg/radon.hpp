#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "radseg/core.hpp"
#include "radseg/rangemap.hpp"

namespace radseg {

// Trig on degrees, exact at the cardinal angles so axis-aligned projections
// land on bin centers instead of picking up 1e-17 residue.
inline double deg_sin(double deg) {
  if (deg == 0.0 || deg == 180.0) return 0.0;
  if (deg == 90.0) return 1.0;
  return std::sin(deg * std::numbers::pi / 180.0);
}

inline double deg_cos(double deg) {
  if (deg == 0.0) return 1.0;
  if (deg == 90.0) return 0.0;
  if (deg == 180.0) return -1.0;
  return std::cos(deg * std::numbers::pi / 180.0);
}

// Image dimensions plus the physical axis maps the line and transition math
// needs.  The projection origin is the center pixel (floor((dim - 1) / 2)),
// x runs along columns, y along rows upward (decreasing row index).
struct ImageGeometry {
  std::size_t rows = 0;
  std::size_t cols = 0;
  AxisMap row_to_meters;
  AxisMap col_to_seconds;

  double center_row() const { return std::floor((static_cast<double>(rows) - 1.0) / 2.0); }
  double center_col() const { return std::floor((static_cast<double>(cols) - 1.0) / 2.0); }

  bool operator==(const ImageGeometry&) const = default;
};

ImageGeometry geometry_of(const RangeMapImage& img);

// Projection accumulator: offsets x' over rows, angles theta over columns.
struct RadonImage {
  MatD accum;                   // [n_offsets x n_angles]
  std::vector<double> thetas;   // degrees, {0, step, ..., < 180}
  std::vector<double> offsets;  // pixels, {-L, ..., +L}, bin width 1
  double theta_step = 1.0;
  ImageGeometry geometry;
};

// Discrete projection transform.  Each pixel is split into four equal subpixels
// at the quarter-cell centers; each subpixel projects to
//   x' = x cos(theta) + y sin(theta)
// in centered coordinates and adds a quarter of the pixel value to the offset
// bin containing x'.  A projection landing exactly on the border of two bins is
// split evenly between them.  Offset bin count is 2 ceil(hypot(rows, cols) / 2) + 1,
// which covers every reachable projection, so per-angle mass is conserved.
RadonImage radon_transform(const RangeMapImage& img, double theta_step = 1.0);

namespace detail {

// Drops projection mass q at position p into unit-width bins centered on the
// integers -max_offset..+max_offset (bin b covers [b - 0.5, b + 0.5)).  Exactly
// on a border, the mass is split evenly between the two neighbors.
void scatter_projection(std::vector<double>& bins, long max_offset, double p, double q);

}  // namespace detail

enum class PeakClass { horizontal, sloped };

struct RadonPeak {
  double theta_deg = 0.0;
  double x_prime = 0.0;  // offset bin center, pixels
  double value = 0.0;
  PeakClass class_hint = PeakClass::sloped;
};

struct PeakParams {
  double min_sep_theta_deg = 5.0;
  int min_sep_offset_bins = 5;
  double min_rel_height = 0.5;
  int max_peaks = 6;
};

// Neighborhood maxima of the accumulator, strongest first, non-maximum
// suppressed within the separation window, cut at max_peaks.  A peak within
// two grid steps of 90 degrees is hinted horizontal.
std::vector<RadonPeak> detect_peaks(const RadonImage& radon, const PeakParams& params);

// A straight trace in the range map.  m is the slope in rows per column
// (row index grows downward); n is the trace's height in rows above the image
// center, measured at the center column.  The pixel-space form is
//   row(col) = center_row - n + m * (col - center_col).
struct LineModel {
  double m = 0.0;
  double n = 0.0;
  double theta_src = 0.0;   // peak the line came from
  double x_prime_src = 0.0;
  double peak_value = 0.0;
  double col_start = 0.0;   // valid span, columns, inclusive
  double col_end = 0.0;
  ImageGeometry geometry;

  double row_at(double col) const {
    return geometry.center_row() - n + m * (col - geometry.center_col());
  }
  double start_s() const { return geometry.col_to_seconds.at(col_start); }
  double end_s() const { return geometry.col_to_seconds.at(col_end); }
};

// Inverse of the projection geometry for one peak: m = cot(theta),
// n = x' / sin(theta).  theta = 0 would be a vertical trace (infinite speed)
// and is rejected.
LineModel peak_to_line(const RadonPeak& peak, const ImageGeometry& geometry);

// Where two traces cross, in image and physical coordinates.
struct TransitionPoint {
  double col = 0.0;
  double row = 0.0;
  double time_s = 0.0;
  double range_m = 0.0;
};

// Solves the 2x2 system for the crossing of two line models.  Throws
// ParallelLinesError when the slopes differ by less than slope_epsilon.
TransitionPoint intersect_lines(const LineModel& a, const LineModel& b,
                                double slope_epsilon);

// Sorts lines by the slow-time centroid of their supporting mass (pixels within
// two rows of the trace) and shrinks each valid span to the support extent.
// Lines without support sort by their span middle.
std::vector<LineModel> order_lines_by_support(std::vector<LineModel> lines,
                                              const RangeMapImage& img);

// Crossings of consecutive lines: K lines give K - 1 transitions.  Consecutive
// lines with slopes within slope_epsilon describe the same motion, so the
// weaker one is dropped instead of intersected.  Each surviving line's span is
// clipped to its neighboring transitions.  Lines must already be ordered.
std::vector<TransitionPoint> transition_times(std::vector<LineModel>& lines,
                                              double slope_epsilon);

}  // namespace radseg
