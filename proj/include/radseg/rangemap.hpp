#pragma once

#include <cstddef>
#include <string>

#include "radseg/core.hpp"

namespace radseg {

// Preprocessing stages, in the only order the ops accept them.
enum class Stage { raw_db, normalized, downsampled, filtered, thresholded };

std::string stage_name(Stage stage);

// Range map: range bins over rows, slow time over columns.
struct RangeMapImage {
  MatD pixels;
  AxisMap row_to_meters;
  AxisMap col_to_seconds;
  Stage stage = Stage::raw_db;
};

// Log-magnitude image of the cube.  Magnitudes are clamped at db_floor so empty
// bins do not drag the later per-column normalization to -inf.
RangeMapImage magnitude_db(const RadarCube& cube, double db_floor = -120.0);

// Shift every column so its minimum is 0, then scale its maximum to 1.
// Constant columns come out all-zero.
RangeMapImage normalize_columns(const RangeMapImage& img);

// Keep every k-th pixel along each axis so the image ends up target_rows x
// target_cols.  Pure point selection, no averaging; the axis maps are rescaled
// so retained pixels keep their physical coordinates (exact for integer strides,
// within half a source step otherwise).
RangeMapImage downsample_slow_time(const RangeMapImage& img, std::size_t target_rows,
                                   std::size_t target_cols);

// Mean filter with a (2k+1)x(2k+1) uniform kernel and zero padding at the borders.
RangeMapImage smooth(const RangeMapImage& img, int kernel_half_width = 1);

// Binary-ish gate: pixels below tau become 0, pixels >= tau keep their value.
RangeMapImage threshold(const RangeMapImage& img, double tau = 0.75);

}  // namespace radseg
