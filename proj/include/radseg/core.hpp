#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "radseg/errors.hpp"

namespace radseg {

// Dense row-major matrix.  Just enough surface for the image and cube math here;
// no view machinery, no expression templates.
template <typename T>
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const T* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatD = Mat<double>;
using MatCF = Mat<std::complex<float>>;

// Affine index -> physical-unit mapping for one image axis.
struct AxisMap {
  double step = 1.0;
  double origin = 0.0;

  double at(double index) const { return origin + step * index; }
  double index_of(double value) const { return (value - origin) / step; }

  bool operator==(const AxisMap& other) const {
    return step == other.step && origin == other.origin;
  }
};

// One continuous recording: complex slow-time samples per range bin.
// samples is [range bins x pulses]; row r sits at range_offset + r * range_resolution
// metres, column n at time n / prf seconds.
struct RadarCube {
  MatCF samples;
  double prf = 0.0;               // pulse repetition frequency, Hz
  double range_resolution = 0.0;  // metres per range bin
  double range_offset = 0.0;      // range of bin 0, metres

  std::size_t num_bins() const { return samples.rows(); }
  std::size_t num_pulses() const { return samples.cols(); }
  double duration_s() const { return prf > 0.0 ? num_pulses() / prf : 0.0; }

  AxisMap range_axis() const { return {range_resolution, range_offset}; }
  AxisMap time_axis() const { return {1.0 / prf, 0.0}; }
};

}  // namespace radseg
