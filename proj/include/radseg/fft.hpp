#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace radseg {

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// In-place forward transform, X[k] = sum_n x[n] exp(-i 2 pi n k / N).
// Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);

}  // namespace radseg
