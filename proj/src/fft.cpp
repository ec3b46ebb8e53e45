#include "radseg/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "radseg/errors.hpp"

namespace radseg {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0) throw Error("fft: empty input");
  if (!is_power_of_two(n))
    throw Error("fft: size must be a power of two, got " + std::to_string(n));

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t base = 0; base < n; base += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[base + k];
        const std::complex<double> v = data[base + k + len / 2] * w;
        data[base + k] = u + v;
        data[base + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace radseg
