#include "radseg/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "radseg/errors.hpp"

namespace radseg {

namespace {

void write_p5(const MatD& pixels, const std::string& path) {
  if (pixels.rows() == 0 || pixels.cols() == 0)
    throw EmptyInputError("write_pgm: empty image");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%zu %zu\n255\n", pixels.cols(),
                pixels.rows());
  out << header;

  std::vector<unsigned char> row(pixels.cols());
  for (std::size_t r = 0; r < pixels.rows(); ++r) {
    for (std::size_t c = 0; c < pixels.cols(); ++c) {
      const double v = std::clamp(pixels(r, c), 0.0, 1.0);
      row[c] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

MatD min_max_scaled(const MatD& pixels) {
  double lo = pixels.data()[0], hi = pixels.data()[0];
  for (double v : pixels.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  MatD out(pixels.rows(), pixels.cols());
  if (hi > lo) {
    const double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < pixels.data().size(); ++i)
      out.data()[i] = (pixels.data()[i] - lo) * scale;
  }
  return out;
}

}  // namespace

void write_pgm(const MatD& pixels, const std::string& path) { write_p5(pixels, path); }

void write_pgm_scaled(const MatD& pixels, const std::string& path) {
  if (pixels.rows() == 0 || pixels.cols() == 0)
    throw EmptyInputError("write_pgm: empty image");
  write_p5(min_max_scaled(pixels), path);
}

void write_rangemap_pgm(const RangeMapImage& img, const std::string& path) {
  if (img.stage == Stage::raw_db)
    write_pgm_scaled(img.pixels, path);
  else
    write_pgm(img.pixels, path);
}

void write_radon_pgm(const RadonImage& radon, const std::string& path) {
  write_pgm_scaled(radon.accum, path);
}

MatD spectrogram_image(const Spectrogram& spec, double window_db) {
  const MatD& power = spec.power;
  if (power.rows() == 0 || power.cols() == 0)
    throw EmptyInputError("spectrogram_image: empty spectrogram");
  if (!(window_db > 0.0)) throw ConfigError("spectrogram_image: window_db must be positive");

  double peak = 0.0;
  for (double v : power.data()) peak = std::max(peak, v);
  if (peak <= 0.0) peak = 1.0;

  MatD img(power.rows(), power.cols());
  for (std::size_t r = 0; r < power.rows(); ++r) {
    // Flip vertically: top row carries the highest frequency.
    const std::size_t src = power.rows() - 1 - r;
    for (std::size_t c = 0; c < power.cols(); ++c) {
      const double db = 10.0 * std::log10(std::max(power(src, c), peak * 1e-30) / peak);
      img(r, c) = std::clamp(1.0 + db / window_db, 0.0, 1.0);
    }
  }
  return img;
}

void write_spectrogram_pgm(const Spectrogram& spec, const std::string& path,
                           double window_db) {
  write_p5(spectrogram_image(spec, window_db), path);
}

}  // namespace radseg
