#pragma once

#include <string>

#include "radseg/core.hpp"
#include "radseg/microdoppler.hpp"
#include "radseg/radon.hpp"
#include "radseg/rangemap.hpp"

namespace radseg {

// 8-bit binary (P5) PGM. Values are expected in [0, 1]; anything outside is
// clamped. Row 0 is the top of the image.
void write_pgm(const MatD& pixels, const std::string& path);

// Min-max scales arbitrary data into [0, 1] before writing. A constant image
// comes out black.
void write_pgm_scaled(const MatD& pixels, const std::string& path);

// Stage-aware dump: raw_db is min-max scaled, every later stage is already
// in [0, 1] and is clamped directly.
void write_rangemap_pgm(const RangeMapImage& img, const std::string& path);

void write_radon_pgm(const RadonImage& radon, const std::string& path);

// Log-compressed power relative to the per-image maximum, window_db wide,
// as [0, 1] pixels.  Row 0 is the highest frequency so positive Doppler reads
// upward.
MatD spectrogram_image(const Spectrogram& spec, double window_db = 60.0);

void write_spectrogram_pgm(const Spectrogram& spec, const std::string& path,
                           double window_db = 60.0);

}  // namespace radseg
