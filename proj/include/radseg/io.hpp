#pragma once

#include <string>

#include "radseg/config.hpp"
#include "radseg/core.hpp"

namespace radseg {

// A cube on disk is a pair of files: <path> holds raw little-endian float32
// samples interleaved (I, Q), range-bin-major; <path>.hdr is a "key = value"
// text header with M, N, prf, range_resolution, range_offset and version = 1.
RadarCube load_radar_cube(const std::string& path);
void save_radar_cube(const std::string& path, const RadarCube& cube);

inline std::string cube_header_path(const std::string& payload_path) {
  return payload_path + ".hdr";
}

PipelineConfig load_config(const std::string& path);

std::string read_text_file(const std::string& path);          // throws IoError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace radseg
