#include "radseg/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kv.hpp"
#include "radseg/errors.hpp"

namespace radseg {

namespace {

constexpr long long kCubeFormatVersion = 1;

static_assert(sizeof(float) == 4, "payload format assumes 32-bit floats");

struct CubeHeader {
  std::size_t bins = 0;
  std::size_t pulses = 0;
  double prf = 0.0;
  double range_resolution = 0.0;
  double range_offset = 0.0;
};

CubeHeader parse_cube_header(const std::string& text, const std::string& source_name) {
  std::map<std::string, kv::Entry> fields;
  for (const auto& entry : kv::parse(text, source_name)) {
    if (fields.count(entry.key))
      throw FormatError(source_name + ": duplicate header key '" + entry.key + "'");
    fields[entry.key] = entry;
  }

  auto get = [&](const std::string& key) -> const kv::Entry& {
    auto it = fields.find(key);
    if (it == fields.end())
      throw FormatError(source_name + ": missing header key '" + key + "'");
    return it->second;
  };

  const long long version = kv::to_int(get("version"), source_name);
  if (version != kCubeFormatVersion)
    throw FormatError(source_name + ": unsupported format version " +
                      std::to_string(version));

  CubeHeader header;
  const long long bins = kv::to_int(get("M"), source_name);
  const long long pulses = kv::to_int(get("N"), source_name);
  header.prf = kv::to_double(get("prf"), source_name);
  header.range_resolution = kv::to_double(get("range_resolution"), source_name);
  header.range_offset = kv::to_double(get("range_offset"), source_name);

  for (const auto& [key, entry] : fields) {
    if (key != "M" && key != "N" && key != "prf" && key != "range_resolution" &&
        key != "range_offset" && key != "version")
      throw FormatError(source_name + ": unknown header key '" + key + "'");
  }

  if (bins < 1 || pulses < 1)
    throw DataError(source_name + ": M and N must be >= 1, got M = " +
                    std::to_string(bins) + ", N = " + std::to_string(pulses));
  if (!(header.prf > 0.0) || !std::isfinite(header.prf))
    throw DataError(source_name + ": prf must be positive and finite");
  if (!(header.range_resolution > 0.0) || !std::isfinite(header.range_resolution))
    throw DataError(source_name + ": range_resolution must be positive and finite");
  if (!std::isfinite(header.range_offset))
    throw DataError(source_name + ": range_offset must be finite");

  header.bins = static_cast<std::size_t>(bins);
  header.pulses = static_cast<std::size_t>(pulses);
  return header;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed on '" + path + "'");
}

RadarCube load_radar_cube(const std::string& path) {
  const std::string header_path = cube_header_path(path);
  const CubeHeader header = parse_cube_header(read_text_file(header_path), header_path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  in.seekg(0, std::ios::end);
  const std::uint64_t actual_bytes = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);

  const std::uint64_t expected_floats =
      2ull * header.bins * header.pulses;  // interleaved I, Q
  const std::uint64_t expected_bytes = expected_floats * sizeof(float);
  if (actual_bytes != expected_bytes)
    throw SizeError("'" + path + "': payload holds " + std::to_string(actual_bytes) +
                    " bytes, header implies " + std::to_string(expected_bytes) + " (M = " +
                    std::to_string(header.bins) + ", N = " + std::to_string(header.pulses) +
                    ")");

  std::vector<float> raw(expected_floats);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(expected_bytes));
  if (!in) throw IoError("read failed on '" + path + "'");

  RadarCube cube;
  cube.prf = header.prf;
  cube.range_resolution = header.range_resolution;
  cube.range_offset = header.range_offset;
  cube.samples = MatCF(header.bins, header.pulses);
  for (std::size_t i = 0; i < cube.samples.size(); ++i) {
    const float re = raw[2 * i];
    const float im = raw[2 * i + 1];
    if (!std::isfinite(re) || !std::isfinite(im))
      throw DataError("'" + path + "': non-finite sample at index " + std::to_string(i));
    cube.samples.data()[i] = {re, im};
  }
  return cube;
}

void save_radar_cube(const std::string& path, const RadarCube& cube) {
  if (cube.samples.empty()) throw EmptyInputError("refusing to save an empty cube");

  std::ostringstream header;
  char buf[64];
  header << "M = " << cube.num_bins() << "\n";
  header << "N = " << cube.num_pulses() << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", cube.prf);
  header << "prf = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", cube.range_resolution);
  header << "range_resolution = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", cube.range_offset);
  header << "range_offset = " << buf << "\n";
  header << "version = " << kCubeFormatVersion << "\n";
  write_text_file(cube_header_path(path), header.str());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  std::vector<float> raw(2 * cube.samples.size());
  for (std::size_t i = 0; i < cube.samples.size(); ++i) {
    raw[2 * i] = cube.samples.data()[i].real();
    raw[2 * i + 1] = cube.samples.data()[i].imag();
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw IoError("write failed on '" + path + "'");
}

PipelineConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, path);
}

}  // namespace radseg
