#include "radseg/radon.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "radseg/errors.hpp"

namespace radseg {

namespace detail {

void scatter_projection(std::vector<double>& bins, long max_offset, double p, double q) {
  const double t = p + 0.5;
  const double ft = std::floor(t);
  const long bin = static_cast<long>(ft);
  const long idx = bin + max_offset;
  if (idx < 0 || idx >= static_cast<long>(bins.size()) || (t == ft && idx == 0))
    throw Error("radon_transform: projection " + std::to_string(p) +
                " falls outside the offset grid");
  if (t == ft) {
    bins[static_cast<std::size_t>(idx) - 1] += 0.5 * q;
    bins[static_cast<std::size_t>(idx)] += 0.5 * q;
  } else {
    bins[static_cast<std::size_t>(idx)] += q;
  }
}

}  // namespace detail

ImageGeometry geometry_of(const RangeMapImage& img) {
  return {img.pixels.rows(), img.pixels.cols(), img.row_to_meters, img.col_to_seconds};
}

RadonImage radon_transform(const RangeMapImage& img, double theta_step) {
  if (img.pixels.empty()) throw EmptyInputError("radon_transform: empty image");
  if (!(theta_step > 0.0) || theta_step > 90.0)
    throw ConfigError("radon_transform: theta_step must be in (0, 90] degrees");

  const std::size_t rows = img.pixels.rows();
  const std::size_t cols = img.pixels.cols();

  RadonImage out;
  out.theta_step = theta_step;
  out.geometry = geometry_of(img);

  const auto n_angles =
      static_cast<std::size_t>(std::ceil(180.0 / theta_step - 1e-9));
  out.thetas.resize(n_angles);
  for (std::size_t j = 0; j < n_angles; ++j)
    out.thetas[j] = static_cast<double>(j) * theta_step;

  const long max_offset = static_cast<long>(
      std::ceil(std::hypot(static_cast<double>(rows), static_cast<double>(cols)) / 2.0));
  const std::size_t n_offsets = static_cast<std::size_t>(2 * max_offset + 1);
  out.offsets.resize(n_offsets);
  for (std::size_t i = 0; i < n_offsets; ++i)
    out.offsets[i] = static_cast<double>(static_cast<long>(i) - max_offset);

  // Centered coordinates, y up, per pixel; zero pixels can't move mass.
  struct Px {
    double x, y, q;
  };
  std::vector<Px> pixels;
  pixels.reserve(rows * cols / 4);
  const double cx = out.geometry.center_col();
  const double cy = out.geometry.center_row();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = img.pixels.row_ptr(r);
    const double y = cy - static_cast<double>(r);
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c] == 0.0) continue;
      pixels.push_back({static_cast<double>(c) - cx, y, 0.25 * row[c]});
    }
  }

  out.accum = MatD(n_offsets, n_angles);
  std::vector<double> column(n_offsets);
  for (std::size_t j = 0; j < n_angles; ++j) {
    const double cth = deg_cos(out.thetas[j]);
    const double sth = deg_sin(out.thetas[j]);
    const double qc = 0.25 * cth;
    const double qs = 0.25 * sth;
    std::fill(column.begin(), column.end(), 0.0);
    for (const Px& px : pixels) {
      const double base = px.x * cth + px.y * sth;
      detail::scatter_projection(column, max_offset, base + qc + qs, px.q);
      detail::scatter_projection(column, max_offset, base + qc - qs, px.q);
      detail::scatter_projection(column, max_offset, base - qc + qs, px.q);
      detail::scatter_projection(column, max_offset, base - qc - qs, px.q);
    }
    for (std::size_t i = 0; i < n_offsets; ++i) out.accum(i, j) = column[i];
  }
  return out;
}

std::vector<RadonPeak> detect_peaks(const RadonImage& radon, const PeakParams& params) {
  if (radon.accum.empty()) throw EmptyInputError("detect_peaks: empty accumulator");

  double global_max = 0.0;
  for (double v : radon.accum.data()) global_max = std::max(global_max, v);
  if (!(global_max > 0.0))
    throw NoPeaksError("detect_peaks: accumulator carries no positive mass");

  const double floor = params.min_rel_height * global_max;
  const long n_off = static_cast<long>(radon.accum.rows());
  const long n_th = static_cast<long>(radon.accum.cols());
  const long sep_th = std::max<long>(
      0, std::lround(params.min_sep_theta_deg / radon.theta_step));
  const long sep_off = std::max(0, params.min_sep_offset_bins);

  struct Candidate {
    double value;
    long i, j;
  };
  std::vector<Candidate> candidates;
  for (long i = 0; i < n_off; ++i) {
    for (long j = 0; j < n_th; ++j) {
      const double v = radon.accum(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (v < floor) continue;
      bool is_max = true;
      for (long di = -sep_off; di <= sep_off && is_max; ++di) {
        const long ii = i + di;
        if (ii < 0 || ii >= n_off) continue;
        for (long dj = -sep_th; dj <= sep_th; ++dj) {
          const long jj = j + dj;
          if (jj < 0 || jj >= n_th || (di == 0 && dj == 0)) continue;
          if (radon.accum(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({v, i, j});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.value, a.j, a.i) < std::tie(a.value, b.j, b.i);
  });

  std::vector<RadonPeak> peaks;
  std::vector<std::pair<long, long>> kept;
  for (const Candidate& c : candidates) {
    if (static_cast<int>(peaks.size()) >= params.max_peaks) break;
    bool suppressed = false;
    for (const auto& [ki, kj] : kept) {
      if (std::abs(c.i - ki) <= sep_off && std::abs(c.j - kj) <= sep_th) {
        suppressed = true;
        break;
      }
    }
    if (suppressed) continue;
    kept.emplace_back(c.i, c.j);
    RadonPeak peak;
    peak.theta_deg = radon.thetas[static_cast<std::size_t>(c.j)];
    peak.x_prime = radon.offsets[static_cast<std::size_t>(c.i)];
    peak.value = c.value;
    peak.class_hint = std::abs(peak.theta_deg - 90.0) <= 2.0 * radon.theta_step
                          ? PeakClass::horizontal
                          : PeakClass::sloped;
    peaks.push_back(peak);
  }

  if (peaks.empty())
    throw NoPeaksError("detect_peaks: no neighborhood maxima above " +
                       std::to_string(params.min_rel_height) + " of the global max");
  return peaks;
}

LineModel peak_to_line(const RadonPeak& peak, const ImageGeometry& geometry) {
  const double s = deg_sin(peak.theta_deg);
  if (s == 0.0)
    throw VerticalLineError("peak_to_line: theta = " + std::to_string(peak.theta_deg) +
                            " describes a vertical trace (infinite range rate)");
  LineModel line;
  line.m = deg_cos(peak.theta_deg) / s;
  line.n = peak.x_prime / s;
  line.theta_src = peak.theta_deg;
  line.x_prime_src = peak.x_prime;
  line.peak_value = peak.value;
  line.col_start = 0.0;
  line.col_end = geometry.cols > 0 ? static_cast<double>(geometry.cols - 1) : 0.0;
  line.geometry = geometry;
  return line;
}

TransitionPoint intersect_lines(const LineModel& a, const LineModel& b,
                                double slope_epsilon) {
  if (a.geometry.rows != b.geometry.rows || a.geometry.cols != b.geometry.cols)
    throw ConsistencyError("intersect_lines: lines come from different image geometries");
  const double dm = a.m - b.m;
  if (std::abs(dm) <= slope_epsilon)
    throw ParallelLinesError("intersect_lines: slopes " + std::to_string(a.m) + " and " +
                             std::to_string(b.m) + " differ by less than " +
                             std::to_string(slope_epsilon));

  const double x = (b.n - a.n) / dm;
  const double y = a.m * x + a.n;

  TransitionPoint tp;
  tp.col = a.geometry.center_col() - x;
  tp.row = a.geometry.center_row() - y;
  tp.time_s = a.geometry.col_to_seconds.at(tp.col);
  tp.range_m = a.geometry.row_to_meters.at(tp.row);
  return tp;
}

std::vector<LineModel> order_lines_by_support(std::vector<LineModel> lines,
                                              const RangeMapImage& img) {
  const std::size_t rows = img.pixels.rows();
  const std::size_t cols = img.pixels.cols();
  std::vector<std::pair<double, std::size_t>> keys(lines.size());

  for (std::size_t k = 0; k < lines.size(); ++k) {
    LineModel& line = lines[k];
    double mass = 0.0;
    double moment = 0.0;
    long first = -1;
    long last = -1;
    for (std::size_t c = 0; c < cols; ++c) {
      const double center = line.row_at(static_cast<double>(c));
      const long r0 = std::max<long>(0, static_cast<long>(std::ceil(center - 2.0)));
      const long r1 =
          std::min<long>(static_cast<long>(rows) - 1, static_cast<long>(std::floor(center + 2.0)));
      double col_mass = 0.0;
      for (long r = r0; r <= r1; ++r)
        col_mass += img.pixels(static_cast<std::size_t>(r), c);
      if (col_mass > 0.0) {
        mass += col_mass;
        moment += col_mass * static_cast<double>(c);
        if (first < 0) first = static_cast<long>(c);
        last = static_cast<long>(c);
      }
    }
    if (mass > 0.0) {
      line.col_start = static_cast<double>(first);
      line.col_end = static_cast<double>(last);
      keys[k] = {moment / mass, k};
    } else {
      keys[k] = {0.5 * (line.col_start + line.col_end), k};
    }
  }

  std::stable_sort(keys.begin(), keys.end());
  std::vector<LineModel> ordered;
  ordered.reserve(lines.size());
  for (const auto& [centroid, k] : keys) ordered.push_back(lines[k]);
  return ordered;
}

std::vector<TransitionPoint> transition_times(std::vector<LineModel>& lines,
                                              double slope_epsilon) {
  // Near-parallel neighbors are one motion seen twice; keep the stronger peak
  // and let its span absorb the weaker one's.
  bool merged = true;
  while (merged && lines.size() > 1) {
    merged = false;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
      if (std::abs(lines[i].m - lines[i + 1].m) > slope_epsilon) continue;
      const std::size_t victim =
          lines[i].peak_value >= lines[i + 1].peak_value ? i + 1 : i;
      const std::size_t keep = victim == i ? i + 1 : i;
      lines[keep].col_start = std::min(lines[i].col_start, lines[i + 1].col_start);
      lines[keep].col_end = std::max(lines[i].col_end, lines[i + 1].col_end);
      lines.erase(lines.begin() + static_cast<long>(victim));
      merged = true;
      break;
    }
  }

  if (lines.size() < 2) return {};

  std::vector<TransitionPoint> transitions;
  transitions.reserve(lines.size() - 1);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i)
    transitions.push_back(intersect_lines(lines[i], lines[i + 1], slope_epsilon));

  for (std::size_t i = 0; i < transitions.size(); ++i) {
    lines[i].col_end = std::min(lines[i].col_end, transitions[i].col);
    lines[i + 1].col_start = std::max(lines[i + 1].col_start, transitions[i].col);
  }
  return transitions;
}

}  // namespace radseg
