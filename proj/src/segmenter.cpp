#include "radseg/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "radseg/errors.hpp"

namespace radseg {

std::string motion_class_name(MotionClass c) {
  return c == MotionClass::translation ? "translation" : "in_place";
}

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::approaching: return "approaching";
    case Direction::receding: return "receding";
    case Direction::none: return "none";
  }
  return "none";
}

std::string segment_source_name(SegmentSource s) {
  return s == SegmentSource::radon_line ? "radon_line" : "pbc_span";
}

SlopeLabel classify_slope(const LineModel& line, double slope_floor) {
  const double sec_per_col = line.geometry.col_to_seconds.step;
  if (!(sec_per_col > 0.0))
    throw DataError("classify_slope: non-positive column time step");
  const double physical = line.m * line.geometry.row_to_meters.step / sec_per_col;

  SlopeLabel label;
  if (std::abs(physical) <= slope_floor) {
    label.motion_class = MotionClass::in_place;
    label.direction = Direction::none;
    label.slope_m_per_s = 0.0;
  } else {
    label.motion_class = MotionClass::translation;
    label.direction = physical < 0.0 ? Direction::approaching : Direction::receding;
    label.slope_m_per_s = physical;
  }
  return label;
}

Timeline build_timeline(const std::vector<LineModel>& lines,
                        const std::vector<TransitionPoint>& transitions,
                        const std::vector<std::vector<ActivitySpan>>& spans_per_line,
                        double slope_floor, double observation_s) {
  if (!spans_per_line.empty() && spans_per_line.size() != lines.size())
    throw ConsistencyError("build_timeline: spans_per_line must match lines");
  if (!lines.empty() && transitions.size() + 1 != lines.size() && !transitions.empty())
    throw ConsistencyError("build_timeline: " + std::to_string(lines.size()) +
                           " lines cannot have " + std::to_string(transitions.size()) +
                           " transitions");

  // Every transition must touch the spans of the two lines it separates.
  for (std::size_t k = 0; k < transitions.size(); ++k) {
    const double col = transitions[k].col;
    auto near_span = [col](const LineModel& line) {
      return col >= line.col_start - 1.0 && col <= line.col_end + 1.0;
    };
    if (!near_span(lines[k]) && !near_span(lines[k + 1]))
      throw ConsistencyError("build_timeline: transition at column " +
                             std::to_string(col) + " lies outside both adjacent lines");
  }

  Timeline timeline;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const LineModel& line = lines[i];
    const SlopeLabel label = classify_slope(line, slope_floor);
    if (label.motion_class == MotionClass::translation) {
      if (i < spans_per_line.size() && !spans_per_line[i].empty())
        throw ConsistencyError(
            "build_timeline: activity spans attached to a translation line");
      if (line.col_end <= line.col_start) continue;  // emptied by clipping
      MotionSegment seg;
      seg.start_s = line.start_s();
      seg.end_s = line.end_s();
      seg.motion_class = MotionClass::translation;
      seg.direction = label.direction;
      seg.source = SegmentSource::radon_line;
      seg.slope_m_per_s = label.slope_m_per_s;
      timeline.segments.push_back(seg);
    } else {
      if (i >= spans_per_line.size()) continue;
      for (const ActivitySpan& span : spans_per_line[i]) {
        MotionSegment seg;
        seg.start_s = span.start_s;
        seg.end_s = span.end_s;
        seg.motion_class = MotionClass::in_place;
        seg.direction = Direction::none;
        seg.source = SegmentSource::pbc_span;
        seg.slope_m_per_s = 0.0;
        timeline.segments.push_back(seg);
      }
    }
  }

  std::stable_sort(timeline.segments.begin(), timeline.segments.end(),
                   [](const MotionSegment& a, const MotionSegment& b) {
                     return a.start_s < b.start_s;
                   });

  // Truncate overlaps in favor of the earlier segment.
  std::vector<MotionSegment> resolved;
  for (MotionSegment seg : timeline.segments) {
    if (!resolved.empty() && seg.start_s < resolved.back().end_s)
      seg.start_s = resolved.back().end_s;
    if (seg.end_s - seg.start_s > 1e-12) resolved.push_back(seg);
  }
  timeline.segments = std::move(resolved);

  double covered = 0.0;
  for (const MotionSegment& seg : timeline.segments) covered += seg.end_s - seg.start_s;
  timeline.coverage =
      observation_s > 0.0 ? std::clamp(covered / observation_s, 0.0, 1.0) : 0.0;
  return timeline;
}

std::string timeline_to_csv(const Timeline& timeline) {
  std::ostringstream out;
  out << "start_s,end_s,class,direction,slope_m_per_s,source\n";
  char buf[128];
  for (const MotionSegment& seg : timeline.segments) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f", seg.start_s, seg.end_s);
    out << buf << ',' << motion_class_name(seg.motion_class) << ','
        << direction_name(seg.direction) << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", seg.slope_m_per_s);
    out << buf << ',' << segment_source_name(seg.source) << "\n";
  }
  return out.str();
}

}  // namespace radseg
