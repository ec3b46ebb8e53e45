#pragma once

#include <string>
#include <vector>

#include "radseg/microdoppler.hpp"
#include "radseg/radon.hpp"

namespace radseg {

enum class MotionClass { translation, in_place };
enum class Direction { approaching, receding, none };
enum class SegmentSource { radon_line, pbc_span };

std::string motion_class_name(MotionClass c);
std::string direction_name(Direction d);
std::string segment_source_name(SegmentSource s);

struct SlopeLabel {
  MotionClass motion_class = MotionClass::in_place;
  Direction direction = Direction::none;
  double slope_m_per_s = 0.0;
};

// Physical range rate of a line is m * (meters per row) / (seconds per column).
// Within slope_floor of zero it is an in-place trace (slope reported as 0);
// otherwise the sign separates approaching from receding.
SlopeLabel classify_slope(const LineModel& line, double slope_floor);

struct MotionSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  MotionClass motion_class = MotionClass::translation;
  Direction direction = Direction::none;
  SegmentSource source = SegmentSource::radon_line;
  double slope_m_per_s = 0.0;
};

struct Timeline {
  std::vector<MotionSegment> segments;  // sorted by start, non-overlapping
  double coverage = 0.0;                // fraction of the observation covered
};

// Assembles the output timeline.  Translation lines become one segment over
// their clipped span; in-place lines are replaced by their activity spans
// (spans_per_line runs parallel to lines and must be empty for translation
// lines).  Lines and transitions must come ordered from transition_times.
// Overlaps are resolved by truncating the later segment at the earlier one's
// end; segments emptied by truncation are dropped.
Timeline build_timeline(const std::vector<LineModel>& lines,
                        const std::vector<TransitionPoint>& transitions,
                        const std::vector<std::vector<ActivitySpan>>& spans_per_line,
                        double slope_floor, double observation_s);

// CSV with header start_s,end_s,class,direction,slope_m_per_s,source and
// three-decimal fixed-point fields.
std::string timeline_to_csv(const Timeline& timeline);

}  // namespace radseg
