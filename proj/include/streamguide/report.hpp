#ifndef STREAMGUIDE_REPORT_HPP
#define STREAMGUIDE_REPORT_HPP

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "streamguide/flowfield.hpp"
#include "streamguide/simulator.hpp"

namespace streamguide {

/// One row per tick; obstacle positions appended as ox<i>, oy<i>.
void write_trace_csv(std::ostream& os, const RunTrace& trace);

/// Outcome, summary metrics and per-obstacle encounter report as JSON.
std::string summary_json(const RunTrace& trace);

/// Waypoints, costs and spins of each planning step as JSON.
std::string planning_json(const RunTrace& trace);

/// Control points of every segment, one row per point.
void write_segments_csv(std::ostream& os, const RunTrace& trace);

/// Columns m, n, x, y, psi, cell. Unusable cells carry psi = nan.
void write_field_csv(std::ostream& os, const FieldGrid& field);

/// Field of planning step `step` rebuilt from its recorded snapshot.
FieldGrid planning_field(const RunTrace& trace, std::size_t step);

using LineSegment = std::array<Vec2, 2>;

/// Marching squares for one level. Cells touching an unusable grid point are
/// skipped; saddle cells are resolved by the cell-centre average.
std::vector<LineSegment> contour_segments(const FieldGrid& field, double level);

/// `count` levels evenly spaced between the 2nd and 98th percentile of the
/// usable psi values.
std::vector<double> contour_levels(const FieldGrid& field, int count);

/// Plot of one planning snapshot: streamlines, obstacle discs, target,
/// waypoints so far, and the trajectory up to the planning time.
std::string snapshot_svg(const RunTrace& trace, std::size_t step);

/// Whole-run plot: final obstacle positions, path and trajectory.
std::string trajectory_svg(const RunTrace& trace);

}  // namespace streamguide

#endif  // STREAMGUIDE_REPORT_HPP
