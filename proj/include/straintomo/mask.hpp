// Domain masks: construction, marching-squares outline, ray/polygon geometry.
#pragma once

#include <functional>
#include <vector>

#include "straintomo/fields.hpp"

namespace straintomo {

/// Default relative threshold for support detection.
inline constexpr double kDefaultSupportTol = 1e-9;

/// Traces the 0.5 level of a 0/1 indicator with marching squares. Crossings
/// fall on the midpoints between samples; samples beyond the grid count as
/// outside, so every loop is closed.
std::vector<Loop> trace_boundary(const Grid2& grid, const std::vector<unsigned char>& inside);

/// Mask of samples for which `pred(x, y)` holds, with traced outline.
Mask2 mask_from_predicate(const Grid2& grid, const std::function<bool(double, double)>& pred);

/// Samples with r <= radius about (cx, cy).
Mask2 disk_mask(const Grid2& grid, double radius, double cx = 0.0, double cy = 0.0);

/// Mask of samples whose Frobenius magnitude exceeds tol * max magnitude.
Mask2 mask_from_support(const TensorField2& f, double tol = kDefaultSupportTol);

/// Mask that covers every sample.
Mask2 full_mask(const Grid2& grid);

/// Even-odd point membership for a set of loops.
bool point_in_loops(const std::vector<Loop>& loops, const Point2& p);

/// Total length of the line {origin + t*dir} lying inside the loops.
/// `dir` must be a unit vector.
double chord_length(const std::vector<Loop>& loops, const Point2& origin, const Point2& dir);

/// Euclidean distance from p to the nearest loop edge, and that nearest point.
double distance_to_loops(const std::vector<Loop>& loops, const Point2& p, Point2* nearest = nullptr);

/// Signed area of a loop (positive when counter-clockwise).
double loop_area(const Loop& loop);

}  // namespace straintomo
