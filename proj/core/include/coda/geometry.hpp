#ifndef CODA_GEOMETRY_HPP
#define CODA_GEOMETRY_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace coda {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Andrew's monotone chain. Returns indices into `points` of the hull
/// vertices in counter-clockwise order starting from the leftmost (then
/// lowest) point; collinear boundary points are omitted.
std::vector<std::size_t> convex_hull(std::span<const Point2> points);

/// Separating-axis test for two convex polygons given by their vertices in
/// order. Points and segments are valid degenerate polygons. Touching
/// boundaries count as overlap.
bool convex_polygons_overlap(std::span<const Point2> a, std::span<const Point2> b);

}  // namespace coda

#endif  // CODA_GEOMETRY_HPP
