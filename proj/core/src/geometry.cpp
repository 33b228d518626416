#include "coda/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace coda {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

void add_edge_axes(std::span<const Point2> poly, std::vector<Point2>& axes) {
    if (poly.size() < 2) return;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        const double dx = q.x - p.x;
        const double dy = q.y - p.y;
        if (dx == 0.0 && dy == 0.0) continue;
        axes.push_back({-dy, dx});
        if (poly.size() == 2) axes.push_back({dx, dy});
    }
}

Point2 centroid(std::span<const Point2> poly) {
    Point2 c;
    for (const auto& p : poly) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(poly.size());
    c.y /= static_cast<double>(poly.size());
    return c;
}

}  // namespace

std::vector<std::size_t> convex_hull(std::span<const Point2> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].x != points[b].x) return points[a].x < points[b].x;
        if (points[a].y != points[b].y) return points[a].y < points[b].y;
        return a < b;
    });
    order.erase(std::unique(order.begin(), order.end(),
                            [&](std::size_t a, std::size_t b) {
                                return points[a].x == points[b].x && points[a].y == points[b].y;
                            }),
                order.end());
    if (order.size() < 3) return order;

    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (auto idx : order) {
        while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[idx]) <= 0.0) --k;
        hull[k++] = idx;
    }
    const std::size_t lower = k + 1;
    for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
        while (k >= lower && cross(points[hull[k - 2]], points[hull[k - 1]], points[*it]) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

bool convex_polygons_overlap(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) return false;
    std::vector<Point2> axes;
    add_edge_axes(a, axes);
    add_edge_axes(b, axes);
    const Point2 ca = centroid(a);
    const Point2 cb = centroid(b);
    if (ca.x != cb.x || ca.y != cb.y) axes.push_back({cb.x - ca.x, cb.y - ca.y});
    if (axes.empty()) return true;  // coincident points

    for (const auto& axis : axes) {
        double amin = std::numeric_limits<double>::infinity();
        double amax = -amin;
        double bmin = amin;
        double bmax = -amin;
        for (const auto& p : a) {
            const double d = p.x * axis.x + p.y * axis.y;
            amin = std::min(amin, d);
            amax = std::max(amax, d);
        }
        for (const auto& p : b) {
            const double d = p.x * axis.x + p.y * axis.y;
            bmin = std::min(bmin, d);
            bmax = std::max(bmax, d);
        }
        if (amax < bmin || bmax < amin) return false;
    }
    return true;
}

}  // namespace coda
