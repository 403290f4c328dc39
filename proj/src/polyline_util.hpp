#ifndef JSGRAPH_POLYLINE_UTIL_HPP
#define JSGRAPH_POLYLINE_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "jsgraph/geometry.hpp"

namespace jsg::detail {

inline double polyline_signed_area(const std::vector<Point>& loop) {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        a += cross(loop[i], loop[(i + 1) % loop.size()]);
    }
    return 0.5 * a;
}

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return distance(p, a);
    double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(a + ab * s, p);
}

inline bool point_in_loop(const std::vector<Point>& loop, const Point& p,
                          double boundary_tol) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
        if (point_segment_distance(p, loop[i], loop[(i + 1) % loop.size()]) <= boundary_tol) {
            return true;
        }
    }
    bool inside = false;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point& a = loop[i];
        const Point& b = loop[(i + 1) % loop.size()];
        if ((a.t > p.t) != (b.t > p.t)) {
            double xx = a.x + (p.t - a.t) * (b.x - a.x) / (b.t - a.t);
            if (xx > p.x) inside = !inside;
        }
    }
    return inside;
}

inline bool segments_cross(const Point& p1, const Point& p2, const Point& p3,
                           const Point& p4) {
    double scale = std::max({distance(p1, p2), distance(p3, p4), 1e-30});
    double eps = 1e-12 * scale * scale;
    double d1 = orient2d(p3, p4, p1);
    double d2 = orient2d(p3, p4, p2);
    double d3 = orient2d(p1, p2, p3);
    double d4 = orient2d(p1, p2, p4);
    return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
           ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

inline bool polyline_is_simple(const std::vector<Point>& loop) {
    std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == (i + 1) % n || (j + 1) % n == i) continue;
            if (segments_cross(loop[i], loop[(i + 1) % n], loop[j], loop[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace jsg::detail

#endif
