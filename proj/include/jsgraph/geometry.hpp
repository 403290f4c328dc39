#ifndef JSGRAPH_GEOMETRY_HPP
#define JSGRAPH_GEOMETRY_HPP

#include <cmath>

namespace jsg {

// Point / vector in the flat (x,t) chart of the vertical plane.
struct Vec2 {
    double x = 0.0;
    double t = 0.0;

    Vec2() = default;
    Vec2(double x_, double t_) : x(x_), t(t_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, t + o.t}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, t - o.t}; }
    Vec2 operator*(double s) const { return {x * s, t * s}; }
    Vec2 operator/(double s) const { return {x / s, t / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; t += o.t; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; t -= o.t; return *this; }

    double norm() const { return std::hypot(x, t); }
    double norm2() const { return x * x + t * t; }
    Vec2 normalized() const { double n = norm(); return {x / n, t / n}; }
    // Rotation by +90 degrees; maps the tangent to the left unit normal.
    Vec2 rot90() const { return {-t, x}; }
};

using Point = Vec2;

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.t * b.t; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.t - a.t * b.x; }
inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

// Twice the signed area of triangle (a,b,c); positive for CCW.
inline double orient2d(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.t - a.t) - (b.t - a.t) * (c.x - a.x);
}

// Axis-aligned working window of the chart.
struct Rect {
    double x_min = -12.0, x_max = 12.0;
    double t_min = -12.0, t_max = 12.0;

    bool contains(const Point& p, double slack = 1e-12) const {
        return p.x >= x_min - slack && p.x <= x_max + slack &&
               p.t >= t_min - slack && p.t <= t_max + slack;
    }
    double width() const { return x_max - x_min; }
    double height() const { return t_max - t_min; }
};

} // namespace jsg

#endif
