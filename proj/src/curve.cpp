#include "jsgraph/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jsgraph/errors.hpp"
#include "jsgraph/quadrature.hpp"

namespace jsg {

ParamCurve ParamCurve::from_points(std::vector<Point> pts, bool closed, double max_segment) {
    if (pts.size() < 2) throw ContractError("ParamCurve needs at least 2 samples");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double len = distance(pts[i], pts[i + 1]);
        if (len == 0.0) {
            std::ostringstream os;
            os << "ParamCurve: duplicate consecutive samples at index " << i;
            throw ContractError(os.str());
        }
        if (len > max_segment) {
            std::ostringstream os;
            os << "ParamCurve: segment " << i << " longer than mesh parameter ("
               << len << " > " << max_segment << ")";
            throw ContractError(os.str());
        }
    }
    ParamCurve c;
    c.pts = std::move(pts);
    c.closed = closed;
    return c;
}

double ParamCurve::flat_length() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += distance(pts[i], pts[i + 1]);
    if (closed && pts.size() > 1) s += distance(pts.back(), pts.front());
    return s;
}

ParamCurve ParamCurve::reversed() const {
    ParamCurve r = *this;
    std::reverse(r.pts.begin(), r.pts.end());
    return r;
}

ParamCurve ParamCurve::concatenated(const ParamCurve& other) const {
    if (distance(back(), other.front()) > 1e-9) {
        throw ContractError("concatenated: curves do not share an endpoint");
    }
    ParamCurve r = *this;
    r.pts.insert(r.pts.end(), other.pts.begin() + 1, other.pts.end());
    return r;
}

ParamCurve AnalyticCurve::sample(double max_segment) const {
    // Estimate arc length on a fine parameter grid, then split so that no
    // flat segment exceeds max_segment.
    const int probe = 256;
    double arc = 0.0;
    Point prev = point(r0);
    for (int i = 1; i <= probe; ++i) {
        Point p = point(r0 + (r1 - r0) * i / probe);
        arc += distance(prev, p);
        prev = p;
    }
    int n = std::max(2, static_cast<int>(std::ceil(arc / max_segment)) + 1);
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        pts.push_back(point(r0 + (r1 - r0) * i / n));
    }
    // Collapse accidental duplicates (degenerate parametrizations).
    std::vector<Point> clean;
    clean.push_back(pts.front());
    for (const Point& p : pts) {
        if (distance(clean.back(), p) > 0.0) clean.push_back(p);
    }
    return ParamCurve::from_points(std::move(clean));
}

AnalyticCurve AnalyticCurve::reversed() const {
    AnalyticCurve r;
    double a = r0, b = r1;
    auto pt = point;
    auto vel = velocity;
    r.point = [pt, a, b](double s) { return pt(a + b - s); };
    r.velocity = [vel, a, b](double s) { return vel(a + b - s) * -1.0; };
    r.r0 = a;
    r.r1 = b;
    return r;
}

AnalyticCurve straight_segment(Point a, Point b) {
    AnalyticCurve c;
    c.point = [a, b](double s) { return a + (b - a) * s; };
    c.velocity = [a, b](double) { return b - a; };
    c.r0 = 0.0;
    c.r1 = 1.0;
    return c;
}

AnalyticCurve vertical_segment(double x, double t0, double t1) {
    return straight_segment({x, t0}, {x, t1});
}

double grim_reaper_half_window(double c) {
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * M_PI / std::abs(c);
}

double grim_reaper_height(double c, double a, double x) {
    if (c == 0.0) return a;
    return a - std::log(std::cos(c * x)) / c;
}

AnalyticCurve grim_reaper_arc(double c, double a, double x0, double x1) {
    double w = grim_reaper_half_window(c);
    if (std::abs(x0) >= w || std::abs(x1) >= w) {
        throw ContractError("grim_reaper_arc: parameter outside the reaper window");
    }
    AnalyticCurve g;
    g.point = [c, a](double x) { return Point{x, grim_reaper_height(c, a, x)}; };
    g.velocity = [c](double x) { return Vec2{1.0, c == 0.0 ? 0.0 : std::tan(c * x)}; };
    g.r0 = x0;
    g.r1 = x1;
    return g;
}

Point tilted_frame_point(double c, double xi, double h) {
    // xi * (c, -1) + h * (1, c)
    return {c * xi + h, -xi + c * h};
}

AnalyticCurve tilted_line_segment(double c, double xi, double h0, double h1) {
    return straight_segment(tilted_frame_point(c, xi, h0), tilted_frame_point(c, xi, h1));
}

double tilted_reaper_half_window(double c) {
    return 0.5 * M_PI / (1.0 + c * c);
}

double tilted_reaper_height(double c, double a, double xi) {
    double tau2 = 1.0 + c * c;
    return a - std::log(std::cos(tau2 * xi)) / tau2;
}

AnalyticCurve tilted_reaper_arc(double c, double a, double xi0, double xi1) {
    double w = tilted_reaper_half_window(c);
    if (std::abs(xi0) >= w || std::abs(xi1) >= w) {
        throw ContractError("tilted_reaper_arc: parameter outside the reaper window");
    }
    double tau2 = 1.0 + c * c;
    AnalyticCurve g;
    g.point = [c, a](double xi) {
        return tilted_frame_point(c, xi, tilted_reaper_height(c, a, xi));
    };
    g.velocity = [c, tau2](double xi) {
        double hp = std::tan(tau2 * xi);
        // d/dxi [xi*sigma + h(xi)*tau]
        return Vec2{c + hp, -1.0 + c * hp};
    };
    g.r0 = xi0;
    g.r1 = xi1;
    return g;
}

double f_length(const MetricModel& m, const ParamCurve& g, double rel_tol) {
    std::size_t n = g.pts.size();
    double total = 0.0;
    auto segment = [&](const Point& a, const Point& b) {
        m.require_in_chart(a);
        m.require_in_chart(b);
        double len = distance(a, b);
        return adaptive_quadrature(
            [&](double s) { return m.line_weight(a + (b - a) * s); }, 0.0, 1.0, rel_tol,
            1e-300, 30) * len;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) total += segment(g.pts[i], g.pts[i + 1]);
    if (g.closed) total += segment(g.pts[n - 1], g.pts[0]);
    return total;
}

double f_length(const MetricModel& m, const AnalyticCurve& g, double rel_tol) {
    // Length is orientation-free; allow parametrizations running backwards.
    double lo = std::min(g.r0, g.r1), hi = std::max(g.r0, g.r1);
    return adaptive_quadrature(
        [&](double r) {
            Point p = g.point(r);
            m.require_in_chart(p);
            return m.line_weight(p) * g.velocity(r).norm();
        },
        lo, hi, rel_tol, 1e-300, 40);
}

namespace {

// Signed flat curvature of the circle through three points, positive when
// the polyline turns left.  Collinear triples give exactly zero.
double menger_curvature(const Point& a, const Point& b, const Point& c) {
    double area2 = orient2d(a, b, c);
    double d0 = distance(a, b), d1 = distance(b, c), d2 = distance(a, c);
    return 2.0 * area2 / (d0 * d1 * d2);
}

} // namespace

double f_curvature(const MetricModel& m, const ParamCurve& g, std::size_t index) {
    m.require_unit_phi("f_curvature");
    if (index == 0 || index + 1 >= g.pts.size()) {
        throw ContractError("f_curvature: index must be strictly interior");
    }
    const Point& a = g.pts[index - 1];
    const Point& b = g.pts[index];
    const Point& c = g.pts[index + 1];
    double k_flat = menger_curvature(a, b, c);
    Vec2 chord = c - a;
    Vec2 normal = chord.normalized().rot90();
    Vec2 v = m.drift_vector(b);
    return std::exp(-0.5 * m.c() * b.t) * (k_flat - dot(v, normal));
}

double max_abs_f_curvature(const MetricModel& m, const ParamCurve& g) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < g.pts.size(); ++i) {
        worst = std::max(worst, std::abs(f_curvature(m, g, i)));
    }
    return worst;
}

} // namespace jsg
