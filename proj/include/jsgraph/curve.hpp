#ifndef JSGRAPH_CURVE_HPP
#define JSGRAPH_CURVE_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "jsgraph/geometry.hpp"
#include "jsgraph/metric.hpp"

namespace jsg {

// Sampled curve in the (x,t) chart.  Orientation follows sample order; the
// unit normal is the tangent rotated by +90 degrees (left of travel).
struct ParamCurve {
    std::vector<Point> pts;
    bool closed = false;

    // Validates: >= 2 samples, consecutive samples distinct, per-segment
    // flat length <= max_segment.
    static ParamCurve from_points(std::vector<Point> pts, bool closed = false,
                                  double max_segment = std::numeric_limits<double>::infinity());

    std::size_t size() const { return pts.size(); }
    const Point& front() const { return pts.front(); }
    const Point& back() const { return pts.back(); }
    double flat_length() const;
    ParamCurve reversed() const;
    // Appends other (which must start where this ends).
    ParamCurve concatenated(const ParamCurve& other) const;
};

// Exact parametrization r in [r0, r1] -> chart; carried alongside sampled
// edges so that lengths can be quadratured on the true curve instead of its
// polyline approximation.
struct AnalyticCurve {
    std::function<Point(double)> point;
    std::function<Vec2(double)> velocity;
    double r0 = 0.0;
    double r1 = 1.0;

    Point start() const { return point(r0); }
    Point end() const { return point(r1); }
    // Polyline with flat segment lengths <= max_segment.
    ParamCurve sample(double max_segment) const;
    AnalyticCurve reversed() const;
};

// -- named analytic curves ---------------------------------------------------

AnalyticCurve straight_segment(Point a, Point b);
AnalyticCurve vertical_segment(double x, double t0, double t1);

// Translating curve of speed c in the Euclidean model, shifted to height a:
// t = a - (1/c) log cos(c x), |x| < pi/(2c).  For c = 0 degenerates to the
// horizontal line t = a.
AnalyticCurve grim_reaper_arc(double c, double a, double x0, double x1);
double grim_reaper_height(double c, double a, double x);
double grim_reaper_half_window(double c);

// Rotated frame of the hyperbolic model: sigma = (c,-1), tau = (1,c).
// Coordinates (xi, h) map to the chart point xi*sigma + h*tau.
Point tilted_frame_point(double c, double xi, double h);
// Line in the tau direction at fixed xi (a weighted geodesic in h2xr).
AnalyticCurve tilted_line_segment(double c, double xi, double h0, double h1);
// Reaper in the rotated frame: h = a - log(cos(T xi))/T with T = 1 + c^2,
// |xi| < pi/(2T).
AnalyticCurve tilted_reaper_arc(double c, double a, double xi0, double xi1);
double tilted_reaper_height(double c, double a, double xi);
double tilted_reaper_half_window(double c);

// -- weighted length and curvature -------------------------------------------

// Weighted length of the polyline: per-segment adaptive quadrature of the
// line weight.  Throws ChartError if any sample leaves the chart.
double f_length(const MetricModel& m, const ParamCurve& g, double rel_tol = 1e-10);
// Same on the exact parametrization; accurate to the quadrature tolerance.
double f_length(const MetricModel& m, const AnalyticCurve& g, double rel_tol = 1e-12);

// Scalar weighted curvature at an interior sample, via the circumscribed
// circle of three consecutive samples: e^{-ct/2} (k_flat - <drift, N>).
// Zero (within discretization error) along weighted geodesics; flips sign
// under orientation reversal.  Throws ContractError at endpoints.
double f_curvature(const MetricModel& m, const ParamCurve& g, std::size_t index);

// Max |f_curvature| over all interior samples (0 for 2-point curves).
double max_abs_f_curvature(const MetricModel& m, const ParamCurve& g);

} // namespace jsg

#endif
