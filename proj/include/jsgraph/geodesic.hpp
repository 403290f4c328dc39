#ifndef JSGRAPH_GEODESIC_HPP
#define JSGRAPH_GEODESIC_HPP

#include <optional>
#include <utility>

#include "jsgraph/curve.hpp"
#include "jsgraph/metric.hpp"

namespace jsg {

enum class ShotTermination { LengthReached, ChartExit, CurvatureBlowup };

const char* to_string(ShotTermination t);

struct ShootOptions {
    double ode_tol = 1e-9;       // local error target per unit step
    double max_segment = 5e-3;   // sample spacing cap (also the max ODE step)
    double curvature_limit = 1e6;
};

// Shot weighted geodesic: unit flat speed, curvature <drift, N> integrated by
// adaptive RK45.  Records why integration stopped.
struct GeodesicShot {
    Point start;
    double angle = 0.0; // normalized to [0, 2pi)
    ShotTermination termination = ShotTermination::LengthReached;
    ParamCurve curve;
};

GeodesicShot shoot_geodesic(const MetricModel& m, Point p0, double angle,
                            double max_flat_length, const ShootOptions& opts = {});

struct ConnectOptions {
    double endpoint_tol = 1e-8;
    double angle_step_deg = 1.0;
    double max_length_factor = 3.0;
    // Restrict the scan (radians); default scans the full circle.
    std::optional<std::pair<double, double>> angle_window;
    // The angle root is read off the polyline, so chord sag biases it: the
    // scan runs on coarse shots, the root is then polished on fine ones.
    double scan_segment = 1e-2;
    ShootOptions shoot{1e-9, 1e-3, 1e6};
};

// Weighted geodesic from p to q by shooting plus bisection on the signed
// miss at the target.  Returns the shortest connection found; throws
// NoConnectionError when the scan brackets no root.
ParamCurve connect_geodesic(const MetricModel& m, Point p, Point q,
                            const ConnectOptions& opts = {});

} // namespace jsg

#endif
