#include "jsgraph/geodesic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "jsgraph/errors.hpp"

namespace jsg {

const char* to_string(ShotTermination t) {
    switch (t) {
        case ShotTermination::LengthReached: return "length reached";
        case ShotTermination::ChartExit: return "chart exit";
        case ShotTermination::CurvatureBlowup: return "curvature blow-up";
    }
    return "?";
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// State (x, t, theta): unit-speed position plus tangent angle.
struct OdeState {
    double x, t, theta;
};

OdeState axpy(const OdeState& y, double h, const OdeState& k) {
    return {y.x + h * k.x, y.t + h * k.t, y.theta + h * k.theta};
}

class GeodesicOde {
public:
    GeodesicOde(const MetricModel& m, double curvature_limit)
        : m_(m), limit_(curvature_limit) {}

    OdeState rhs(const OdeState& y) const {
        double ct = std::cos(y.theta), st = std::sin(y.theta);
        // curvature = <drift, N> with N = tangent rotated by +90 degrees
        double vx = m_.rho_log_deriv(y.x);
        double vt = m_.c();
        double kappa = -vx * st + vt * ct;
        if (std::abs(kappa) > limit_) blowup_ = true;
        return {ct, st, kappa};
    }

    bool blew_up() const { return blowup_; }

private:
    const MetricModel& m_;
    double limit_;
    mutable bool blowup_ = false;
};

// Dormand-Prince 5(4) step; returns 5th-order state and the embedded error.
struct DpStep {
    OdeState y5;
    double err;
};

DpStep dp45(const GeodesicOde& f, const OdeState& y, double h) {
    const OdeState k1 = f.rhs(y);
    const OdeState k2 = f.rhs(axpy(y, h * (1.0 / 5.0), k1));
    OdeState tmp = y;
    tmp = axpy(tmp, h * (3.0 / 40.0), k1);
    tmp = axpy(tmp, h * (9.0 / 40.0), k2);
    const OdeState k3 = f.rhs(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (44.0 / 45.0), k1);
    tmp = axpy(tmp, h * (-56.0 / 15.0), k2);
    tmp = axpy(tmp, h * (32.0 / 9.0), k3);
    const OdeState k4 = f.rhs(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (19372.0 / 6561.0), k1);
    tmp = axpy(tmp, h * (-25360.0 / 2187.0), k2);
    tmp = axpy(tmp, h * (64448.0 / 6561.0), k3);
    tmp = axpy(tmp, h * (-212.0 / 729.0), k4);
    const OdeState k5 = f.rhs(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (9017.0 / 3168.0), k1);
    tmp = axpy(tmp, h * (-355.0 / 33.0), k2);
    tmp = axpy(tmp, h * (46732.0 / 5247.0), k3);
    tmp = axpy(tmp, h * (49.0 / 176.0), k4);
    tmp = axpy(tmp, h * (-5103.0 / 18656.0), k5);
    const OdeState k6 = f.rhs(tmp);

    OdeState y5 = y;
    y5 = axpy(y5, h * (35.0 / 384.0), k1);
    y5 = axpy(y5, h * (500.0 / 1113.0), k3);
    y5 = axpy(y5, h * (125.0 / 192.0), k4);
    y5 = axpy(y5, h * (-2187.0 / 6784.0), k5);
    y5 = axpy(y5, h * (11.0 / 84.0), k6);
    const OdeState k7 = f.rhs(y5);

    // y5 - y4 expressed through the stage values.
    double ex = h * (71.0 / 57600.0 * k1.x - 71.0 / 16695.0 * k3.x + 71.0 / 1920.0 * k4.x -
                     17253.0 / 339200.0 * k5.x + 22.0 / 525.0 * k6.x - 1.0 / 40.0 * k7.x);
    double et = h * (71.0 / 57600.0 * k1.t - 71.0 / 16695.0 * k3.t + 71.0 / 1920.0 * k4.t -
                     17253.0 / 339200.0 * k5.t + 22.0 / 525.0 * k6.t - 1.0 / 40.0 * k7.t);
    double ea = h * (71.0 / 57600.0 * k1.theta - 71.0 / 16695.0 * k3.theta +
                     71.0 / 1920.0 * k4.theta - 17253.0 / 339200.0 * k5.theta +
                     22.0 / 525.0 * k6.theta - 1.0 / 40.0 * k7.theta);

    DpStep s;
    s.y5 = y5;
    s.err = std::sqrt(ex * ex + et * et + ea * ea);
    return s;
}

} // namespace

GeodesicShot shoot_geodesic(const MetricModel& m, Point p0, double angle,
                            double max_flat_length, const ShootOptions& opts) {
    m.require_unit_phi("shoot_geodesic");
    m.require_in_chart(p0);
    if (max_flat_length <= 0.0) throw ContractError("shoot_geodesic: max length must be > 0");

    GeodesicShot shot;
    shot.start = p0;
    shot.angle = normalize_angle(angle);
    shot.termination = ShotTermination::LengthReached;

    GeodesicOde ode(m, opts.curvature_limit);
    OdeState y{p0.x, p0.t, shot.angle};
    std::vector<Point> pts{p0};

    // Steps are normalized so the whole length divides into equal pieces:
    // uneven sample spacing (especially a short final step) is the dominant
    // error of the discrete curvature estimate.  Samples are only emitted
    // once they are a fraction of a step apart, so the polyline never
    // carries near-duplicate points.
    const double h_cap = max_flat_length /
                         std::ceil(max_flat_length / (0.9 * opts.max_segment));
    const double emit_min = 0.05 * opts.max_segment;

    auto emit = [&](const Point& p, bool final_point) {
        double gap = distance(pts.back(), p);
        if (gap >= emit_min) {
            pts.push_back(p);
        } else if (final_point && gap > 0.0) {
            if (pts.size() >= 2) {
                pts.back() = p;
            } else {
                pts.push_back(p);
            }
        }
    };

    double arc = 0.0;
    double h = h_cap;
    const double h_min = 1e-14 * std::max(1.0, max_flat_length);

    while (arc < max_flat_length) {
        bool final_step = max_flat_length - arc <= h_cap;
        h = std::min({h, h_cap, max_flat_length - arc});
        DpStep step = dp45(ode, y, h);
        double tol = opts.ode_tol * std::max(1.0, h);
        if (step.err > tol) {
            h *= std::max(0.2, 0.9 * std::pow(tol / step.err, 0.2));
            if (h < h_min) throw IntegrationError("shoot_geodesic: step-size underflow");
            continue;
        }
        if (ode.blew_up()) {
            shot.termination = ShotTermination::CurvatureBlowup;
            break;
        }
        Point next{step.y5.x, step.y5.t};
        if (!m.chart().contains(next)) {
            // Bisect the step length to land on the chart boundary.
            double lo = 0.0, hi = h;
            OdeState inside = y;
            for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
                double mid = 0.5 * (lo + hi);
                OdeState ymid = dp45(ode, y, mid).y5;
                if (m.chart().contains({ymid.x, ymid.t})) {
                    lo = mid;
                    inside = ymid;
                } else {
                    hi = mid;
                }
            }
            if (lo > 0.0) emit({inside.x, inside.t}, true);
            shot.termination = ShotTermination::ChartExit;
            break;
        }
        y = step.y5;
        arc += h;
        emit(next, final_step && arc >= max_flat_length);
        if (step.err > 0.0) {
            h *= std::min(5.0, 0.9 * std::pow(tol / step.err, 0.2));
        } else {
            h *= 5.0;
        }
    }

    if (pts.size() < 2) {
        // Exited immediately; emit a degenerate-but-valid stub along the tangent.
        pts.push_back(p0 + Vec2{std::cos(shot.angle), std::sin(shot.angle)} * 1e-12);
    }
    shot.curve = ParamCurve::from_points(std::move(pts));
    return shot;
}

namespace {

struct MissSample {
    bool valid = false;
    double miss = 0.0;    // signed lateral offset at closest approach
    double closest = std::numeric_limits<double>::infinity();
    std::size_t seg = 0;  // segment of closest approach
    double seg_param = 0.0;
};

// Closest approach of q to the polyline (point-to-segment, not point-to-sample).
MissSample evaluate_miss(const ParamCurve& curve, const Point& q, double accept_radius) {
    MissSample ms;
    for (std::size_t i = 0; i + 1 < curve.pts.size(); ++i) {
        Vec2 ab = curve.pts[i + 1] - curve.pts[i];
        double len2 = ab.norm2();
        double s = std::clamp(dot(q - curve.pts[i], ab) / len2, 0.0, 1.0);
        Point proj = curve.pts[i] + ab * s;
        double d = distance(proj, q);
        if (d < ms.closest) {
            ms.closest = d;
            ms.seg = i;
            ms.seg_param = s;
        }
    }
    if (ms.closest > accept_radius) return ms;
    Vec2 tangent = curve.pts[ms.seg + 1] - curve.pts[ms.seg];
    Point proj = curve.pts[ms.seg] + tangent * ms.seg_param;
    ms.miss = cross(tangent.normalized(), q - proj);
    ms.valid = true;
    return ms;
}

// Polyline arc length from the start to the closest-approach point.
double arc_to_closest(const ParamCurve& curve, const MissSample& ms) {
    double s = 0.0;
    for (std::size_t i = 0; i < ms.seg; ++i) s += distance(curve.pts[i], curve.pts[i + 1]);
    s += ms.seg_param * distance(curve.pts[ms.seg], curve.pts[ms.seg + 1]);
    return s;
}

} // namespace

ParamCurve connect_geodesic(const MetricModel& m, Point p, Point q, const ConnectOptions& opts) {
    m.require_in_chart(p);
    m.require_in_chart(q);
    double dist = distance(p, q);
    if (dist == 0.0) throw ContractError("connect_geodesic: endpoints coincide");

    const double max_len = opts.max_length_factor * dist;
    const double accept_radius = 0.75 * dist;
    const double step = opts.angle_step_deg * M_PI / 180.0;
    double a0 = 0.0, a1 = kTwoPi;
    if (opts.angle_window) {
        a0 = opts.angle_window->first;
        a1 = opts.angle_window->second;
    }

    ShootOptions scan_shoot = opts.shoot;
    scan_shoot.max_segment = std::max(opts.shoot.max_segment, opts.scan_segment);

    auto miss_at = [&](double theta, const ShootOptions& so) {
        return evaluate_miss(shoot_geodesic(m, p, theta, max_len, so).curve, q,
                             accept_radius);
    };

    struct Candidate {
        ParamCurve curve;
        double length;
    };
    std::optional<Candidate> best;

    auto try_angle = [&](double theta) {
        GeodesicShot shot = shoot_geodesic(m, p, theta, max_len, opts.shoot);
        MissSample ms = evaluate_miss(shot.curve, q, accept_radius);
        if (!ms.valid || ms.closest > opts.endpoint_tol) return;
        // Re-shoot to the closest-approach arc length (uniform steps land
        // exactly there), then close the remaining defect with a displacement
        // linear in sample index: that leaves the discrete curvature intact
        // while making the endpoints exact.
        double arc = arc_to_closest(shot.curve, ms);
        if (arc <= 0.0) return;
        GeodesicShot fine = shoot_geodesic(m, p, theta, arc, opts.shoot);
        if (fine.termination != ShotTermination::LengthReached) return;
        ParamCurve c = fine.curve;
        Vec2 defect = q - c.back();
        std::size_t n = c.size();
        for (std::size_t i = 1; i < n; ++i) {
            c.pts[i] += defect * (static_cast<double>(i) / (n - 1));
        }
        double len = f_length(m, c);
        if (!best || len < best->length) best = Candidate{std::move(c), len};
    };

    // Bisect a bracketed root down to polyline resolution.  Stopping at
    // merely endpoint_tol would leave lateral noise that pollutes the
    // discrete curvature of the returned chord.
    auto bisect = [&](double lo, double hi, double flo, const ShootOptions& so,
                      int iters) {
        for (int it = 0; it < iters; ++it) {
            double mid = 0.5 * (lo + hi);
            MissSample ms = miss_at(mid, so);
            if (!ms.valid) {
                // Target unreachable at mid (chart exit); shrink toward lo.
                hi = mid;
                continue;
            }
            if (ms.closest <= 1e-13) return mid;
            if (flo * ms.miss <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = ms.miss;
            }
        }
        return 0.5 * (lo + hi);
    };

    auto polish_and_try = [&](double rough, double rough_halfwidth) {
        // Re-bracket around the coarse root with fine shots.
        double width = std::max(rough_halfwidth, 1e-7);
        MissSample lo_ms = miss_at(rough - width, opts.shoot);
        MissSample hi_ms = miss_at(rough + width, opts.shoot);
        if (lo_ms.valid && hi_ms.valid && lo_ms.miss * hi_ms.miss <= 0.0) {
            try_angle(bisect(rough - width, rough + width, lo_ms.miss, opts.shoot, 60));
        } else {
            try_angle(rough);
        }
    };

    int n = std::max(4, static_cast<int>(std::round((a1 - a0) / step)));
    std::vector<double> angles(n + 1);
    std::vector<MissSample> samples(n + 1);
    for (int i = 0; i <= n; ++i) {
        angles[i] = a0 + (a1 - a0) * i / n;
        samples[i] = miss_at(angles[i], scan_shoot);
    }

    for (int i = 0; i < n; ++i) {
        const MissSample& s0 = samples[i];
        const MissSample& s1 = samples[i + 1];
        if (s0.valid && s0.closest <= opts.endpoint_tol) {
            try_angle(angles[i]);
            continue;
        }
        if (!s0.valid || !s1.valid) continue;
        if (s0.miss == 0.0) {
            try_angle(angles[i]);
            continue;
        }
        if (s0.miss * s1.miss > 0.0) continue;
        double rough = bisect(angles[i], angles[i + 1], s0.miss, scan_shoot, 50);
        // The coarse root is biased by the scan polyline's chord sag; the
        // fine re-bracket must be wider than that bias.
        double bias = scan_shoot.max_segment * scan_shoot.max_segment / dist;
        polish_and_try(rough, 100.0 * bias);
    }

    if (!best) {
        throw NoConnectionError("connect_geodesic: no sign change in miss function over the angle scan");
    }
    return best->curve;
}

} // namespace jsg
