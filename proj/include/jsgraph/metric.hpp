#ifndef JSGRAPH_METRIC_HPP
#define JSGRAPH_METRIC_HPP

#include <functional>
#include <string>

#include "jsgraph/geometry.hpp"

namespace jsg {

using ScalarFn = std::function<double(double)>;

// Warped-product data (c, rho, phi) on the vertical plane, together with the
// conformal factor e^{ct}.  Everything downstream works in the flat (x,t)
// chart; this class owns the scalar weights of that reduction:
//
//   f(x,t)       = e^{ct/2} rho(x)            (area density per unit height)
//   line_weight  = rho(x) e^{ct}              (weighted arc length density)
//   area_weight  = rho(x)^2 e^{ct}            (coefficient of the weak form)
//   drift        = ((log rho)'(x), c)         (flat gradient of ct + log rho)
//
// A curve is a weighted geodesic iff its flat curvature equals <drift, N>.
// Immutable after construction; safe for concurrent reads.
class MetricModel {
public:
    static MetricModel euclidean_r3(double c, Rect chart = Rect{});
    static MetricModel hyperbolic_h2xr(double c, Rect chart = Rect{});
    // General rho and phi via callbacks.  rho_log_deriv must be the analytic
    // derivative of log(rho); it is never computed by differencing.
    static MetricModel custom(std::string name, double c, ScalarFn rho,
                              ScalarFn rho_log_deriv, ScalarFn phi, bool phi_is_unit,
                              Rect chart = Rect{});
    // Lookup by config name: "r3" or "h2xr".
    static MetricModel by_name(const std::string& name, double c, Rect chart = Rect{});

    const std::string& name() const { return name_; }
    double c() const { return c_; }
    const Rect& chart() const { return chart_; }
    bool phi_is_unit() const { return phi_is_unit_; }

    double rho(double x) const { return rho_(x); }
    double rho_log_deriv(double x) const { return rho_log_deriv_(x); }
    double phi(double x) const { return phi_(x); }

    // e^{ct/2} rho(x); strictly positive. Throws ChartError outside the chart.
    double f_value(const Point& p) const;

    // ((log rho)'(x), c); requires phi == 1.
    Vec2 drift_vector(const Point& p) const;

    double line_weight(const Point& p) const;
    double area_weight(const Point& p) const;

    // Potential whose flat gradient is the drift vector: c*t + log rho(x).
    double drift_potential(const Point& p) const;

    void require_in_chart(const Point& p) const;
    void require_unit_phi(const char* op) const;

private:
    MetricModel() = default;

    std::string name_;
    double c_ = 0.0;
    ScalarFn rho_;
    ScalarFn rho_log_deriv_;
    ScalarFn phi_;
    bool phi_is_unit_ = true;
    Rect chart_;
};

} // namespace jsg

#endif
