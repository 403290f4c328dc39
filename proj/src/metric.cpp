#include "jsgraph/metric.hpp"

#include <cmath>
#include <sstream>

#include "jsgraph/errors.hpp"

namespace jsg {

MetricModel MetricModel::euclidean_r3(double c, Rect chart) {
    MetricModel m;
    m.name_ = "r3";
    m.c_ = c;
    m.rho_ = [](double) { return 1.0; };
    m.rho_log_deriv_ = [](double) { return 0.0; };
    m.phi_ = [](double) { return 1.0; };
    m.phi_is_unit_ = true;
    m.chart_ = chart;
    return m;
}

MetricModel MetricModel::hyperbolic_h2xr(double c, Rect chart) {
    MetricModel m;
    m.name_ = "h2xr";
    m.c_ = c;
    m.rho_ = [](double x) { return std::exp(x); };
    m.rho_log_deriv_ = [](double) { return 1.0; };
    m.phi_ = [](double) { return 1.0; };
    m.phi_is_unit_ = true;
    m.chart_ = chart;
    return m;
}

MetricModel MetricModel::custom(std::string name, double c, ScalarFn rho,
                                ScalarFn rho_log_deriv, ScalarFn phi, bool phi_is_unit,
                                Rect chart) {
    MetricModel m;
    m.name_ = std::move(name);
    m.c_ = c;
    m.rho_ = std::move(rho);
    m.rho_log_deriv_ = std::move(rho_log_deriv);
    m.phi_ = std::move(phi);
    m.phi_is_unit_ = phi_is_unit;
    m.chart_ = chart;
    return m;
}

MetricModel MetricModel::by_name(const std::string& name, double c, Rect chart) {
    if (name == "r3") return euclidean_r3(c, chart);
    if (name == "h2xr") return hyperbolic_h2xr(c, chart);
    throw ContractError("unknown metric model '" + name + "' (expected r3 or h2xr)");
}

void MetricModel::require_in_chart(const Point& p) const {
    if (!chart_.contains(p)) {
        std::ostringstream os;
        os << "point (" << p.x << ", " << p.t << ") outside chart ["
           << chart_.x_min << ", " << chart_.x_max << "] x ["
           << chart_.t_min << ", " << chart_.t_max << "]";
        throw ChartError(os.str());
    }
}

void MetricModel::require_unit_phi(const char* op) const {
    if (!phi_is_unit_) {
        throw ContractError(std::string(op) + " requires phi == 1 (flat-chart reduction)");
    }
}

double MetricModel::f_value(const Point& p) const {
    require_in_chart(p);
    return std::exp(0.5 * c_ * p.t) * rho_(p.x);
}

Vec2 MetricModel::drift_vector(const Point& p) const {
    require_unit_phi("drift_vector");
    require_in_chart(p);
    return {rho_log_deriv_(p.x), c_};
}

double MetricModel::line_weight(const Point& p) const {
    double r = rho_(p.x);
    return r * std::exp(c_ * p.t);
}

double MetricModel::area_weight(const Point& p) const {
    double r = rho_(p.x);
    return r * r * std::exp(c_ * p.t);
}

double MetricModel::drift_potential(const Point& p) const {
    return c_ * p.t + std::log(rho_(p.x));
}

} // namespace jsg
