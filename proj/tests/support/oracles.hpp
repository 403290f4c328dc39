#ifndef JSGRAPH_TESTS_ORACLES_HPP
#define JSGRAPH_TESTS_ORACLES_HPP

// Test-only oracles, independent of the library's assembly and quadrature
// paths: manufactured-solution sources by high-order numerical
// differentiation of the strong operator, and an L2 error by midpoint
// quadrature.

#include <cmath>
#include <functional>

#include "jsgraph/mesh.hpp"
#include "jsgraph/metric.hpp"
#include "jsgraph/solver.hpp"

namespace jsg::oracle {

using ScalarField = std::function<double(Point)>;

// 4th-order central difference.
inline double d4(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

inline Vec2 fd_gradient(const ScalarField& u, Point p, double h) {
    return {d4([&](double x) { return u({x, p.t}); }, p.x, h),
            d4([&](double t) { return u({p.x, t}); }, p.t, h)};
}

// Source for the manufactured problem: s = -div( omega grad(u*) / W(u*) ),
// all derivatives taken numerically.
inline double mms_source(const MetricModel& m, const ScalarField& ustar, Point p,
                         double h = 1e-3) {
    auto flux = [&](Point q) -> Vec2 {
        Vec2 g = fd_gradient(ustar, q, h);
        double rho = m.rho(q.x);
        double w = std::sqrt(1.0 + rho * rho * g.norm2());
        return g * (m.area_weight(q) / w);
    };
    double div = d4([&](double x) { return flux({x, p.t}).x; }, p.x, h) +
                 d4([&](double t) { return flux({p.x, t}).t; }, p.t, h);
    return -div;
}

// L2 norm of (u_h - u*) by edge-midpoint quadrature (exact for quadratics).
inline double l2_error(const SolutionField& field, const ScalarField& ustar) {
    const TriMesh& mesh = *field.mesh;
    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        double a = mesh.triangle_area(static_cast<int>(t));
        for (int k = 0; k < 3; ++k) {
            int v0 = tr[k], v1 = tr[(k + 1) % 3];
            Point mid = (mesh.vertices[v0] + mesh.vertices[v1]) * 0.5;
            double uh = 0.5 * (field.u[v0] + field.u[v1]);
            double diff = uh - ustar(mid);
            acc += a / 3.0 * diff * diff;
        }
    }
    return std::sqrt(acc);
}

} // namespace jsg::oracle

#endif
