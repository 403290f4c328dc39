#ifndef JSGRAPH_QUADRATURE_HPP
#define JSGRAPH_QUADRATURE_HPP

#include <functional>

namespace jsg {

// Adaptive Gauss-Kronrod 7-15 on [a,b].  Splits the interval until the
// embedded error indicator meets rel_tol (relative to the running total)
// or abs_tol.  Throws IntegrationError when the subdivision depth runs out.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 1e-300,
                           int max_depth = 48);

} // namespace jsg

#endif
