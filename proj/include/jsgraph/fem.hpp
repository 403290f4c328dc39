#ifndef JSGRAPH_FEM_HPP
#define JSGRAPH_FEM_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "jsgraph/mesh.hpp"
#include "jsgraph/metric.hpp"

namespace jsg {

// Per-triangle data for the weak form
//   find u:  sum_T omega_T A_T <grad u, grad v> / W_T = <load, v>
// with omega = rho^2 e^{ct} and W = sqrt(1 + rho^2 |grad u|^2), both
// evaluated at the triangle centroid (one-point quadrature).
struct FemWorkspace {
    std::vector<double> area;
    std::vector<double> omega;
    std::vector<double> rho2;    // rho^2 entering W
    std::vector<double> eweight; // e^{ct} = omega / rho^2, the energy density
    std::vector<std::array<Vec2, 3>> hat_grad;

    static FemWorkspace build(const MetricModel& m, const TriMesh& mesh);
    std::size_t size() const { return area.size(); }
};

// Per-element kernels exist in a serial reference version and an OpenMP
// version.  Both fill identical per-element arrays; the scatter into global
// objects is always sequential, so results are reproducible for any thread
// count.

// Residual r_i = sum_T omega A <g, grad_i>/W - load_i.
void assemble_residual_serial(const FemWorkspace& ws, const TriMesh& mesh,
                              const std::vector<double>& u, const std::vector<double>* load,
                              std::vector<double>& r_out);
void assemble_residual_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                                const std::vector<double>& u, const std::vector<double>* load,
                                std::vector<double>& r_out);

// Energy sum_T A e^{ct} W(u) - <load, u>; its gradient is the residual.
double energy_serial(const FemWorkspace& ws, const TriMesh& mesh, const std::vector<double>& u,
                     const std::vector<double>* load);
double energy_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                       const std::vector<double>& u, const std::vector<double>* load);

// Jacobian triplets on the free dofs (dof[v] < 0 marks a fixed vertex).
void assemble_jacobian_serial(const FemWorkspace& ws, const TriMesh& mesh,
                              const std::vector<double>& u, const std::vector<int>& dof,
                              std::vector<Eigen::Triplet<double>>& out);
void assemble_jacobian_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                                const std::vector<double>& u, const std::vector<int>& dof,
                                std::vector<Eigen::Triplet<double>>& out);

// One-point-quadrature load vector l_i = sum_T A_T s(centroid)/3.
std::vector<double> assemble_load(const TriMesh& mesh,
                                  const std::function<double(Point)>& source);

// Area-weighted average of adjacent-triangle gradients at each vertex.
std::vector<Vec2> recover_vertex_gradients(const TriMesh& mesh, const std::vector<double>& u);

// Piecewise-constant gradient per triangle.
std::vector<Vec2> triangle_gradients(const TriMesh& mesh, const std::vector<double>& u);

} // namespace jsg

#endif
