#ifndef JSGRAPH_SOLVER_HPP
#define JSGRAPH_SOLVER_HPP

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/mesh.hpp"
#include "jsgraph/metric.hpp"
#include "jsgraph/reports.hpp"

namespace jsg {

struct SolveOptions {
    double newton_tol = 1e-10; // algebraic residual 2-norm
    int max_newton_iters = 120;
    int max_backtracks = 48;
    int continuation_steps = 14; // boundary amplitude ladder on stall
    bool parallel_assembly = false;
    // Optional starting iterate (vertex-sized, non-owning); default is the
    // linear extension of the boundary values.
    const std::vector<double>* initial_guess = nullptr;
};

struct SolutionField {
    std::shared_ptr<const TriMesh> mesh;
    std::vector<double> u;
    double cap = std::numeric_limits<double>::quiet_NaN();
    double residual_norm = 0.0;
    int newton_iters = 0;

    // Interpolated value; throws ContractError when p is outside the mesh.
    double value_at(const Point& p) const;
};

// Damped Newton on the discrete weak form, starting from the linear
// (W frozen at 1) extension of the boundary values; doubles the boundary
// amplitude from 0 upward when a cold start stalls.  boundary_values is
// read at boundary vertices only.  Throws SolverError on failure, with the
// last iterate attached.
SolutionField solve_dirichlet(const MetricModel& m, std::shared_ptr<const TriMesh> mesh,
                              const std::vector<double>& boundary_values,
                              const std::function<double(Point)>* source = nullptr,
                              const SolveOptions& opts = {});

struct CapSchedule {
    std::vector<double> levels; // strictly increasing, positive

    static CapSchedule standard() { return {{2.0, 4.0, 8.0, 16.0}}; }
    void validate() const;
};

struct JsOptions {
    SolveOptions solve;
    MeshOptions mesh;
    // Cap the finite-data corner/edge values at the current level, mirroring
    // the truncation of the approximating sequence.
};

// Boundary values of the capped problem at level n: +n on A edges, -n on B
// edges, data clamped to [-n, n] on C edges; corners take the C value when
// one exists, else 0.
std::vector<double> cap_boundary_values(const AdmissibleDomain& d, const TriMesh& mesh,
                                        double cap);

struct JsRun {
    std::shared_ptr<const TriMesh> mesh;
    CapSchedule schedule;
    std::vector<SolutionField> fields; // one per completed cap level
    bool normalized = false;           // fields shifted by value at reference
    Point reference;
    std::vector<std::string> failures; // per-cap failure messages (partial run)

    bool complete() const { return failures.empty(); }
};

// Monotone boundary-cap continuation: solves the capped problem at each
// schedule level with warm starts.  Domains without finite-data arcs are
// normalized by the value at the domain centroid.  A failing cap leaves a
// partial run with the failure recorded.
JsRun solve_jenkins_serrin(const MetricModel& m, const AdmissibleDomain& d,
                           const CapSchedule& schedule, double h_target,
                           const JsOptions& opts = {},
                           std::shared_ptr<const TriMesh> premade_mesh = nullptr);

// Per-vertex convergence classification from the last two cap levels:
// divergent where |increment| per unit cap-increment >= growth_threshold.
// Requires at least 3 fields.  Interface polylines are extracted as the
// level set of the increment-rate field and smoothed before measuring
// their weighted curvature.
DivergenceReport classify_convergence(const MetricModel& m, const JsRun& run,
                                      double growth_threshold = 0.5);

struct ComparisonReport {
    bool ok = false;
    double worst_violation = 0.0; // max(u1 - u2 - tol, 0) over vertices
    int worst_vertex = -1;
    double tol_used = 0.0;
};

// Maximum-principle check: boundary u1 <= u2 must imply u1 <= u2 + tol
// everywhere; tol = tol_factor * max amplitude.
ComparisonReport comparison_check(const SolutionField& u1, const SolutionField& u2,
                                  double tol_factor = 1e-8);

} // namespace jsg

#endif
