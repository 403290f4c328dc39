#ifndef JSGRAPH_REPORTS_HPP
#define JSGRAPH_REPORTS_HPP

#include <limits>
#include <memory>
#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/geometry.hpp"
#include "jsgraph/mesh.hpp"

namespace jsg {

// Per-edge flux against weighted length.
struct FluxReport {
    struct PerEdge {
        std::size_t edge = 0;
        EdgeKind kind = EdgeKind::C;
        double flux = 0.0;
        double f_length = 0.0;
        double ratio = 0.0; // flux / f_length
    };
    std::vector<PerEdge> edges;
    double total_boundary_flux = 0.0;
    double perimeter_f = 0.0;
};

// Interface polyline between the convergent and divergent vertex classes.
struct InterfacePolyline {
    std::vector<Point> points;
    bool closed = false;
    double max_abs_kf = 0.0;
    // Nearest domain vertex per endpoint (unset for closed polylines).
    int end_domain_vertex[2] = {-1, -1};
    double end_distance[2] = {std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity()};
};

struct DivergenceReport {
    double growth_threshold = 0.5;
    double mesh_h = 0.0;
    double cap_last = 0.0;
    double cap_prev = 0.0;
    // 1 for divergent interior vertices, 0 otherwise.
    std::vector<signed char> vertex_divergent;
    std::size_t divergent_count = 0;
    std::vector<InterfacePolyline> interfaces;
    std::shared_ptr<const TriMesh> mesh;

    bool divergence_empty() const { return divergent_count == 0; }
};

} // namespace jsg

#endif
