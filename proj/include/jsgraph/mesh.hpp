#ifndef JSGRAPH_MESH_HPP
#define JSGRAPH_MESH_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "jsgraph/domain.hpp"
#include "jsgraph/geometry.hpp"

namespace jsg {

struct BoundarySegment {
    int v0 = -1;
    int v1 = -1;          // oriented CCW along the boundary
    int domain_edge = -1; // tag into AdmissibleDomain::edges
};

// Conforming triangle mesh of a domain.  Triangles are positively oriented;
// every boundary segment carries the originating domain-edge tag.
struct TriMesh {
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundarySegment> boundary; // ordered along the loop
    // Per-vertex mark: -1 interior, >= 0 domain edge index, -(2+k) corner at
    // domain vertex k.
    std::vector<int> vertex_mark;
    double h_target = 0.0;

    bool is_boundary_vertex(int v) const { return vertex_mark[v] != -1; }
    bool is_corner(int v) const { return vertex_mark[v] <= -2; }
    int corner_domain_vertex(int v) const { return -(vertex_mark[v] + 2); }
    // Domain edge of a non-corner boundary vertex (-1 for interior/corner).
    int boundary_edge_of_vertex(int v) const {
        return vertex_mark[v] >= 0 ? vertex_mark[v] : -1;
    }

    double triangle_area(int t) const;
    Point triangle_centroid(int t) const;
    double min_angle_deg() const;

    // Triangle containing p (walk with scan fallback); -1 when outside.
    int locate(const Point& p) const;
    std::array<double, 3> barycentric(int t, const Point& p) const;
};

struct MeshOptions {
    double min_angle_deg = 20.0;
    // Boundary spacing shrinks to this fraction of h_target at corners.
    double corner_grade = 0.35;
    int max_refine_rounds = 80;
    std::size_t max_vertices = 2000000;
    int smooth_passes = 2;
};

// Meshes the (geometrically valid) domain: boundary resampled at <= h_target
// with grading toward the corners, interior refined until all angles reach
// min_angle_deg and edges match the local size.  Throws MeshError when the
// boundary self-intersects or the invariants cannot be met.
TriMesh triangulate(const AdmissibleDomain& d, double h_target, const MeshOptions& opts = {});

} // namespace jsg

#endif
