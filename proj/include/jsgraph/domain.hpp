#ifndef JSGRAPH_DOMAIN_HPP
#define JSGRAPH_DOMAIN_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jsgraph/curve.hpp"
#include "jsgraph/geodesic.hpp"
#include "jsgraph/metric.hpp"

namespace jsg {

// Boundary arc label: A carries boundary value +inf, B carries -inf, C
// carries finite data along the arc.
enum class EdgeKind : char { A, B, C };

const char* to_string(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string& s);

using EdgeData = std::function<double(Point)>;

struct Edge {
    ParamCurve curve;
    EdgeKind kind = EdgeKind::C;
    EdgeData data;                           // only meaningful for kind C
    std::optional<AnalyticCurve> analytic;   // exact source when known
    std::string source_desc;                 // human-readable provenance

    double length_f(const MetricModel& m) const;
};

// Precompact domain whose boundary is a cyclic chain of edges, ordered CCW.
// Vertex i is the shared endpoint between edge i-1 and edge i.
struct AdmissibleDomain {
    std::vector<Edge> edges;
    std::vector<Point> vertices;

    static AdmissibleDomain from_edges(std::vector<Edge> edges);

    std::size_t edge_count() const { return edges.size(); }
    bool has_finite_data_edges() const;
    std::vector<Point> boundary_polyline() const; // closed loop, no repeat of start
    double signed_area() const;
    Point centroid() const;
    // True when p lies in the closure (within boundary_tol of the polyline
    // counts as inside).
    bool contains(const Point& p, double boundary_tol = 1e-9) const;
};

// -- validation ----------------------------------------------------------------

struct EdgeViolation {
    std::size_t edge;
    std::string rule;
    double worst_value = 0.0;
    Point worst_point;
};

struct ValidationReport {
    bool geometry_ok = false; // closed, simple, CCW chain
    bool kinds_ok = false;    // curvature classes + vertex sharing rules
    std::vector<EdgeViolation> violations;
    bool ok() const { return geometry_ok && kinds_ok; }
};

struct ValidateOptions {
    double tol_geodesic = 1e-4;  // |k_f| bound for A/B edges and chords
    double tol_convex = 1e-4;    // C edges need k_f >= -tol_convex
    double vertex_tol = 1e-9;    // chain closure tolerance
};

ValidationReport validate_domain(const MetricModel& m, const AdmissibleDomain& d,
                                 const ValidateOptions& opts = {});

// -- polygons ------------------------------------------------------------------

struct PolygonChord {
    ParamCurve curve;
    std::size_t v_from = 0;
    std::size_t v_to = 0;
};

// Side of an admissible polygon: either a whole boundary edge (by index) or
// an interior geodesic chord between two domain vertices.
using PolygonSide = std::variant<std::size_t, PolygonChord>;

struct AdmissiblePolygon {
    std::vector<PolygonSide> sides;
    std::vector<std::size_t> vertex_ids;
    bool is_whole_domain = false;

    std::size_t chord_count() const;
    std::string describe() const;
};

struct PolygonReport {
    double alpha_f = 0.0;      // total weighted length of A sides
    double beta_f = 0.0;       // total weighted length of B sides
    double perimeter_f = 0.0;  // all sides
    bool passes_alpha = false; // 2 alpha < perimeter with strictness margin
    bool passes_beta = false;
};

struct ReportOptions {
    // Strict inequality margin: pass needs perimeter - 2*alpha >= margin*perimeter.
    double strictness_margin = 1e-9;
};

PolygonReport polygon_report(const MetricModel& m, const AdmissibleDomain& d,
                             const AdmissiblePolygon& p, const ReportOptions& opts = {});

// Polygon consisting of the whole boundary.
AdmissiblePolygon whole_domain_polygon(const AdmissibleDomain& d);

struct EnumerateOptions {
    std::size_t max_polygons = 256;
    double tol_geodesic = 1e-4;
    double containment_tol = 1e-7;
    ConnectOptions connect;
};

struct EnumerateResult {
    std::vector<AdmissiblePolygon> polygons; // always starts with the whole domain
    bool capped = false;
    // Vertex pairs whose chord solve failed (recorded, not fatal).
    std::vector<std::string> chord_failures;
};

EnumerateResult enumerate_polygons(const MetricModel& m, const AdmissibleDomain& d,
                                   const EnumerateOptions& opts = {});

// -- existence check -----------------------------------------------------------

enum class ExistenceCase {
    CaseA,   // finite-data arcs present, all structural inequalities strict
    CaseB,   // no finite-data arcs, alpha(domain) == beta(domain) + strict proper polygons
    Fails,
    Partial, // enumeration cap reached before a verdict
};

const char* to_string(ExistenceCase c);

struct CheckOptions {
    EnumerateOptions enumerate;
    ReportOptions report;
    double tol_balance = 1e-6; // |alpha - beta| <= tol_balance * max(1, perimeter)
};

struct ExistenceVerdict {
    ExistenceCase result = ExistenceCase::Fails;
    std::optional<AdmissiblePolygon> witness; // first failing polygon
    std::vector<AdmissiblePolygon> polygons;
    std::vector<PolygonReport> reports;
    double balance_gap = 0.0; // |alpha - beta| of the whole domain (case b)
    bool passed() const {
        return result == ExistenceCase::CaseA || result == ExistenceCase::CaseB;
    }
};

ExistenceVerdict check_existence(const MetricModel& m, const AdmissibleDomain& d,
                                 const CheckOptions& opts = {});

// -- constructors ---------------------------------------------------------------

struct ScherkSpec {
    std::array<EdgeKind, 4> kinds{EdgeKind::A, EdgeKind::C, EdgeKind::A, EdgeKind::C};
    std::array<double, 4> data{0.0, 0.0, 0.0, 0.0};
    double edge_sample = 0.01; // polyline spacing of constructed edges
};

// Quadrilateral bounded by two translating arcs at heights a < b over the
// window [s, r] and the two connecting side segments.  In the Euclidean
// model the arcs are grim reapers and the sides vertical; in the hyperbolic
// model the same construction is carried out in the rotated frame with the
// tilted reaper.  Edge order (CCW): 0 bottom arc, 1 right side, 2 top arc,
// 3 left side.
AdmissibleDomain scherk_quadrilateral(const MetricModel& m, double a, double b, double r,
                                      double s, const ScherkSpec& spec = {});

// Axis-aligned rectangle with four finite-data sides (solver test domains;
// the horizontal sides are not convex in the weighted sense, so this does
// not validate as an admissible domain for c != 0).
AdmissibleDomain rectangle_domain(double x0, double x1, double t0, double t1,
                                  EdgeData data, double edge_sample = 0.01);

} // namespace jsg

#endif
