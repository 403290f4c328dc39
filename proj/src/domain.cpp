#include "jsgraph/domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "jsgraph/errors.hpp"
#include "polyline_util.hpp"

namespace jsg {

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::A: return "A";
        case EdgeKind::B: return "B";
        case EdgeKind::C: return "C";
    }
    return "?";
}

EdgeKind edge_kind_from_string(const std::string& s) {
    if (s == "A" || s == "a") return EdgeKind::A;
    if (s == "B" || s == "b") return EdgeKind::B;
    if (s == "C" || s == "c") return EdgeKind::C;
    throw ContractError("unknown edge kind '" + s + "'");
}

double Edge::length_f(const MetricModel& m) const {
    if (analytic) return f_length(m, *analytic);
    return f_length(m, curve);
}

AdmissibleDomain AdmissibleDomain::from_edges(std::vector<Edge> edges) {
    if (edges.size() < 2) throw ContractError("domain needs at least 2 edges");
    AdmissibleDomain d;
    d.edges = std::move(edges);
    d.vertices.reserve(d.edges.size());
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        const Edge& e = d.edges[i];
        const Edge& next = d.edges[(i + 1) % d.edges.size()];
        if (distance(e.curve.back(), next.curve.front()) > 1e-7) {
            std::ostringstream os;
            os << "edge chain broken between edges " << i << " and "
               << (i + 1) % d.edges.size();
            throw ContractError(os.str());
        }
        d.vertices.push_back(d.edges[i].curve.front());
    }
    return d;
}

bool AdmissibleDomain::has_finite_data_edges() const {
    return std::any_of(edges.begin(), edges.end(),
                       [](const Edge& e) { return e.kind == EdgeKind::C; });
}

std::vector<Point> AdmissibleDomain::boundary_polyline() const {
    std::vector<Point> loop;
    for (const Edge& e : edges) {
        for (std::size_t i = 0; i + 1 < e.curve.pts.size(); ++i) loop.push_back(e.curve.pts[i]);
    }
    return loop;
}

double AdmissibleDomain::signed_area() const { return detail::polyline_signed_area(boundary_polyline()); }

Point AdmissibleDomain::centroid() const {
    std::vector<Point> loop = boundary_polyline();
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point& p = loop[i];
        const Point& q = loop[(i + 1) % loop.size()];
        double w = cross(p, q);
        a += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a);
}

bool AdmissibleDomain::contains(const Point& p, double boundary_tol) const {
    return detail::point_in_loop(boundary_polyline(), p, boundary_tol);
}

// -- validation ----------------------------------------------------------------

ValidationReport validate_domain(const MetricModel& m, const AdmissibleDomain& d,
                                 const ValidateOptions& opts) {
    ValidationReport rep;
    rep.geometry_ok = true;
    rep.kinds_ok = true;

    std::size_t n = d.edges.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Edge& e = d.edges[i];
        const Edge& next = d.edges[(i + 1) % n];
        double gap = distance(e.curve.back(), next.curve.front());
        if (gap > opts.vertex_tol) {
            rep.geometry_ok = false;
            rep.violations.push_back(
                {i, "edge chain must close (gap to next edge)", gap, e.curve.back()});
        }
    }

    std::vector<Point> loop = d.boundary_polyline();
    if (detail::polyline_signed_area(loop) <= 0.0) {
        rep.geometry_ok = false;
        rep.violations.push_back({0, "boundary must be positively oriented (CCW)",
                                  detail::polyline_signed_area(loop), loop.front()});
    }
    if (!detail::polyline_is_simple(loop)) {
        rep.geometry_ok = false;
        rep.violations.push_back({0, "boundary must be a simple closed polyline", 0.0,
                                  loop.front()});
    }

    // No two A arcs and no two B arcs share an endpoint.
    for (std::size_t i = 0; i < n; ++i) {
        const Edge& e = d.edges[i];
        const Edge& next = d.edges[(i + 1) % n];
        if (e.kind == next.kind &&
            (e.kind == EdgeKind::A || e.kind == EdgeKind::B)) {
            rep.kinds_ok = false;
            std::ostringstream os;
            os << "no two " << to_string(e.kind) << " arcs may share an endpoint";
            rep.violations.push_back({i, os.str(), 0.0, e.curve.back()});
        }
    }

    // Curvature classification per edge (boundary runs CCW, so the left
    // normal of each edge points into the domain).
    for (std::size_t i = 0; i < n; ++i) {
        const Edge& e = d.edges[i];
        double worst = 0.0;
        Point worst_pt = e.curve.front();
        bool bad = false;
        for (std::size_t k = 1; k + 1 < e.curve.pts.size(); ++k) {
            double kf = f_curvature(m, e.curve, k);
            if (e.kind == EdgeKind::C) {
                if (kf < -opts.tol_convex && kf < worst) {
                    worst = kf;
                    worst_pt = e.curve.pts[k];
                    bad = true;
                }
            } else {
                if (std::abs(kf) > opts.tol_geodesic && std::abs(kf) > std::abs(worst)) {
                    worst = kf;
                    worst_pt = e.curve.pts[k];
                    bad = true;
                }
            }
        }
        if (bad) {
            rep.kinds_ok = false;
            std::string rule = e.kind == EdgeKind::C
                                   ? "C edges must be weighted-convex (k_f >= -tol)"
                                   : "A/B edges must be weighted geodesics (|k_f| <= tol)";
            rep.violations.push_back({i, rule, worst, worst_pt});
        }
    }
    return rep;
}

// -- polygons ------------------------------------------------------------------

std::size_t AdmissiblePolygon::chord_count() const {
    std::size_t c = 0;
    for (const PolygonSide& s : sides) {
        if (std::holds_alternative<PolygonChord>(s)) ++c;
    }
    return c;
}

std::string AdmissiblePolygon::describe() const {
    if (is_whole_domain) return "whole domain";
    std::ostringstream os;
    os << "sides[";
    bool first = true;
    for (const PolygonSide& s : sides) {
        if (!first) os << ", ";
        first = false;
        if (std::holds_alternative<std::size_t>(s)) {
            os << "edge " << std::get<std::size_t>(s);
        } else {
            const PolygonChord& c = std::get<PolygonChord>(s);
            os << "chord " << c.v_from << "-" << c.v_to;
        }
    }
    os << "]";
    return os.str();
}

AdmissiblePolygon whole_domain_polygon(const AdmissibleDomain& d) {
    AdmissiblePolygon p;
    p.is_whole_domain = true;
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        p.sides.emplace_back(i);
        p.vertex_ids.push_back(i);
    }
    return p;
}

PolygonReport polygon_report(const MetricModel& m, const AdmissibleDomain& d,
                             const AdmissiblePolygon& p, const ReportOptions& opts) {
    PolygonReport rep;
    for (const PolygonSide& s : p.sides) {
        if (std::holds_alternative<std::size_t>(s)) {
            std::size_t idx = std::get<std::size_t>(s);
            if (idx >= d.edges.size()) throw ContractError("polygon references unknown edge");
            double len = d.edges[idx].length_f(m);
            rep.perimeter_f += len;
            if (d.edges[idx].kind == EdgeKind::A) rep.alpha_f += len;
            if (d.edges[idx].kind == EdgeKind::B) rep.beta_f += len;
        } else {
            rep.perimeter_f += f_length(m, std::get<PolygonChord>(s).curve);
        }
    }
    double margin = opts.strictness_margin * rep.perimeter_f;
    rep.passes_alpha = rep.perimeter_f - 2.0 * rep.alpha_f >= margin;
    rep.passes_beta = rep.perimeter_f - 2.0 * rep.beta_f >= margin;
    return rep;
}

namespace {

struct Arc {
    std::size_t u, v;
    int boundary_edge = -1; // >= 0: that domain edge
    int chord_id = -1;      // >= 0: index into chords
};

// Appends the side's polyline (without its final point) oriented from `from`.
void append_side_points(std::vector<Point>& out, const ParamCurve& curve, bool forward) {
    if (forward) {
        for (std::size_t i = 0; i + 1 < curve.pts.size(); ++i) out.push_back(curve.pts[i]);
    } else {
        for (std::size_t i = curve.pts.size() - 1; i > 0; --i) out.push_back(curve.pts[i]);
    }
}

} // namespace

EnumerateResult enumerate_polygons(const MetricModel& m, const AdmissibleDomain& d,
                                   const EnumerateOptions& opts) {
    EnumerateResult result;
    result.polygons.push_back(whole_domain_polygon(d));

    const std::size_t nv = d.vertices.size();
    if (nv < 3 || opts.max_polygons <= 1) {
        result.capped = opts.max_polygons <= 1 && nv >= 3;
        return result;
    }

    std::vector<Point> loop = d.boundary_polyline();

    // Realizable interior chords between non-adjacent vertex pairs; only the
    // shortest connection per pair is kept.
    std::vector<PolygonChord> chords;
    for (std::size_t u = 0; u < nv; ++u) {
        for (std::size_t v = u + 1; v < nv; ++v) {
            bool adjacent = (v == u + 1) || (u == 0 && v == nv - 1);
            if (adjacent) continue;
            ParamCurve chord;
            try {
                chord = connect_geodesic(m, d.vertices[u], d.vertices[v], opts.connect);
            } catch (const NoConnectionError& err) {
                std::ostringstream os;
                os << "chord " << u << "-" << v << ": " << err.what();
                result.chord_failures.push_back(os.str());
                continue;
            }
            if (max_abs_f_curvature(m, chord) > opts.tol_geodesic) continue;
            bool inside = true;
            for (const Point& p : chord.pts) {
                if (!detail::point_in_loop(loop, p, opts.containment_tol)) {
                    inside = false;
                    break;
                }
            }
            if (!inside) continue;
            chords.push_back({std::move(chord), u, v});
        }
    }

    // Arc graph: boundary edges plus realizable chords.
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        arcs.push_back({i, (i + 1) % nv, static_cast<int>(i), -1});
    }
    for (std::size_t c = 0; c < chords.size(); ++c) {
        arcs.push_back({chords[c].v_from, chords[c].v_to, -1, static_cast<int>(c)});
    }

    std::vector<std::vector<std::size_t>> adjacency(nv);
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        adjacency[arcs[a].u].push_back(a);
        adjacency[arcs[a].v].push_back(a);
    }

    std::set<std::set<std::size_t>> seen;
    // The whole-domain cycle is already reported.
    {
        std::set<std::size_t> whole;
        for (std::size_t i = 0; i < d.edges.size(); ++i) whole.insert(i);
        seen.insert(whole);
    }

    auto make_polygon = [&](const std::vector<std::size_t>& arc_path,
                            const std::vector<std::size_t>& node_path) {
        AdmissiblePolygon poly;
        poly.vertex_ids = node_path;
        std::vector<Point> pts;
        for (std::size_t k = 0; k < arc_path.size(); ++k) {
            const Arc& a = arcs[arc_path[k]];
            std::size_t from = node_path[k];
            bool forward = a.u == from;
            if (a.boundary_edge >= 0) {
                // Boundary edges only appear forward in a CCW-consistent
                // polygon, but allow reversed traversal for generality.
                poly.sides.emplace_back(static_cast<std::size_t>(a.boundary_edge));
                append_side_points(pts, d.edges[a.boundary_edge].curve, forward);
            } else {
                PolygonChord pc = chords[a.chord_id];
                if (!forward) {
                    pc.curve = pc.curve.reversed();
                    std::swap(pc.v_from, pc.v_to);
                }
                append_side_points(pts, pc.curve, true);
                poly.sides.emplace_back(std::move(pc));
            }
        }
        if (pts.size() < 3) return;
        if (std::abs(detail::polyline_signed_area(pts)) < 1e-14) return;
        if (!detail::polyline_is_simple(pts)) return;
        result.polygons.push_back(std::move(poly));
    };

    // Enumerate simple cycles: DFS from each anchor vertex, visiting only
    // vertices >= anchor; a cycle closes when an arc returns to the anchor.
    for (std::size_t anchor = 0; anchor < nv; ++anchor) {
        if (result.polygons.size() >= opts.max_polygons) {
            result.capped = true;
            break;
        }
        std::vector<std::size_t> node_path{anchor};
        std::vector<std::size_t> arc_path;
        std::vector<bool> on_path(nv, false);
        on_path[anchor] = true;

        std::function<void(std::size_t)> dfs = [&](std::size_t node) {
            if (result.polygons.size() >= opts.max_polygons) {
                result.capped = true;
                return;
            }
            for (std::size_t arc_id : adjacency[node]) {
                if (result.capped) return;
                if (!arc_path.empty() && arc_id == arc_path.back()) continue;
                const Arc& a = arcs[arc_id];
                std::size_t other = a.u == node ? a.v : a.u;
                if (other < anchor) continue;
                if (other == anchor) {
                    if (arc_path.size() >= 2) {
                        std::set<std::size_t> key(arc_path.begin(), arc_path.end());
                        key.insert(arc_id);
                        if (seen.insert(key).second) {
                            arc_path.push_back(arc_id);
                            make_polygon(arc_path, node_path);
                            arc_path.pop_back();
                        }
                    }
                    continue;
                }
                if (on_path[other]) continue;
                on_path[other] = true;
                node_path.push_back(other);
                arc_path.push_back(arc_id);
                dfs(other);
                arc_path.pop_back();
                node_path.pop_back();
                on_path[other] = false;
            }
        };
        dfs(anchor);
    }

    return result;
}

ExistenceVerdict check_existence(const MetricModel& m, const AdmissibleDomain& d,
                                 const CheckOptions& opts) {
    ExistenceVerdict verdict;
    EnumerateResult en = enumerate_polygons(m, d, opts.enumerate);
    verdict.polygons = en.polygons;
    verdict.reports.resize(en.polygons.size());
    for (std::size_t i = 0; i < en.polygons.size(); ++i) {
        verdict.reports[i] = polygon_report(m, d, en.polygons[i], opts.report);
    }

    const bool c_nonempty = d.has_finite_data_edges();
    for (std::size_t i = 0; i < en.polygons.size(); ++i) {
        const AdmissiblePolygon& poly = en.polygons[i];
        const PolygonReport& rep = verdict.reports[i];
        bool need_strict = c_nonempty || !poly.is_whole_domain;
        if (need_strict && !(rep.passes_alpha && rep.passes_beta)) {
            verdict.result = ExistenceCase::Fails;
            verdict.witness = poly;
            return verdict;
        }
    }

    if (!c_nonempty) {
        const PolygonReport& whole = verdict.reports.front();
        verdict.balance_gap = std::abs(whole.alpha_f - whole.beta_f);
        double tol = opts.tol_balance * std::max(1.0, whole.perimeter_f);
        if (verdict.balance_gap > tol) {
            verdict.result = ExistenceCase::Fails;
            verdict.witness = en.polygons.front();
            return verdict;
        }
    }

    if (en.capped) {
        verdict.result = ExistenceCase::Partial;
        return verdict;
    }
    verdict.result = c_nonempty ? ExistenceCase::CaseA : ExistenceCase::CaseB;
    return verdict;
}

const char* to_string(ExistenceCase c) {
    switch (c) {
        case ExistenceCase::CaseA: return "case (a)";
        case ExistenceCase::CaseB: return "case (b)";
        case ExistenceCase::Fails: return "fails";
        case ExistenceCase::Partial: return "partial (cap reached)";
    }
    return "?";
}

// -- constructors ---------------------------------------------------------------

namespace {

Edge make_edge(AnalyticCurve curve, EdgeKind kind, double data, double sample,
               std::string desc) {
    Edge e;
    e.curve = curve.sample(sample);
    e.analytic = std::move(curve);
    e.kind = kind;
    if (kind == EdgeKind::C) {
        e.data = [data](Point) { return data; };
    }
    e.source_desc = std::move(desc);
    return e;
}

std::string fmt_desc(const char* name, std::initializer_list<double> params) {
    std::ostringstream os;
    os << name;
    for (double p : params) os << " " << p;
    return os.str();
}

} // namespace

AdmissibleDomain scherk_quadrilateral(const MetricModel& m, double a, double b, double r,
                                      double s, const ScherkSpec& spec) {
    if (!(a < b)) throw ContractError("scherk_quadrilateral: requires a < b");
    if (!(s < r)) throw ContractError("scherk_quadrilateral: requires s < r");
    const double c = m.c();
    if (c < 0.0) throw ContractError("scherk_quadrilateral: requires c >= 0");

    std::vector<Edge> edges;
    if (m.name() == "r3") {
        double w = grim_reaper_half_window(c);
        if (std::abs(r) >= w || std::abs(s) >= w) {
            throw ContractError("scherk_quadrilateral: window must fit in (-pi/2c, pi/2c)");
        }
        double hr = grim_reaper_height(c, 0.0, r);
        double hs = grim_reaper_height(c, 0.0, s);
        edges.push_back(make_edge(grim_reaper_arc(c, a, s, r), spec.kinds[0], spec.data[0],
                                  spec.edge_sample, fmt_desc("reaper", {a, s, r})));
        edges.push_back(make_edge(vertical_segment(r, a + hr, b + hr), spec.kinds[1],
                                  spec.data[1], spec.edge_sample,
                                  fmt_desc("vertical", {r, a + hr, b + hr})));
        edges.push_back(make_edge(grim_reaper_arc(c, b, r, s), spec.kinds[2], spec.data[2],
                                  spec.edge_sample, fmt_desc("reaper", {b, r, s})));
        edges.push_back(make_edge(vertical_segment(s, b + hs, a + hs), spec.kinds[3],
                                  spec.data[3], spec.edge_sample,
                                  fmt_desc("vertical", {s, b + hs, a + hs})));
    } else if (m.name() == "h2xr") {
        double w = tilted_reaper_half_window(c);
        if (std::abs(r) >= w || std::abs(s) >= w) {
            throw ContractError(
                "scherk_quadrilateral: window must fit in (-pi/(2(1+c^2)), pi/(2(1+c^2)))");
        }
        double hr = tilted_reaper_height(c, 0.0, r);
        double hs = tilted_reaper_height(c, 0.0, s);
        edges.push_back(make_edge(tilted_reaper_arc(c, a, s, r), spec.kinds[0], spec.data[0],
                                  spec.edge_sample, fmt_desc("tilted-reaper", {a, s, r})));
        edges.push_back(make_edge(tilted_line_segment(c, r, a + hr, b + hr), spec.kinds[1],
                                  spec.data[1], spec.edge_sample,
                                  fmt_desc("tilted-line", {r, a + hr, b + hr})));
        edges.push_back(make_edge(tilted_reaper_arc(c, b, r, s), spec.kinds[2], spec.data[2],
                                  spec.edge_sample, fmt_desc("tilted-reaper", {b, r, s})));
        edges.push_back(make_edge(tilted_line_segment(c, s, b + hs, a + hs), spec.kinds[3],
                                  spec.data[3], spec.edge_sample,
                                  fmt_desc("tilted-line", {s, b + hs, a + hs})));
    } else {
        throw ContractError("scherk_quadrilateral supports the built-in models only");
    }

    AdmissibleDomain d = AdmissibleDomain::from_edges(std::move(edges));
    for (const Point& v : d.vertices) m.require_in_chart(v);
    return d;
}

AdmissibleDomain rectangle_domain(double x0, double x1, double t0, double t1, EdgeData data,
                                  double edge_sample) {
    if (!(x0 < x1) || !(t0 < t1)) throw ContractError("rectangle_domain: empty rectangle");
    auto mk = [&](Point a, Point b) {
        Edge e;
        AnalyticCurve seg = straight_segment(a, b);
        e.curve = seg.sample(edge_sample);
        e.analytic = std::move(seg);
        e.kind = EdgeKind::C;
        e.data = data;
        e.source_desc = fmt_desc("segment", {a.x, a.t, b.x, b.t});
        return e;
    };
    std::vector<Edge> edges;
    edges.push_back(mk({x0, t0}, {x1, t0}));
    edges.push_back(mk({x1, t0}, {x1, t1}));
    edges.push_back(mk({x1, t1}, {x0, t1}));
    edges.push_back(mk({x0, t1}, {x0, t0}));
    return AdmissibleDomain::from_edges(std::move(edges));
}

} // namespace jsg
