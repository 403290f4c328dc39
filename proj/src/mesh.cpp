#include "jsgraph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "jsgraph/errors.hpp"
#include "polyline_util.hpp"

namespace jsg {

namespace {

double tri_min_angle_deg(const Point& a, const Point& b, const Point& c) {
    double la = distance(b, c), lb = distance(c, a), lc = distance(a, b);
    auto angle = [](double opp, double s1, double s2) {
        double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        return std::acos(std::clamp(cosv, -1.0, 1.0)) * 180.0 / M_PI;
    };
    return std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
}

Point circumcenter(const Point& a, const Point& b, const Point& c) {
    double d = 2.0 * orient2d(a, b, c);
    double a2 = a.norm2(), b2 = b.norm2(), c2 = c.norm2();
    double ux = (a2 * (b.t - c.t) + b2 * (c.t - a.t) + c2 * (a.t - b.t)) / d;
    double ut = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    return {ux, ut};
}

// Boundary sample with its vertex mark (edge index or -(2+corner)).
struct BoundaryPoint {
    Point p;
    int mark;
};

// Triangulation kernel: triangle soup with adjacency, boundary edges tagged.
// Edge j of a triangle runs v[j] -> v[(j+1)%3]; n[j] is the neighbor across
// it (-1 on the boundary).
class Builder {
public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> n;
    };

    std::vector<Point> pts;
    std::vector<int> mark;
    std::vector<Tri> tris;
    std::map<std::pair<int, int>, int> boundary_tag;

    static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

    double scale = 1.0; // typical coordinate magnitude, for tolerances

    void init_boundary(const std::vector<BoundaryPoint>& loop) {
        pts.reserve(loop.size());
        for (const BoundaryPoint& bp : loop) {
            pts.push_back(bp.p);
            mark.push_back(bp.mark);
            scale = std::max({scale, std::abs(bp.p.x), std::abs(bp.p.t)});
        }
    }

    // -- ear clipping of the boundary polygon --------------------------------

    void ear_clip() {
        int n = static_cast<int>(pts.size());
        std::vector<int> next(n), prev(n);
        for (int i = 0; i < n; ++i) {
            next[i] = (i + 1) % n;
            prev[i] = (i + n - 1) % n;
        }
        const double area_eps = 1e-14 * scale * scale;
        int remaining = n;
        int guard = n * n + 16;
        while (remaining > 3 && guard-- > 0) {
            int best = -1;
            double best_quality = -1.0;
            int v = 0;
            // Find the start of the active list.
            while (next[v] == v) ++v;
            int start = v;
            do {
                int a = prev[v], b = v, c = next[v];
                double area2 = orient2d(pts[a], pts[b], pts[c]);
                if (area2 > area_eps) {
                    bool blocked = false;
                    for (int w = next[c]; w != a; w = next[w]) {
                        if (point_in_triangle(pts[w], pts[a], pts[b], pts[c])) {
                            blocked = true;
                            break;
                        }
                    }
                    if (!blocked) {
                        double q = tri_min_angle_deg(pts[a], pts[b], pts[c]);
                        if (q > best_quality) {
                            best_quality = q;
                            best = v;
                        }
                    }
                }
                v = next[v];
            } while (v != start);
            if (best < 0) {
                throw MeshError("triangulate: no valid ear (self-intersecting or degenerate boundary)");
            }
            int a = prev[best], c = next[best];
            tris.push_back({{a, best, c}, {-1, -1, -1}});
            next[a] = c;
            prev[c] = a;
            next[best] = best;
            prev[best] = best;
            --remaining;
        }
        if (guard <= 0) throw MeshError("triangulate: ear clipping did not terminate");
        // Final triangle.
        int v = 0;
        while (next[v] == v) ++v;
        int a = v, b = next[v], c = next[next[v]];
        if (orient2d(pts[a], pts[b], pts[c]) <= area_eps) {
            throw MeshError("triangulate: degenerate final triangle");
        }
        tris.push_back({{a, b, c}, {-1, -1, -1}});
        build_adjacency();
    }

    bool point_in_triangle(const Point& p, const Point& a, const Point& b,
                           const Point& c) const {
        double eps = 1e-12 * scale * scale;
        double d1 = orient2d(a, b, p);
        double d2 = orient2d(b, c, p);
        double d3 = orient2d(c, a, p);
        return d1 >= -eps && d2 >= -eps && d3 >= -eps;
    }

    void build_adjacency() {
        std::map<std::pair<int, int>, std::pair<int, int>> half; // edge -> (tri, slot)
        for (std::size_t t = 0; t < tris.size(); ++t) {
            for (int j = 0; j < 3; ++j) {
                int a = tris[t].v[j], b = tris[t].v[(j + 1) % 3];
                auto k = key(a, b);
                auto it = half.find(k);
                if (it == half.end()) {
                    half[k] = {static_cast<int>(t), j};
                } else {
                    tris[t].n[j] = it->second.first;
                    tris[it->second.first].n[it->second.second] = static_cast<int>(t);
                }
            }
        }
    }

    // -- flips -----------------------------------------------------------------

    void replace_neighbor(int t, int old_nb, int new_nb) {
        if (t < 0) return;
        for (int j = 0; j < 3; ++j) {
            if (tris[t].n[j] == old_nb) {
                tris[t].n[j] = new_nb;
                return;
            }
        }
    }

    // Flip edge j of t when the angle criterion improves; returns success.
    bool try_flip(int t, int j) {
        int nt = tris[t].n[j];
        if (nt < 0) return false;
        int a = tris[t].v[j];
        int b = tris[t].v[(j + 1) % 3];
        int c = tris[t].v[(j + 2) % 3];
        int k = -1;
        for (int s = 0; s < 3; ++s) {
            if (tris[nt].v[s] == b && tris[nt].v[(s + 1) % 3] == a) k = s;
        }
        if (k < 0) return false;
        int d = tris[nt].v[(k + 2) % 3];

        double eps = 1e-14 * scale * scale;
        if (orient2d(pts[a], pts[d], pts[c]) <= eps) return false;
        if (orient2d(pts[d], pts[b], pts[c]) <= eps) return false;

        double old_q = std::min(tri_min_angle_deg(pts[a], pts[b], pts[c]),
                                tri_min_angle_deg(pts[b], pts[a], pts[d]));
        double new_q = std::min(tri_min_angle_deg(pts[a], pts[d], pts[c]),
                                tri_min_angle_deg(pts[d], pts[b], pts[c]));
        if (new_q <= old_q + 1e-12) return false;

        int X1 = tris[t].n[(j + 1) % 3];  // across (b,c)
        int X2 = tris[t].n[(j + 2) % 3];  // across (c,a)
        int Y1 = tris[nt].n[(k + 1) % 3]; // across (a,d)
        int Y2 = tris[nt].n[(k + 2) % 3]; // across (d,b)

        tris[t] = {{a, d, c}, {Y1, nt, X2}};
        tris[nt] = {{d, b, c}, {Y2, X1, t}};
        replace_neighbor(Y1, nt, t);
        replace_neighbor(X1, t, nt);
        return true;
    }

    void legalize_all() {
        for (int pass = 0; pass < 100; ++pass) {
            bool changed = false;
            for (std::size_t t = 0; t < tris.size(); ++t) {
                for (int j = 0; j < 3; ++j) {
                    if (tris[t].n[j] >= 0 && try_flip(static_cast<int>(t), j)) changed = true;
                }
            }
            if (!changed) return;
        }
    }

    // Propagate flips outward from the given triangles until stable.
    void legalize_from(std::vector<int> stack) {
        int guard = 100000;
        while (!stack.empty() && guard-- > 0) {
            int t = stack.back();
            stack.pop_back();
            if (t < 0 || t >= static_cast<int>(tris.size())) continue;
            for (int j = 0; j < 3; ++j) {
                int nb = tris[t].n[j];
                if (nb >= 0 && try_flip(t, j)) {
                    stack.push_back(t);
                    stack.push_back(nb);
                    break;
                }
            }
        }
    }

    // -- point insertion ---------------------------------------------------------

    struct Location {
        int tri = -1;
        int edge = -1;    // slot if on an edge
        int vertex = -1;  // existing vertex if coincident
    };

    Location locate(const Point& p, int seed) const {
        double edge_eps = 1e-12 * scale;
        int t = seed >= 0 && seed < static_cast<int>(tris.size()) ? seed : 0;
        int steps = static_cast<int>(tris.size()) * 4 + 32;
        int previous = -1;
        while (steps-- > 0) {
            int worst_slot = -1;
            double worst = -1.0;
            bool inside = true;
            for (int j = 0; j < 3; ++j) {
                const Point& a = pts[tris[t].v[j]];
                const Point& b = pts[tris[t].v[(j + 1) % 3]];
                double o = orient2d(a, b, p);
                if (o < -edge_eps * distance(a, b)) {
                    inside = false;
                    if (-o > worst) {
                        worst = -o;
                        worst_slot = j;
                    }
                }
            }
            if (inside) return classify(p, t);
            int nb = tris[t].n[worst_slot];
            if (nb < 0 || nb == previous) {
                // Stuck (outside the domain or cycling); fall back to a scan.
                break;
            }
            previous = t;
            t = nb;
        }
        for (std::size_t s = 0; s < tris.size(); ++s) {
            bool in = true;
            for (int j = 0; j < 3 && in; ++j) {
                const Point& a = pts[tris[s].v[j]];
                const Point& b = pts[tris[s].v[(j + 1) % 3]];
                if (orient2d(a, b, p) < -edge_eps * distance(a, b)) in = false;
            }
            if (in) return classify(p, static_cast<int>(s));
        }
        return {};
    }

    Location classify(const Point& p, int t) const {
        Location loc;
        loc.tri = t;
        double vertex_eps = 1e-11 * scale;
        for (int j = 0; j < 3; ++j) {
            if (distance(pts[tris[t].v[j]], p) <= vertex_eps) {
                loc.vertex = tris[t].v[j];
                return loc;
            }
        }
        for (int j = 0; j < 3; ++j) {
            const Point& a = pts[tris[t].v[j]];
            const Point& b = pts[tris[t].v[(j + 1) % 3]];
            double len = distance(a, b);
            if (std::abs(orient2d(a, b, p)) <= 1e-12 * scale * len) {
                loc.edge = j;
                return loc;
            }
        }
        return loc;
    }

    // Returns the index of the inserted point (or the coincident vertex).
    int insert_point(const Point& p, int point_mark, int seed) {
        Location loc = locate(p, seed);
        if (loc.tri < 0) return -1;
        if (loc.vertex >= 0) return loc.vertex;
        int pi = static_cast<int>(pts.size());
        pts.push_back(p);
        mark.push_back(point_mark);
        std::vector<int> affected;
        if (loc.edge >= 0) {
            affected = split_edge(loc.tri, loc.edge, pi);
        } else {
            affected = split_triangle(loc.tri, pi);
        }
        legalize_from(std::move(affected));
        return pi;
    }

    std::vector<int> split_triangle(int t, int pi) {
        auto [a, b, c] = tris[t].v;
        auto [nab, nbc, nca] = tris[t].n;
        int t1 = static_cast<int>(tris.size());
        int t2 = t1 + 1;
        tris[t] = {{a, b, pi}, {nab, t1, t2}};
        tris.push_back({{b, c, pi}, {nbc, t2, t}});
        tris.push_back({{c, a, pi}, {nca, t, t1}});
        replace_neighbor(nbc, t, t1);
        replace_neighbor(nca, t, t2);
        return {t, t1, t2};
    }

    std::vector<int> split_edge(int t, int j, int pi) {
        int nt = tris[t].n[j];
        int a = tris[t].v[j];
        int b = tris[t].v[(j + 1) % 3];
        int c = tris[t].v[(j + 2) % 3];
        int X1 = tris[t].n[(j + 1) % 3]; // across (b,c)
        int X2 = tris[t].n[(j + 2) % 3]; // across (c,a)
        if (nt < 0) {
            // Boundary edge: 1 -> 2, keep the tag on both halves.
            auto it = boundary_tag.find(key(a, b));
            int tag = it != boundary_tag.end() ? it->second : -1;
            if (it != boundary_tag.end()) boundary_tag.erase(it);
            boundary_tag[key(a, pi)] = tag;
            boundary_tag[key(pi, b)] = tag;
            int t1 = static_cast<int>(tris.size());
            tris[t] = {{a, pi, c}, {-1, t1, X2}};
            tris.push_back({{pi, b, c}, {-1, X1, t}});
            replace_neighbor(X1, t, t1);
            return {t, t1};
        }
        int k = -1;
        for (int s = 0; s < 3; ++s) {
            if (tris[nt].v[s] == b && tris[nt].v[(s + 1) % 3] == a) k = s;
        }
        if (k < 0) throw MeshError("triangulate: adjacency corrupted");
        int d = tris[nt].v[(k + 2) % 3];
        int Y1 = tris[nt].n[(k + 1) % 3]; // across (a,d)
        int Y2 = tris[nt].n[(k + 2) % 3]; // across (d,b)
        int t1 = static_cast<int>(tris.size());
        int t3 = t1 + 1;
        tris[t] = {{a, pi, c}, {t3, t1, X2}};
        tris.push_back({{pi, b, c}, {nt, X1, t}});
        tris[nt] = {{b, pi, d}, {t1, t3, Y2}};
        tris.push_back({{pi, a, d}, {t, Y1, nt}});
        replace_neighbor(X1, t, t1);
        replace_neighbor(Y1, nt, t3);
        return {t, t1, nt, t3};
    }

    // -- smoothing ---------------------------------------------------------------

    void smooth_pass() {
        std::vector<std::vector<int>> incident(pts.size());
        for (std::size_t t = 0; t < tris.size(); ++t) {
            for (int j = 0; j < 3; ++j) incident[tris[t].v[j]].push_back(static_cast<int>(t));
        }
        for (std::size_t v = 0; v < pts.size(); ++v) {
            if (mark[v] != -1) continue; // interior only
            std::set<int> ring;
            for (int t : incident[v]) {
                for (int j = 0; j < 3; ++j) {
                    if (tris[t].v[j] != static_cast<int>(v)) ring.insert(tris[t].v[j]);
                }
            }
            if (ring.size() < 3) continue;
            Vec2 avg{0.0, 0.0};
            for (int r : ring) avg += pts[r];
            avg = avg / static_cast<double>(ring.size());
            double before = local_quality(incident[v]);
            Point old = pts[v];
            pts[v] = avg;
            double after = local_quality(incident[v]);
            if (after <= before) pts[v] = old;
        }
    }

    double local_quality(const std::vector<int>& ts) const {
        double q = 180.0;
        for (int t : ts) {
            const Point& a = pts[tris[t].v[0]];
            const Point& b = pts[tris[t].v[1]];
            const Point& c = pts[tris[t].v[2]];
            if (orient2d(a, b, c) <= 0.0) return -1.0;
            q = std::min(q, tri_min_angle_deg(a, b, c));
        }
        return q;
    }
};

// Resamples the domain boundary with spacing graded toward the corners.
std::vector<BoundaryPoint> sample_boundary(const AdmissibleDomain& d, double h,
                                           const MeshOptions& opts) {
    std::vector<BoundaryPoint> loop;
    for (std::size_t e = 0; e < d.edges.size(); ++e) {
        const Edge& edge = d.edges[e];
        ParamCurve base = edge.analytic
                              ? edge.analytic->sample(std::max(1e-3, h / 4.0))
                              : edge.curve;
        std::vector<double> s(base.pts.size(), 0.0);
        for (std::size_t i = 1; i < base.pts.size(); ++i) {
            s[i] = s[i - 1] + distance(base.pts[i - 1], base.pts[i]);
        }
        double total = s.back();
        auto at = [&](double arc) {
            auto it = std::upper_bound(s.begin(), s.end(), arc);
            std::size_t i = std::min<std::size_t>(s.size() - 1,
                                                  static_cast<std::size_t>(it - s.begin()));
            if (i == 0) return base.pts.front();
            double w = (arc - s[i - 1]) / (s[i] - s[i - 1]);
            return base.pts[i - 1] + (base.pts[i] - base.pts[i - 1]) * w;
        };
        auto spacing = [&](double arc) {
            double corner_dist = std::min(arc, total - arc);
            double target = h * opts.corner_grade + 0.6 * corner_dist;
            return std::clamp(target, h * opts.corner_grade, h);
        };
        loop.push_back({base.pts.front(), -(2 + static_cast<int>(e))});
        double arc = 0.0;
        while (true) {
            double step = spacing(arc);
            if (total - arc < 1.5 * step) break;
            arc += step;
            loop.push_back({at(arc), static_cast<int>(e)});
        }
    }
    return loop;
}

} // namespace

double TriMesh::triangle_area(int t) const {
    const auto& tr = triangles[t];
    return 0.5 * orient2d(vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]);
}

Point TriMesh::triangle_centroid(int t) const {
    const auto& tr = triangles[t];
    return (vertices[tr[0]] + vertices[tr[1]] + vertices[tr[2]]) / 3.0;
}

double TriMesh::min_angle_deg() const {
    double q = 180.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tr = triangles[t];
        q = std::min(q, tri_min_angle_deg(vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]));
    }
    return q;
}

int TriMesh::locate(const Point& p) const {
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tr = triangles[t];
        const Point& a = vertices[tr[0]];
        const Point& b = vertices[tr[1]];
        const Point& c = vertices[tr[2]];
        double eps = 1e-10 * (distance(a, b) + distance(b, c));
        if (orient2d(a, b, p) >= -eps && orient2d(b, c, p) >= -eps &&
            orient2d(c, a, p) >= -eps) {
            return static_cast<int>(t);
        }
    }
    return -1;
}

std::array<double, 3> TriMesh::barycentric(int t, const Point& p) const {
    const auto& tr = triangles[t];
    const Point& a = vertices[tr[0]];
    const Point& b = vertices[tr[1]];
    const Point& c = vertices[tr[2]];
    double area = orient2d(a, b, c);
    return {orient2d(b, c, p) / area, orient2d(c, a, p) / area, orient2d(a, b, p) / area};
}

TriMesh triangulate(const AdmissibleDomain& d, double h_target, const MeshOptions& opts) {
    if (h_target <= 0.0) throw ContractError("triangulate: h_target must be > 0");

    std::vector<BoundaryPoint> loop = sample_boundary(d, h_target, opts);
    {
        std::vector<Point> flat;
        flat.reserve(loop.size());
        for (const BoundaryPoint& bp : loop) flat.push_back(bp.p);
        if (detail::polyline_signed_area(flat) <= 0.0) {
            throw MeshError("triangulate: boundary is not positively oriented");
        }
        if (!detail::polyline_is_simple(flat)) {
            throw MeshError("triangulate: boundary self-intersects");
        }
    }

    Builder mb;
    mb.init_boundary(loop);
    for (std::size_t i = 0; i < loop.size(); ++i) {
        std::size_t j = (i + 1) % loop.size();
        int tag = loop[j].mark >= 0 ? loop[j].mark : loop[i].mark;
        if (tag < 0) {
            // Single-segment edge between two corners: the tag is the edge
            // starting at corner i.
            tag = -(loop[i].mark + 2);
        }
        mb.boundary_tag[Builder::key(static_cast<int>(i), static_cast<int>(j))] = tag;
    }
    mb.ear_clip();
    mb.legalize_all();

    // Local size: h_target away from corners, graded down near them.
    auto h_local = [&](const Point& p) {
        double dist = std::numeric_limits<double>::infinity();
        for (const Point& v : d.vertices) dist = std::min(dist, distance(p, v));
        return std::clamp(h_target * opts.corner_grade + 0.6 * dist,
                          h_target * opts.corner_grade, h_target);
    };

    const double quality_goal = opts.min_angle_deg + 0.5;
    const double min_split_len = 0.2 * opts.corner_grade * h_target;

    for (int round = 0; round < opts.max_refine_rounds; ++round) {
        struct Bad {
            double badness;
            Point cc;
            int tri;
        };
        std::vector<Bad> bads;
        for (std::size_t t = 0; t < mb.tris.size(); ++t) {
            const Point& a = mb.pts[mb.tris[t].v[0]];
            const Point& b = mb.pts[mb.tris[t].v[1]];
            const Point& c = mb.pts[mb.tris[t].v[2]];
            double q = tri_min_angle_deg(a, b, c);
            double longest = std::max({distance(a, b), distance(b, c), distance(c, a)});
            double h_here = h_local((a + b + c) / 3.0);
            bool quality_bad = q < quality_goal;
            bool size_bad = longest > 1.4 * h_here;
            if (!quality_bad && !size_bad) continue;
            double badness = quality_bad ? (quality_goal - q) + 100.0 : longest / h_here;
            bads.push_back({badness, circumcenter(a, b, c), static_cast<int>(t)});
        }
        if (bads.empty()) break;
        std::sort(bads.begin(), bads.end(),
                  [](const Bad& x, const Bad& y) { return x.badness > y.badness; });

        bool inserted_any = false;
        for (const Bad& bad : bads) {
            if (mb.pts.size() >= opts.max_vertices) {
                throw MeshError("triangulate: vertex budget exhausted");
            }
            Point cc = bad.cc;
            if (!std::isfinite(cc.x) || !std::isfinite(cc.t)) continue;
            // Encroachment: a circumcenter inside the diametral circle of a
            // boundary segment splits that segment instead.  Work on a
            // snapshot because the split mutates the tag map.
            bool handled = false;
            std::vector<std::pair<std::pair<int, int>, int>> segs(mb.boundary_tag.begin(),
                                                                  mb.boundary_tag.end());
            for (const auto& [k, tag] : segs) {
                const Point& a = mb.pts[k.first];
                const Point& b = mb.pts[k.second];
                Point mid = (a + b) * 0.5;
                double r = 0.5 * distance(a, b);
                if (distance(cc, mid) < r * (1.0 - 1e-12)) {
                    if (distance(a, b) > min_split_len) {
                        int before = static_cast<int>(mb.pts.size());
                        if (mb.insert_point(mid, tag, bad.tri) == before) inserted_any = true;
                    }
                    handled = true;
                    break;
                }
            }
            if (handled) continue;
            int before = static_cast<int>(mb.pts.size());
            int got = mb.insert_point(cc, -1, bad.tri);
            if (got == before) inserted_any = true;
        }
        if (!inserted_any) break;
        if (round % 2 == 1) {
            for (int s = 0; s < opts.smooth_passes; ++s) mb.smooth_pass();
            mb.legalize_all();
        }
    }

    for (int s = 0; s < opts.smooth_passes; ++s) {
        mb.smooth_pass();
        mb.legalize_all();
    }

    // -- verification and assembly ---------------------------------------------

    TriMesh mesh;
    mesh.vertices = mb.pts;
    mesh.vertex_mark = mb.mark;
    mesh.h_target = h_target;
    mesh.triangles.reserve(mb.tris.size());
    for (const Builder::Tri& t : mb.tris) mesh.triangles.push_back(t.v);

    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tr : mesh.triangles) {
        if (orient2d(mesh.vertices[tr[0]], mesh.vertices[tr[1]], mesh.vertices[tr[2]]) <= 0.0) {
            throw MeshError("triangulate: inverted triangle in output");
        }
        for (int j = 0; j < 3; ++j) {
            edge_count[Builder::key(tr[j], tr[(j + 1) % 3])] += 1;
        }
    }
    std::map<int, std::pair<int, int>> succ; // boundary successor v0 -> (v1, tag)
    for (const auto& [k, cnt] : edge_count) {
        if (cnt > 2) throw MeshError("triangulate: non-conforming edge");
        if (cnt == 1) {
            auto it = mb.boundary_tag.find(k);
            if (it == mb.boundary_tag.end() || it->second < 0) {
                throw MeshError("triangulate: untagged boundary edge");
            }
        }
    }
    // Orient boundary segments CCW using the owning triangles.
    for (const auto& tr : mesh.triangles) {
        for (int j = 0; j < 3; ++j) {
            auto k = Builder::key(tr[j], tr[(j + 1) % 3]);
            if (edge_count[k] == 1) {
                succ[tr[j]] = {tr[(j + 1) % 3], mb.boundary_tag[k]};
            }
        }
    }
    if (succ.empty()) throw MeshError("triangulate: no boundary found");
    int start = succ.begin()->first;
    int v = start;
    do {
        auto it = succ.find(v);
        if (it == succ.end()) throw MeshError("triangulate: boundary loop broken");
        mesh.boundary.push_back({v, it->second.first, it->second.second});
        v = it->second.first;
        if (mesh.boundary.size() > succ.size()) {
            throw MeshError("triangulate: boundary is not a single loop");
        }
    } while (v != start);
    if (mesh.boundary.size() != succ.size()) {
        throw MeshError("triangulate: boundary is not a single loop");
    }

    if (mesh.min_angle_deg() < opts.min_angle_deg - 1e-9) {
        std::ostringstream os;
        os << "triangulate: could not reach min angle " << opts.min_angle_deg
           << " (got " << mesh.min_angle_deg() << ")";
        throw MeshError(os.str());
    }
    return mesh;
}

} // namespace jsg
