#include "jsgraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "jsgraph/errors.hpp"
#include "jsgraph/fem.hpp"

namespace jsg {

double SolutionField::value_at(const Point& p) const {
    int t = mesh->locate(p);
    if (t < 0) throw ContractError("value_at: point outside the mesh");
    auto bc = mesh->barycentric(t, p);
    const auto& tr = mesh->triangles[t];
    return bc[0] * u[tr[0]] + bc[1] * u[tr[1]] + bc[2] * u[tr[2]];
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct DofMap {
    std::vector<int> dof; // -1 for fixed (boundary) vertices
    std::vector<int> free_vertices;
};

DofMap build_dof_map(const TriMesh& mesh) {
    DofMap m;
    m.dof.assign(mesh.vertices.size(), -1);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (!mesh.is_boundary_vertex(static_cast<int>(v))) {
            m.dof[v] = static_cast<int>(m.free_vertices.size());
            m.free_vertices.push_back(static_cast<int>(v));
        }
    }
    return m;
}

// Linear solve with W frozen at 1 (weighted harmonic extension).
void harmonic_initial_guess(const FemWorkspace& ws, const TriMesh& mesh, const DofMap& dm,
                            const std::vector<double>* load, std::vector<double>& u) {
    std::size_t nf = dm.free_vertices.size();
    if (nf == 0) return;
    Triplets trips;
    trips.reserve(9 * mesh.triangles.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        double s = ws.omega[t] * ws.area[t];
        for (int i = 0; i < 3; ++i) {
            int di = dm.dof[tr[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                double kij = s * dot(ws.hat_grad[t][i], ws.hat_grad[t][j]);
                int dj = dm.dof[tr[j]];
                if (dj >= 0) {
                    trips.emplace_back(di, dj, kij);
                } else {
                    rhs[di] -= kij * u[tr[j]];
                }
            }
        }
    }
    if (load) {
        for (std::size_t k = 0; k < nf; ++k) rhs[k] += (*load)[dm.free_vertices[k]];
    }
    SpMat K(nf, nf);
    K.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<SpMat> chol(K);
    if (chol.info() != Eigen::Success) {
        throw SolverError("initial guess: factorization failed", u);
    }
    Eigen::VectorXd x = chol.solve(rhs);
    for (std::size_t k = 0; k < nf; ++k) u[dm.free_vertices[k]] = x[k];
}

struct NewtonResult {
    bool converged = false;
    double residual_norm = 0.0;
    int iters = 0;
};

NewtonResult newton_solve(const FemWorkspace& ws, const TriMesh& mesh, const DofMap& dm,
                          const std::vector<double>* load, const SolveOptions& opts,
                          std::vector<double>& u) {
    std::size_t nf = dm.free_vertices.size();
    NewtonResult res;
    if (nf == 0) {
        res.converged = true;
        return res;
    }

    auto residual = [&](const std::vector<double>& uu, std::vector<double>& r) {
        if (opts.parallel_assembly) {
            assemble_residual_parallel(ws, mesh, uu, load, r);
        } else {
            assemble_residual_serial(ws, mesh, uu, load, r);
        }
    };
    auto energy = [&](const std::vector<double>& uu) {
        return opts.parallel_assembly ? energy_parallel(ws, mesh, uu, load)
                                      : energy_serial(ws, mesh, uu, load);
    };

    std::vector<double> r_full;
    Triplets trips;
    std::vector<double> trial = u;

    for (res.iters = 0; res.iters < opts.max_newton_iters; ++res.iters) {
        residual(u, r_full);
        double norm2 = 0.0;
        for (int v : dm.free_vertices) norm2 += r_full[v] * r_full[v];
        res.residual_norm = std::sqrt(norm2);
        if (res.residual_norm <= opts.newton_tol) {
            res.converged = true;
            return res;
        }

        if (opts.parallel_assembly) {
            assemble_jacobian_parallel(ws, mesh, u, dm.dof, trips);
        } else {
            assemble_jacobian_serial(ws, mesh, u, dm.dof, trips);
        }
        SpMat J(nf, nf);
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::VectorXd rhs(nf);
        for (std::size_t k = 0; k < nf; ++k) rhs[k] = -r_full[dm.free_vertices[k]];
        Eigen::SimplicialLDLT<SpMat> chol(J);
        if (chol.info() != Eigen::Success) return res;
        Eigen::VectorXd d = chol.solve(rhs);

        // Backtracking line search on the energy (the Newton direction is a
        // descent direction: the Jacobian is positive definite).  Near the
        // minimum the predicted decrease sinks below energy roundoff, so the
        // Armijo test carries a roundoff slack; as a final fallback a step
        // that still shrinks the residual is accepted.
        double slope = 0.0;
        for (std::size_t k = 0; k < nf; ++k) slope += r_full[dm.free_vertices[k]] * d[k];
        double e0 = energy(u);
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            for (std::size_t k = 0; k < nf; ++k) {
                trial[dm.free_vertices[k]] = u[dm.free_vertices[k]] + alpha * d[k];
            }
            double e1 = energy(trial);
            double slack = 1e-14 * (std::abs(e0) + std::abs(e1));
            if (e1 <= e0 + 1e-4 * alpha * slope + slack) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            for (std::size_t k = 0; k < nf; ++k) {
                trial[dm.free_vertices[k]] = u[dm.free_vertices[k]] + d[k];
            }
            std::vector<double> r_trial;
            residual(trial, r_trial);
            double trial_norm2 = 0.0;
            for (int v : dm.free_vertices) trial_norm2 += r_trial[v] * r_trial[v];
            if (std::sqrt(trial_norm2) <= 0.9 * res.residual_norm) accepted = true;
        }
        if (!accepted) return res; // stalled
        u.swap(trial);
        trial = u;
    }
    return res;
}

} // namespace

SolutionField solve_dirichlet(const MetricModel& m, std::shared_ptr<const TriMesh> mesh,
                              const std::vector<double>& boundary_values,
                              const std::function<double(Point)>* source,
                              const SolveOptions& opts) {
    if (!mesh) throw ContractError("solve_dirichlet: null mesh");
    if (boundary_values.size() != mesh->vertices.size()) {
        throw ContractError("solve_dirichlet: boundary_values must be vertex-sized");
    }
    for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
        if (mesh->is_boundary_vertex(static_cast<int>(v)) &&
            !std::isfinite(boundary_values[v])) {
            throw ContractError("solve_dirichlet: boundary values must be finite");
        }
    }

    FemWorkspace ws = FemWorkspace::build(m, *mesh);
    DofMap dm = build_dof_map(*mesh);
    std::vector<double> load;
    const std::vector<double>* load_ptr = nullptr;
    if (source) {
        load = assemble_load(*mesh, *source);
        load_ptr = &load;
    }

    auto run_at_amplitude = [&](double theta, std::vector<double>& u, bool cold) {
        for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
            if (mesh->is_boundary_vertex(static_cast<int>(v))) {
                u[v] = theta * boundary_values[v];
            }
        }
        if (cold) harmonic_initial_guess(ws, *mesh, dm, load_ptr, u);
        return newton_solve(ws, *mesh, dm, load_ptr, opts, u);
    };

    std::vector<double> u(mesh->vertices.size(), 0.0);
    bool cold_start = true;
    if (opts.initial_guess) {
        if (opts.initial_guess->size() != u.size()) {
            throw ContractError("solve_dirichlet: initial guess must be vertex-sized");
        }
        u = *opts.initial_guess;
        cold_start = false;
    }
    NewtonResult nr = run_at_amplitude(1.0, u, cold_start);
    int total_iters = nr.iters;

    if (!nr.converged) {
        // Continuation: grow the boundary amplitude from a small fraction,
        // doubling toward 1 with warm starts.
        std::fill(u.begin(), u.end(), 0.0);
        double theta = std::pow(0.5, opts.continuation_steps);
        bool first = true;
        bool ok = true;
        while (true) {
            NewtonResult step = run_at_amplitude(theta, u, first);
            first = false;
            total_iters += step.iters;
            if (!step.converged) {
                ok = false;
                break;
            }
            if (theta >= 1.0) {
                nr = step;
                break;
            }
            theta = std::min(1.0, 2.0 * theta);
        }
        if (!ok || !nr.converged) {
            std::ostringstream os;
            os << "solve_dirichlet: Newton stalled (residual " << nr.residual_norm
               << " after continuation)";
            throw SolverError(os.str(), u);
        }
    }

    SolutionField field;
    field.mesh = std::move(mesh);
    field.u = std::move(u);
    field.residual_norm = nr.residual_norm;
    field.newton_iters = total_iters;
    return field;
}

void CapSchedule::validate() const {
    if (levels.empty()) throw ContractError("cap schedule must not be empty");
    double prev = 0.0;
    for (double n : levels) {
        if (!(n > prev)) {
            throw ContractError("cap schedule must be strictly increasing and positive");
        }
        prev = n;
    }
}

std::vector<double> cap_boundary_values(const AdmissibleDomain& d, const TriMesh& mesh,
                                        double cap) {
    std::vector<double> values(mesh.vertices.size(), 0.0);
    auto edge_value = [&](int edge_idx, const Point& p) {
        const Edge& e = d.edges[edge_idx];
        switch (e.kind) {
            case EdgeKind::A: return cap;
            case EdgeKind::B: return -cap;
            case EdgeKind::C: {
                double c = e.data ? e.data(p) : 0.0;
                return std::clamp(c, -cap, cap);
            }
        }
        return 0.0;
    };
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        int mark = mesh.vertex_mark[v];
        if (mark == -1) continue;
        const Point& p = mesh.vertices[v];
        if (mark >= 0) {
            values[v] = edge_value(mark, p);
            continue;
        }
        // Corner between edges k-1 and k: a finite-data side wins the
        // conflict, otherwise the infinite labels cancel to 0.
        int k = mesh.corner_domain_vertex(static_cast<int>(v));
        int prev_edge = (k + static_cast<int>(d.edges.size()) - 1) %
                        static_cast<int>(d.edges.size());
        const Edge& e_prev = d.edges[prev_edge];
        const Edge& e_next = d.edges[k];
        bool prev_c = e_prev.kind == EdgeKind::C;
        bool next_c = e_next.kind == EdgeKind::C;
        if (prev_c && next_c) {
            values[v] = 0.5 * (edge_value(prev_edge, p) + edge_value(k, p));
        } else if (prev_c) {
            values[v] = edge_value(prev_edge, p);
        } else if (next_c) {
            values[v] = edge_value(k, p);
        } else if (e_prev.kind == e_next.kind) {
            values[v] = edge_value(k, p); // A-A or B-B (invalid domains)
        } else {
            values[v] = 0.0; // A meets B
        }
    }
    return values;
}

JsRun solve_jenkins_serrin(const MetricModel& m, const AdmissibleDomain& d,
                           const CapSchedule& schedule, double h_target, const JsOptions& opts,
                           std::shared_ptr<const TriMesh> premade_mesh) {
    schedule.validate();
    JsRun run;
    run.schedule = schedule;
    run.mesh = premade_mesh ? std::move(premade_mesh)
                            : std::make_shared<const TriMesh>(triangulate(d, h_target, opts.mesh));
    run.reference = d.centroid();
    run.normalized = !d.has_finite_data_edges();

    FemWorkspace ws = FemWorkspace::build(m, *run.mesh);
    DofMap dm = build_dof_map(*run.mesh);

    std::vector<double> u(run.mesh->vertices.size(), 0.0);
    bool have_warm_start = false;

    for (double cap : schedule.levels) {
        std::vector<double> bv = cap_boundary_values(d, *run.mesh, cap);
        for (std::size_t v = 0; v < bv.size(); ++v) {
            if (run.mesh->is_boundary_vertex(static_cast<int>(v))) u[v] = bv[v];
        }
        try {
            NewtonResult nr;
            if (have_warm_start) {
                nr = newton_solve(ws, *run.mesh, dm, nullptr, opts.solve, u);
            }
            if (!have_warm_start || !nr.converged) {
                SolutionField f = solve_dirichlet(m, run.mesh, bv, nullptr, opts.solve);
                u = f.u;
                nr.converged = true;
                nr.residual_norm = f.residual_norm;
                nr.iters = f.newton_iters;
            }
            SolutionField field;
            field.mesh = run.mesh;
            field.u = u;
            field.cap = cap;
            field.residual_norm = nr.residual_norm;
            field.newton_iters = nr.iters;
            if (run.normalized) {
                double ref = field.value_at(run.reference);
                for (double& val : field.u) val -= ref;
            }
            run.fields.push_back(std::move(field));
            have_warm_start = true;
        } catch (const SolverError& err) {
            std::ostringstream os;
            os << "cap " << cap << ": " << err.what();
            run.failures.push_back(os.str());
            break;
        }
    }
    return run;
}

DivergenceReport classify_convergence(const MetricModel& m, const JsRun& run,
                                      double growth_threshold) {
    if (run.fields.size() < 3) {
        throw ContractError("classify_convergence: needs at least 3 cap levels");
    }
    const TriMesh& mesh = *run.mesh;
    const SolutionField& last = run.fields.back();
    const SolutionField& prev = run.fields[run.fields.size() - 2];
    double dcap = last.cap - prev.cap;

    DivergenceReport rep;
    rep.growth_threshold = growth_threshold;
    rep.mesh_h = mesh.h_target;
    rep.cap_last = last.cap;
    rep.cap_prev = prev.cap;
    rep.mesh = run.mesh;
    rep.vertex_divergent.assign(mesh.vertices.size(), 0);

    std::vector<double> rate(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        rate[v] = std::abs(last.u[v] - prev.u[v]) / dcap;
        if (rate[v] >= growth_threshold && !mesh.is_boundary_vertex(static_cast<int>(v))) {
            rep.vertex_divergent[v] = 1;
            ++rep.divergent_count;
        }
    }
    if (rep.divergent_count == 0) return rep;

    // March the rate level set across triangles touching the divergence set.
    auto edge_key = [](int a, int b) {
        return std::make_pair(std::min(a, b), std::max(a, b));
    };
    struct Segment {
        std::pair<int, int> e0, e1;
        Point p0, p1;
    };
    std::vector<Segment> segments;
    auto crossing = [&](int a, int b) {
        double ra = rate[a] - growth_threshold;
        double rb = rate[b] - growth_threshold;
        double w = ra / (ra - rb);
        return mesh.vertices[a] + (mesh.vertices[b] - mesh.vertices[a]) * w;
    };
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        bool touches_divergent = false;
        for (int k = 0; k < 3; ++k) {
            if (rep.vertex_divergent[tr[k]]) touches_divergent = true;
        }
        if (!touches_divergent) continue;
        std::vector<std::pair<std::pair<int, int>, Point>> cuts;
        for (int k = 0; k < 3; ++k) {
            int a = tr[k], b = tr[(k + 1) % 3];
            double ra = rate[a] - growth_threshold;
            double rb = rate[b] - growth_threshold;
            if ((ra < 0.0) != (rb < 0.0)) {
                cuts.push_back({edge_key(a, b), crossing(a, b)});
            }
        }
        if (cuts.size() == 2) {
            segments.push_back({cuts[0].first, cuts[1].first, cuts[0].second, cuts[1].second});
        }
    }

    // Chain segments that share mesh edges into polylines: start from open
    // ends (mesh edges crossed by exactly one segment), then collect any
    // remaining closed loops.
    std::map<std::pair<int, int>, std::vector<std::size_t>> by_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_edge[segments[s].e0].push_back(s);
        by_edge[segments[s].e1].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    auto walk = [&](std::size_t start, std::pair<int, int> entry_edge, bool closed) {
        InterfacePolyline poly;
        poly.closed = closed;
        std::size_t s = start;
        std::pair<int, int> cur = entry_edge;
        poly.points.push_back(segments[s].e0 == cur ? segments[s].p0 : segments[s].p1);
        while (true) {
            used[s] = true;
            bool entered_e0 = segments[s].e0 == cur;
            std::pair<int, int> exit_edge = entered_e0 ? segments[s].e1 : segments[s].e0;
            poly.points.push_back(entered_e0 ? segments[s].p1 : segments[s].p0);
            std::size_t next = s;
            for (std::size_t c : by_edge[exit_edge]) {
                if (!used[c]) {
                    next = c;
                    break;
                }
            }
            if (next == s) break;
            cur = exit_edge;
            s = next;
        }
        rep.interfaces.push_back(std::move(poly));
    };
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        if (by_edge[segments[s].e0].size() == 1) {
            walk(s, segments[s].e0, false);
        } else if (by_edge[segments[s].e1].size() == 1) {
            walk(s, segments[s].e1, false);
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) walk(s, segments[s].e0, true);
    }

    // Smooth and measure each polyline.
    for (InterfacePolyline& poly : rep.interfaces) {
        for (int pass = 0; pass < 3; ++pass) {
            std::vector<Point> sm = poly.points;
            for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
                sm[i] = (poly.points[i - 1] + poly.points[i] * 2.0 + poly.points[i + 1]) / 4.0;
            }
            poly.points = std::move(sm);
        }
        if (poly.points.size() >= 3) {
            std::vector<Point> clean;
            for (const Point& p : poly.points) {
                if (clean.empty() || distance(clean.back(), p) > 1e-14) clean.push_back(p);
            }
            if (clean.size() >= 3) {
                ParamCurve c = ParamCurve::from_points(clean);
                poly.max_abs_kf = max_abs_f_curvature(m, c);
            }
        }
        // Endpoint association with domain vertices (via corner marks).
        if (!poly.closed && !poly.points.empty()) {
            for (int side = 0; side < 2; ++side) {
                const Point& p = side == 0 ? poly.points.front() : poly.points.back();
                for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
                    if (!mesh.is_corner(static_cast<int>(v))) continue;
                    double dist = distance(p, mesh.vertices[v]);
                    if (dist < poly.end_distance[side]) {
                        poly.end_distance[side] = dist;
                        poly.end_domain_vertex[side] =
                            mesh.corner_domain_vertex(static_cast<int>(v));
                    }
                }
            }
        }
    }
    return rep;
}

ComparisonReport comparison_check(const SolutionField& u1, const SolutionField& u2,
                                  double tol_factor) {
    if (u1.mesh != u2.mesh) throw ContractError("comparison_check: fields on different meshes");
    const TriMesh& mesh = *u1.mesh;
    double amplitude = 1.0;
    for (std::size_t v = 0; v < u1.u.size(); ++v) {
        amplitude = std::max({amplitude, std::abs(u1.u[v]), std::abs(u2.u[v])});
    }
    for (std::size_t v = 0; v < u1.u.size(); ++v) {
        if (mesh.is_boundary_vertex(static_cast<int>(v)) &&
            u1.u[v] > u2.u[v] + 1e-12 * amplitude) {
            throw ContractError("comparison_check: boundary values must satisfy u1 <= u2");
        }
    }
    ComparisonReport rep;
    rep.tol_used = tol_factor * amplitude;
    rep.ok = true;
    for (std::size_t v = 0; v < u1.u.size(); ++v) {
        double excess = u1.u[v] - u2.u[v] - rep.tol_used;
        if (excess > rep.worst_violation) {
            rep.worst_violation = excess;
            rep.worst_vertex = static_cast<int>(v);
            rep.ok = false;
        }
    }
    return rep;
}

} // namespace jsg
