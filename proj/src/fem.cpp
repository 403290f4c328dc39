#include "jsgraph/fem.hpp"

#include <cmath>

namespace jsg {

namespace {

struct ElementResidual {
    std::array<double, 3> r;
};

inline Vec2 element_gradient(const FemWorkspace& ws, const TriMesh& mesh,
                             const std::vector<double>& u, std::size_t t) {
    const auto& tr = mesh.triangles[t];
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) g += ws.hat_grad[t][k] * u[tr[k]];
    return g;
}

inline double element_w(const FemWorkspace& ws, std::size_t t, const Vec2& g) {
    return std::sqrt(1.0 + ws.rho2[t] * g.norm2());
}

inline ElementResidual element_residual(const FemWorkspace& ws, const TriMesh& mesh,
                                        const std::vector<double>& u, std::size_t t) {
    Vec2 g = element_gradient(ws, mesh, u, t);
    double scale = ws.omega[t] * ws.area[t] / element_w(ws, t, g);
    ElementResidual er;
    for (int k = 0; k < 3; ++k) er.r[k] = scale * dot(g, ws.hat_grad[t][k]);
    return er;
}

inline double element_energy(const FemWorkspace& ws, const TriMesh& mesh,
                             const std::vector<double>& u, std::size_t t) {
    Vec2 g = element_gradient(ws, mesh, u, t);
    return ws.area[t] * ws.eweight[t] * element_w(ws, t, g);
}

// 3x3 element Jacobian: omega A [ <grad_i, grad_j>/W - rho^2 <g,grad_i><g,grad_j>/W^3 ].
inline std::array<double, 9> element_jacobian(const FemWorkspace& ws, const TriMesh& mesh,
                                              const std::vector<double>& u, std::size_t t) {
    Vec2 g = element_gradient(ws, mesh, u, t);
    double w = element_w(ws, t, g);
    double c0 = ws.omega[t] * ws.area[t] / w;
    double c1 = ws.omega[t] * ws.area[t] * ws.rho2[t] / (w * w * w);
    std::array<double, 3> gg;
    for (int k = 0; k < 3; ++k) gg[k] = dot(g, ws.hat_grad[t][k]);
    std::array<double, 9> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[3 * i + j] = c0 * dot(ws.hat_grad[t][i], ws.hat_grad[t][j]) - c1 * gg[i] * gg[j];
        }
    }
    return out;
}

void scatter_residual(const TriMesh& mesh, const std::vector<ElementResidual>& er,
                      const std::vector<double>* load, std::vector<double>& r_out) {
    r_out.assign(mesh.vertices.size(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) r_out[tr[k]] += er[t].r[k];
    }
    if (load) {
        for (std::size_t v = 0; v < r_out.size(); ++v) r_out[v] -= (*load)[v];
    }
}

void scatter_jacobian(const TriMesh& mesh, const std::vector<std::array<double, 9>>& ej,
                      const std::vector<int>& dof, std::vector<Eigen::Triplet<double>>& out) {
    out.clear();
    out.reserve(9 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            int di = dof[tr[i]];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                int dj = dof[tr[j]];
                if (dj < 0) continue;
                out.emplace_back(di, dj, ej[t][3 * i + j]);
            }
        }
    }
}

} // namespace

FemWorkspace FemWorkspace::build(const MetricModel& m, const TriMesh& mesh) {
    m.require_unit_phi("fem assembly");
    FemWorkspace ws;
    std::size_t n = mesh.triangles.size();
    ws.area.resize(n);
    ws.omega.resize(n);
    ws.rho2.resize(n);
    ws.eweight.resize(n);
    ws.hat_grad.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto& tr = mesh.triangles[t];
        const Point& p0 = mesh.vertices[tr[0]];
        const Point& p1 = mesh.vertices[tr[1]];
        const Point& p2 = mesh.vertices[tr[2]];
        double area2 = orient2d(p0, p1, p2);
        ws.area[t] = 0.5 * area2;
        Point c = (p0 + p1 + p2) / 3.0;
        double rho = m.rho(c.x);
        ws.rho2[t] = rho * rho;
        ws.eweight[t] = std::exp(m.c() * c.t);
        ws.omega[t] = ws.rho2[t] * ws.eweight[t];
        ws.hat_grad[t][0] = (p2 - p1).rot90() / area2;
        ws.hat_grad[t][1] = (p0 - p2).rot90() / area2;
        ws.hat_grad[t][2] = (p1 - p0).rot90() / area2;
    }
    return ws;
}

void assemble_residual_serial(const FemWorkspace& ws, const TriMesh& mesh,
                              const std::vector<double>& u, const std::vector<double>* load,
                              std::vector<double>& r_out) {
    std::vector<ElementResidual> er(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        er[t] = element_residual(ws, mesh, u, t);
    }
    scatter_residual(mesh, er, load, r_out);
}

void assemble_residual_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                                const std::vector<double>& u, const std::vector<double>* load,
                                std::vector<double>& r_out) {
    std::vector<ElementResidual> er(mesh.triangles.size());
    const std::size_t n = mesh.triangles.size();
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < n; ++t) {
        er[t] = element_residual(ws, mesh, u, t);
    }
    scatter_residual(mesh, er, load, r_out);
}

double energy_serial(const FemWorkspace& ws, const TriMesh& mesh, const std::vector<double>& u,
                     const std::vector<double>* load) {
    double e = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        e += element_energy(ws, mesh, u, t);
    }
    if (load) {
        for (std::size_t v = 0; v < u.size(); ++v) e -= (*load)[v] * u[v];
    }
    return e;
}

double energy_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                       const std::vector<double>& u, const std::vector<double>* load) {
    // Per-element energies are reduced in index order to stay reproducible.
    std::vector<double> ee(mesh.triangles.size());
    const std::size_t n = mesh.triangles.size();
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < n; ++t) {
        ee[t] = element_energy(ws, mesh, u, t);
    }
    double e = 0.0;
    for (double v : ee) e += v;
    if (load) {
        for (std::size_t v = 0; v < u.size(); ++v) e -= (*load)[v] * u[v];
    }
    return e;
}

void assemble_jacobian_serial(const FemWorkspace& ws, const TriMesh& mesh,
                              const std::vector<double>& u, const std::vector<int>& dof,
                              std::vector<Eigen::Triplet<double>>& out) {
    std::vector<std::array<double, 9>> ej(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        ej[t] = element_jacobian(ws, mesh, u, t);
    }
    scatter_jacobian(mesh, ej, dof, out);
}

void assemble_jacobian_parallel(const FemWorkspace& ws, const TriMesh& mesh,
                                const std::vector<double>& u, const std::vector<int>& dof,
                                std::vector<Eigen::Triplet<double>>& out) {
    std::vector<std::array<double, 9>> ej(mesh.triangles.size());
    const std::size_t n = mesh.triangles.size();
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < n; ++t) {
        ej[t] = element_jacobian(ws, mesh, u, t);
    }
    scatter_jacobian(mesh, ej, dof, out);
}

std::vector<double> assemble_load(const TriMesh& mesh,
                                  const std::function<double(Point)>& source) {
    std::vector<double> load(mesh.vertices.size(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        double w = mesh.triangle_area(static_cast<int>(t)) *
                   source(mesh.triangle_centroid(static_cast<int>(t))) / 3.0;
        for (int k = 0; k < 3; ++k) load[tr[k]] += w;
    }
    return load;
}

std::vector<Vec2> triangle_gradients(const TriMesh& mesh, const std::vector<double>& u) {
    std::vector<Vec2> g(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Point& p0 = mesh.vertices[tr[0]];
        const Point& p1 = mesh.vertices[tr[1]];
        const Point& p2 = mesh.vertices[tr[2]];
        double area2 = orient2d(p0, p1, p2);
        g[t] = (p2 - p1).rot90() * (u[tr[0]] / area2) + (p0 - p2).rot90() * (u[tr[1]] / area2) +
               (p1 - p0).rot90() * (u[tr[2]] / area2);
    }
    return g;
}

std::vector<Vec2> recover_vertex_gradients(const TriMesh& mesh, const std::vector<double>& u) {
    std::vector<Vec2> tg = triangle_gradients(mesh, u);
    std::vector<Vec2> vg(mesh.vertices.size(), Vec2{0.0, 0.0});
    std::vector<double> wsum(mesh.vertices.size(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        double a = mesh.triangle_area(static_cast<int>(t));
        for (int k = 0; k < 3; ++k) {
            int v = mesh.triangles[t][k];
            vg[v] += tg[t] * a;
            wsum[v] += a;
        }
    }
    for (std::size_t v = 0; v < vg.size(); ++v) {
        if (wsum[v] > 0.0) vg[v] = vg[v] / wsum[v];
    }
    return vg;
}

} // namespace jsg
