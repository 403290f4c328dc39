#include <doctest.h>

#include <cmath>
#include <random>

#include "jsgraph/errors.hpp"
#include "jsgraph/fem.hpp"
#include "jsgraph/solver.hpp"
#include "support/oracles.hpp"

using namespace jsg;

namespace {

const double kLog2 = std::log(2.0);

std::shared_ptr<const TriMesh> square_mesh(double h) {
    AdmissibleDomain d = rectangle_domain(0.0, 1.0, 0.0, 1.0, [](Point) { return 0.0; });
    return std::make_shared<const TriMesh>(triangulate(d, h));
}

std::vector<double> constant_boundary(const TriMesh& mesh, double k) {
    std::vector<double> bv(mesh.vertices.size(), 0.0);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (mesh.is_boundary_vertex(static_cast<int>(v))) bv[v] = k;
    }
    return bv;
}

} // namespace

TEST_CASE("constant boundary data solves to the constant immediately") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    auto mesh = square_mesh(0.15);
    SolutionField f = solve_dirichlet(m, mesh, constant_boundary(*mesh, 5.0));
    for (double u : f.u) CHECK(u == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(f.residual_norm <= 1e-10);
    // Constants are exact solutions: the first Newton residual already
    // vanishes, so no correction happens.
    CHECK(f.newton_iters == 0);
}

TEST_CASE("solve rejects bad inputs") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    auto mesh = square_mesh(0.2);
    std::vector<double> bv(3, 0.0);
    CHECK_THROWS_AS(solve_dirichlet(m, mesh, bv), ContractError);
    std::vector<double> nan_bv = constant_boundary(*mesh, std::nan(""));
    CHECK_THROWS_AS(solve_dirichlet(m, mesh, nan_bv), ContractError);
}

TEST_CASE("assembled Jacobian matches finite differences of the residual") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    auto mesh = square_mesh(0.35);
    FemWorkspace ws = FemWorkspace::build(m, *mesh);

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<double> u(mesh->vertices.size());
    for (double& x : u) x = dist(rng);

    std::vector<int> dof(mesh->vertices.size(), -1);
    std::vector<int> free_list;
    for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
        if (!mesh->is_boundary_vertex(static_cast<int>(v))) {
            dof[v] = static_cast<int>(free_list.size());
            free_list.push_back(static_cast<int>(v));
        }
    }
    std::vector<Eigen::Triplet<double>> trips;
    assemble_jacobian_serial(ws, *mesh, u, dof, trips);
    Eigen::SparseMatrix<double> J(free_list.size(), free_list.size());
    J.setFromTriplets(trips.begin(), trips.end());

    const double eps = 1e-6;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd w(free_list.size());
        for (int k = 0; k < w.size(); ++k) w[k] = dist(rng);
        std::vector<double> up = u, um = u;
        for (std::size_t k = 0; k < free_list.size(); ++k) {
            up[free_list[k]] += eps * w[k];
            um[free_list[k]] -= eps * w[k];
        }
        std::vector<double> rp, rm;
        assemble_residual_serial(ws, *mesh, up, nullptr, rp);
        assemble_residual_serial(ws, *mesh, um, nullptr, rm);
        Eigen::VectorXd fd(free_list.size());
        for (std::size_t k = 0; k < free_list.size(); ++k) {
            fd[k] = (rp[free_list[k]] - rm[free_list[k]]) / (2.0 * eps);
        }
        Eigen::VectorXd jw = J * w;
        CHECK((jw - fd).norm() <= 1e-5 * std::max(1.0, jw.norm()));
    }
}

TEST_CASE("parallel kernels match the serial reference") {
    MetricModel m = MetricModel::hyperbolic_h2xr(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, 0.4, 0.3, -0.3);
    auto mesh = std::make_shared<const TriMesh>(triangulate(d, 0.03));
    FemWorkspace ws = FemWorkspace::build(m, *mesh);

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(mesh->vertices.size());
    for (double& x : u) x = dist(rng);
    std::vector<double> load(mesh->vertices.size());
    for (double& x : load) x = dist(rng);

    std::vector<double> rs, rp;
    assemble_residual_serial(ws, *mesh, u, &load, rs);
    assemble_residual_parallel(ws, *mesh, u, &load, rp);
    REQUIRE(rs.size() == rp.size());
    for (std::size_t v = 0; v < rs.size(); ++v) {
        CHECK(rs[v] == doctest::Approx(rp[v]).epsilon(1e-14));
    }

    CHECK(energy_serial(ws, *mesh, u, &load) ==
          doctest::Approx(energy_parallel(ws, *mesh, u, &load)).epsilon(1e-14));

    std::vector<int> dof(mesh->vertices.size());
    int next = 0;
    for (std::size_t v = 0; v < dof.size(); ++v) {
        dof[v] = mesh->is_boundary_vertex(static_cast<int>(v)) ? -1 : next++;
    }
    std::vector<Eigen::Triplet<double>> ts, tp;
    assemble_jacobian_serial(ws, *mesh, u, dof, ts);
    assemble_jacobian_parallel(ws, *mesh, u, dof, tp);
    REQUIRE(ts.size() == tp.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        CHECK(ts[k].row() == tp[k].row());
        CHECK(ts[k].col() == tp[k].col());
        CHECK(ts[k].value() == doctest::Approx(tp[k].value()).epsilon(1e-14));
    }
}

TEST_CASE("manufactured solution converges at second order") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    auto ustar = [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.t); };
    std::function<double(Point)> source = [&](Point p) {
        return oracle::mms_source(m, ustar, p);
    };

    double err_coarse = 0.0, err_fine = 0.0;
    for (double h : {0.1, 0.05}) {
        auto mesh = square_mesh(h);
        std::vector<double> bv(mesh->vertices.size(), 0.0);
        for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
            if (mesh->is_boundary_vertex(static_cast<int>(v))) {
                bv[v] = ustar(mesh->vertices[v]);
            }
        }
        SolutionField f = solve_dirichlet(m, mesh, bv, &source);
        CHECK(f.residual_norm <= 1e-10);
        double err = oracle::l2_error(f, ustar);
        (h == 0.1 ? err_coarse : err_fine) = err;
    }
    double order = std::log2(err_coarse / err_fine);
    CHECK(order >= 1.5);
    CHECK(err_fine < err_coarse);
}

TEST_CASE("cap boundary values follow the kinds and corner rules") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    TriMesh mesh = triangulate(d, 0.1);
    std::vector<double> bv = cap_boundary_values(d, mesh, 8.0);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        int mark = mesh.vertex_mark[v];
        if (mark == -1) {
            CHECK(bv[v] == 0.0);
        } else if (mark >= 0) {
            if (d.edges[mark].kind == EdgeKind::A) CHECK(bv[v] == 8.0);
            if (d.edges[mark].kind == EdgeKind::C) CHECK(bv[v] == 0.0);
        } else {
            // A-C corners take the finite side's value.
            CHECK(bv[v] == 0.0);
        }
    }
    // Clamping kicks in once the data exceeds the cap.
    ScherkSpec spec;
    spec.data = {0.0, 100.0, 0.0, -100.0};
    AdmissibleDomain big = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3, spec);
    std::vector<double> bv2 = cap_boundary_values(big, mesh, 8.0);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        int mark = mesh.vertex_mark[v];
        if (mark == 1) CHECK(bv2[v] == 8.0);
        if (mark == 3) CHECK(bv2[v] == -8.0);
    }
}

TEST_CASE("all-C domain with zero data returns zero at every cap") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    ScherkSpec spec;
    spec.kinds = {EdgeKind::C, EdgeKind::C, EdgeKind::C, EdgeKind::C};
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3, spec);
    JsRun run = solve_jenkins_serrin(m, d, CapSchedule{{2.0, 4.0, 8.0}}, 0.1);
    REQUIRE(run.complete());
    for (const SolutionField& f : run.fields) {
        for (double u : f.u) CHECK(std::abs(u) <= 1e-10);
    }
}

TEST_CASE("convergent Scherk run: monotone caps with shrinking increments") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    JsRun run = solve_jenkins_serrin(m, d, CapSchedule::standard(), 0.08);
    REQUIRE(run.complete());
    REQUIRE(run.fields.size() == 4);

    Point c = d.centroid();
    double v2 = run.fields[0].value_at(c);
    double v4 = run.fields[1].value_at(c);
    double v8 = run.fields[2].value_at(c);
    double v16 = run.fields[3].value_at(c);
    CHECK(v4 > v2);
    CHECK(v8 > v4);
    CHECK(v16 > v8);
    // Increments shrink as the sequence converges.
    CHECK(v8 - v4 < v4 - v2);
    CHECK(v16 - v8 < v8 - v4);

    // Vertexwise monotone within 1e-8 * cap.
    for (std::size_t k = 0; k + 1 < run.fields.size(); ++k) {
        const SolutionField& lo = run.fields[k];
        const SolutionField& hi = run.fields[k + 1];
        double tol = 1e-8 * hi.cap;
        for (std::size_t v = 0; v < lo.u.size(); ++v) {
            CHECK(lo.u[v] <= hi.u[v] + tol);
        }
    }
}

TEST_CASE("divergent Scherk run keeps growing at the centroid") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.45, -0.45);
    JsRun run = solve_jenkins_serrin(m, d, CapSchedule::standard(), 0.08);
    REQUIRE(run.complete());
    Point c = d.centroid();
    double v8 = run.fields[2].value_at(c);
    double v16 = run.fields[3].value_at(c);
    CHECK(v16 - v8 >= 1.0);
}

TEST_CASE("classify_convergence requires 3 caps and separates the regimes") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    JsRun short_run = solve_jenkins_serrin(m, d, CapSchedule{{2.0, 4.0}}, 0.1);
    CHECK_THROWS_AS(classify_convergence(m, short_run), ContractError);

    JsRun run = solve_jenkins_serrin(m, d, CapSchedule::standard(), 0.08);
    DivergenceReport rep = classify_convergence(m, run);
    CHECK(rep.divergence_empty());
    CHECK(rep.interfaces.empty());

    AdmissibleDomain bad = scherk_quadrilateral(m, 0.0, kLog2, 0.45, -0.45);
    JsRun bad_run = solve_jenkins_serrin(m, bad, CapSchedule::standard(), 0.08);
    DivergenceReport bad_rep = classify_convergence(m, bad_run);
    CHECK(!bad_rep.divergence_empty());
    CHECK(!bad_rep.interfaces.empty());
}

TEST_CASE("comparison_check accepts cap monotonicity and rejects mesh mismatch") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    JsRun run = solve_jenkins_serrin(m, d, CapSchedule{{2.0, 4.0, 8.0}}, 0.1);
    REQUIRE(run.complete());
    ComparisonReport rep = comparison_check(run.fields[1], run.fields[2]);
    CHECK(rep.ok);

    auto other_mesh = square_mesh(0.2);
    SolutionField f = solve_dirichlet(m, other_mesh, constant_boundary(*other_mesh, 0.0));
    CHECK_THROWS_AS(comparison_check(run.fields[0], f), ContractError);
}

TEST_CASE("shifted boundary data dominates interiorwise") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    auto mesh = square_mesh(0.12);
    auto trace = [&](double shift) {
        std::vector<double> bv(mesh->vertices.size(), 0.0);
        for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
            if (mesh->is_boundary_vertex(static_cast<int>(v))) {
                bv[v] = std::sin(3.0 * mesh->vertices[v].x) + shift;
            }
        }
        return bv;
    };
    SolutionField u1 = solve_dirichlet(m, mesh, trace(0.0));
    SolutionField u2 = solve_dirichlet(m, mesh, trace(1.0));
    ComparisonReport rep = comparison_check(u1, u2);
    CHECK(rep.ok);
    for (std::size_t v = 0; v < u1.u.size(); ++v) CHECK(u2.u[v] >= u1.u[v] - 1e-9);
}

TEST_CASE("identical data from different initial guesses agrees (uniqueness)") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    auto mesh = std::make_shared<const TriMesh>(triangulate(d, 0.06));
    std::vector<double> bv = cap_boundary_values(d, *mesh, 4.0);

    SolutionField f1 = solve_dirichlet(m, mesh, bv);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> guess(mesh->vertices.size());
    for (double& g : guess) g = dist(rng);
    SolveOptions opts;
    opts.initial_guess = &guess;
    SolutionField f2 = solve_dirichlet(m, mesh, bv, nullptr, opts);

    double worst = 0.0;
    for (std::size_t v = 0; v < f1.u.size(); ++v) {
        worst = std::max(worst, std::abs(f1.u[v] - f2.u[v]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("mesh refinement stability of the centroid value") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, kLog2, 0.3, -0.3);
    Point c = d.centroid();
    double coarse = 0.0, fine = 0.0;
    for (double h : {0.08, 0.04}) {
        JsRun run = solve_jenkins_serrin(m, d, CapSchedule{{2.0, 4.0, 8.0}}, h);
        REQUIRE(run.complete());
        (h == 0.08 ? coarse : fine) = run.fields.back().value_at(c);
    }
    CHECK(std::abs(coarse - fine) <= 1e-2);
}

TEST_CASE("normalized case-b run pins the reference point to zero") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    double r_star = std::asin(std::tanh(0.5));
    ScherkSpec spec;
    spec.kinds = {EdgeKind::A, EdgeKind::B, EdgeKind::A, EdgeKind::B};
    AdmissibleDomain d = scherk_quadrilateral(m, 0.0, 1.0, r_star, -r_star, spec);
    JsRun run = solve_jenkins_serrin(m, d, CapSchedule{{2.0, 4.0, 8.0}}, 0.08);
    REQUIRE(run.complete());
    CHECK(run.normalized);
    for (const SolutionField& f : run.fields) {
        CHECK(std::abs(f.value_at(run.reference)) <= 1e-9);
    }
}
