#include <doctest.h>

#include <cmath>
#include <random>

#include "jsgraph/curve.hpp"
#include "jsgraph/errors.hpp"
#include "jsgraph/metric.hpp"

using namespace jsg;

namespace {

ParamCurve circle(double radius, int n, bool ccw = true) {
    std::vector<Point> pts;
    for (int i = 0; i <= n; ++i) {
        double a = 2.0 * M_PI * i / n * (ccw ? 1.0 : -1.0);
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return ParamCurve::from_points(std::move(pts));
}

} // namespace

TEST_CASE("ParamCurve invariants") {
    CHECK_THROWS_AS(ParamCurve::from_points({{0, 0}}), ContractError);
    CHECK_THROWS_AS(ParamCurve::from_points({{0, 0}, {0, 0}}), ContractError);
    CHECK_THROWS_AS(ParamCurve::from_points({{0, 0}, {1, 0}}, false, 0.5), ContractError);
    CHECK_NOTHROW(ParamCurve::from_points({{0, 0}, {0.4, 0}, {0.8, 0}}, false, 0.5));
}

TEST_CASE("f_length of a vertical segment matches the antiderivative") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    // e^t integrated over t in [0,1]
    double expected = std::exp(1.0) - 1.0;
    double got = f_length(m, vertical_segment(0.0, 0.0, 1.0));
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));

    // Dense polyline of the same segment: quadrature along straight pieces.
    ParamCurve poly = vertical_segment(0.0, 0.0, 1.0).sample(1e-3);
    CHECK(f_length(m, poly) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("f_length of a reaper arc matches the closed form") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    double r = 0.3;
    // e^a (tan r - tan s) with a = 0, s = -r
    double expected = 2.0 * std::tan(r);
    AnalyticCurve arc = grim_reaper_arc(1.0, 0.0, -r, r);
    CHECK(f_length(m, arc) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tilted reaper and tau-line lengths in h2xr") {
    // For curves written in the rotated frame the weight depends only on the
    // tau coordinate, which gives the same closed forms up to the frame norm.
    double c = 1.0;
    double tau2 = 1.0 + c * c;
    double tau = std::sqrt(tau2);
    MetricModel m = MetricModel::hyperbolic_h2xr(c);

    double r = 0.3, a = 0.1;
    double expected = std::exp(tau2 * a) * (std::tan(tau2 * r) - std::tan(-tau2 * r)) / tau;
    CHECK(f_length(m, tilted_reaper_arc(c, a, -r, r)) ==
          doctest::Approx(expected).epsilon(1e-10));

    double b = 0.4, xi = 0.2;
    double expected_line = (std::exp(tau2 * b) - std::exp(tau2 * a)) / tau /
                           std::cos(tau2 * xi);
    double h0 = a + tilted_reaper_height(c, 0.0, xi);
    double h1 = b + tilted_reaper_height(c, 0.0, xi);
    CHECK(f_length(m, tilted_line_segment(c, xi, h0, h1)) ==
          doctest::Approx(expected_line).epsilon(1e-10));
}

TEST_CASE("flat model gives flat lengths") {
    MetricModel m = MetricModel::euclidean_r3(0.0);
    ParamCurve seg = ParamCurve::from_points({{0.2, -0.1}, {1.4, 0.7}});
    CHECK(f_length(m, seg) == doctest::Approx(seg.flat_length()).epsilon(1e-13));
}

TEST_CASE("f_length additivity and reversal invariance") {
    MetricModel m = MetricModel::hyperbolic_h2xr(1.0);
    ParamCurve arc = grim_reaper_arc(1.0, 0.0, -0.4, 0.4).sample(0.01);
    std::size_t mid = arc.size() / 2;
    ParamCurve left = ParamCurve::from_points(
        std::vector<Point>(arc.pts.begin(), arc.pts.begin() + mid + 1));
    ParamCurve right = ParamCurve::from_points(
        std::vector<Point>(arc.pts.begin() + mid, arc.pts.end()));

    double whole = f_length(m, arc);
    double parts = f_length(m, left) + f_length(m, right);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    CHECK(f_length(m, arc.reversed()) == doctest::Approx(whole).epsilon(1e-12));
}

TEST_CASE("f_length rejects curves leaving the chart") {
    Rect chart;
    chart.x_min = -1.0;
    chart.x_max = 1.0;
    chart.t_min = -1.0;
    chart.t_max = 1.0;
    MetricModel m = MetricModel::euclidean_r3(1.0, chart);
    ParamCurve out = ParamCurve::from_points({{0.0, 0.0}, {2.0, 0.0}});
    CHECK_THROWS_AS(f_length(m, out), ChartError);
}

TEST_CASE("f_curvature vanishes on vertical lines and reapers in r3") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    ParamCurve vert = vertical_segment(0.0, -1.0, 1.0).sample(0.01);
    for (std::size_t i = 1; i + 1 < vert.size(); ++i) {
        CHECK(std::abs(f_curvature(m, vert, i)) < 1e-12);
    }
    ParamCurve reaper = grim_reaper_arc(1.0, 0.0, -1.0, 1.0).sample(0.005);
    CHECK(max_abs_f_curvature(m, reaper) < 2e-5);
}

TEST_CASE("f_curvature of a circle in the flat model") {
    MetricModel m = MetricModel::euclidean_r3(0.0);
    double radius = 0.7;
    ParamCurve ccw = circle(radius, 720);
    double k = f_curvature(m, ccw, ccw.size() / 2);
    CHECK(k == doctest::Approx(1.0 / radius).epsilon(1e-4));

    ParamCurve cw = circle(radius, 720, false);
    k = f_curvature(m, cw, cw.size() / 2);
    CHECK(k == doctest::Approx(-1.0 / radius).epsilon(1e-4));
}

TEST_CASE("f_curvature flips sign under reversal") {
    MetricModel m = MetricModel::hyperbolic_h2xr(1.0);
    ParamCurve arc = circle(0.5, 250);
    ParamCurve rev = arc.reversed();
    std::size_t i = 100;
    std::size_t j = arc.size() - 1 - i;
    CHECK(f_curvature(m, arc, i) == doctest::Approx(-f_curvature(m, rev, j)).epsilon(1e-10));
}

TEST_CASE("f_curvature rejects endpoint indices") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    ParamCurve seg = vertical_segment(0.0, 0.0, 1.0).sample(0.1);
    CHECK_THROWS_AS(f_curvature(m, seg, 0), ContractError);
    CHECK_THROWS_AS(f_curvature(m, seg, seg.size() - 1), ContractError);
}

TEST_CASE("collinear samples give zero flat curvature contribution") {
    MetricModel m = MetricModel::euclidean_r3(0.0);
    ParamCurve line = ParamCurve::from_points({{0, 0}, {0.5, 0.5}, {1.0, 1.0}});
    CHECK(f_curvature(m, line, 1) == 0.0);
}

TEST_CASE("horizontal lines are not weighted geodesics in r3") {
    MetricModel m = MetricModel::euclidean_r3(1.0);
    ParamCurve horiz = ParamCurve::from_points({{-0.5, 0.3}, {0.0, 0.3}, {0.5, 0.3}});
    // k_flat = 0 but <drift, N> = 1, so k_f = -e^{-t/2}
    CHECK(f_curvature(m, horiz, 1) ==
          doctest::Approx(-std::exp(-0.15)).epsilon(1e-10));
}

TEST_CASE("tilted frame lines are weighted geodesics in h2xr") {
    MetricModel m = MetricModel::hyperbolic_h2xr(1.0);
    ParamCurve line = tilted_line_segment(1.0, 0.1, -0.3, 0.4).sample(0.02);
    CHECK(max_abs_f_curvature(m, line) < 1e-12);

    ParamCurve reaper = tilted_reaper_arc(1.0, 0.0, -0.3, 0.3).sample(0.004);
    CHECK(max_abs_f_curvature(m, reaper) < 2e-5);
}
