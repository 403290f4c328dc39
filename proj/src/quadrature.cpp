#include "jsgraph/quadrature.hpp"

#include <array>
#include <cmath>

#include "jsgraph/errors.hpp"

namespace jsg {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    std::array<double, 15> fv{};
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kKronrodNodes[i]);
        fv[14 - i] = f(mid + half * kKronrodNodes[i]);
    }
    fv[7] = f(mid);

    double kron = 0.0;
    for (int i = 0; i < 8; ++i) {
        kron += kKronrodWeights[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
    }
    // Gauss points are the odd Kronrod nodes.
    double gauss = 0.0;
    for (int i = 0; i < 4; ++i) {
        int j = 2 * i + 1;
        gauss += kGaussWeights[i] * (j == 7 ? fv[7] : fv[j] + fv[14 - j]);
    }

    GkResult r;
    r.value = kron * half;
    double diff = std::abs(kron - gauss) * std::abs(half);
    r.error = std::pow(200.0 * diff, 1.5);
    if (r.error > diff) r.error = diff;
    return r;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
    GkResult r = gk15(f, a, b);
    if (r.error <= tol || std::abs(b - a) < 1e-15 * (std::abs(a) + std::abs(b) + 1.0)) {
        return r.value;
    }
    if (depth <= 0) {
        throw IntegrationError("adaptive quadrature: subdivision depth exhausted");
    }
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth - 1) + adapt(f, mid, b, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    GkResult whole = gk15(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
    if (whole.error <= tol) return whole.value;
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, max_depth) + adapt(f, mid, b, 0.5 * tol, max_depth);
}

} // namespace jsg
