#include "chordarc/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace chordarc::quad {

namespace {
constexpr unsigned kMaxDepth = 30;
}

double gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double* error) {
    if (a == b) return 0.0;
    double err = 0.0;
    // Boost's termination test is not scale-invariant: on short intervals it
    // refines to the depth limit, so integrate over [0,1] and rescale.
    double h = b - a;
    auto g = [&](double t) { return f(t < 1.0 ? a + h * t : b); };
    double r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, kMaxDepth,
                                                                             rel_tol, &err);
    if (error) *error = err * std::abs(h);
    return r * h;
}

cplx gauss_kronrod_complex(const std::function<cplx(double)>& f, double a, double b, double rel_tol) {
    double re = gauss_kronrod([&](double x) { return f(x).real(); }, a, b, rel_tol);
    double im = gauss_kronrod([&](double x) { return f(x).imag(); }, a, b, rel_tol);
    return {re, im};
}

double tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                 double rel_tol) {
    if (a == b) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double mid = 0.5 * (a + b);
    // Boost passes xc = a - x on the left half and b - x on the right half.
    auto g = [&](double x, double xc) {
        double da = x <= mid ? -xc : x - a;
        double db = x <= mid ? b - x : xc;
        return f(x, std::abs(da), std::abs(db));
    };
    return integrator.integrate(g, a, b, rel_tol);
}

Rule gauss_hermite(int n) {
    // Newton iteration on the orthonormal Hermite recurrence.
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const double pim4 = 1.0 / std::pow(kPi, 0.25);
    int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.nodes[1];
        else
            z = 2.0 * z - r.nodes[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = 2.0 / (pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

}  // namespace chordarc::quad
