#pragma once

#include <functional>
#include <vector>

#include "chordarc/core.hpp"

namespace chordarc::quad {

// Adaptive Gauss–Kronrod (15-point) on [a,b]; relative tolerance rel_tol.
double gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double* error = nullptr);
cplx gauss_kronrod_complex(const std::function<cplx(double)>& f, double a, double b,
                           double rel_tol = 1e-10);

// Tanh–sinh rule for integrands with integrable endpoint singularities.
// f receives (x, distance to the nearer endpoint side) so logarithmic and
// power singularities can be evaluated without cancellation:
// f(x, da, db) with da = x - a, db = b - x.
double tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                 double rel_tol = 1e-12);

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss–Hermite nodes/weights for the weight e^{-x^2}.
Rule gauss_hermite(int n);

// Gauss–Legendre nodes/weights on [-1,1].
Rule gauss_legendre(int n);

}  // namespace chordarc::quad
