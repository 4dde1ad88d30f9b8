#include <algorithm>
#include <cmath>

#include "chordarc/extension.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {
ExtensionGrid small_grid() { return ExtensionGrid::make(-2.0, 2.0, 81, 1e-2, 10.0, 20); }
}  // namespace

TEST_CASE("standard grid shape") {
    ExtensionGrid g = ExtensionGrid::standard();
    CHECK(g.xs.size() == 321);
    CHECK(g.ys.size() == 121);
    CHECK(g.xs.front() == -4.0);
    CHECK(std::abs(g.ys.back() - 1e3) < 1e-9);
}

TEST_CASE("affine maps extend conformally") {
    ExtensionGrid g = small_grid();
    HeatExtensionField id = ba_heat_extension(MonotoneMap(PiecewiseLinearMap()), g);
    for (std::size_t j = 0; j < g.ys.size(); j += 10)
        for (std::size_t i = 0; i < g.xs.size(); i += 10) CHECK(std::abs(id.U[id.index(i, j)] - g.xs[i]) < 1e-13);
    BeltramiField mu = beltrami(id);
    CHECK(mu.analytic);
    CHECK(mu.sup_abs() < 1e-14);
    PiecewiseLinearMap aff = PiecewiseLinearMap::from_slopes({}, {2.5}, 0.0, 1.0);
    CHECK(beltrami(ba_heat_extension(MonotoneMap(aff), g)).sup_abs() < 1e-14);
    CHECK(carleson_box_norm(mu, IntervalFamily::dyadic(-1, 1, 3)).value < 1e-26);
}

namespace {
// max |mu_analytic - mu_stencil| over full-order interior nodes with y >= ymin
double stencil_gap(std::size_t nx, double ymin) {
    ExtensionGrid g = ExtensionGrid::make(-2.0, 2.0, nx, 1e-2, 10.0, 20);
    HeatExtensionField F = ba_heat_extension(MonotoneMap(family_fk(2.0)), g);
    BeltramiField a = beltrami(F), s = beltrami(F, DerivativeMethod::Stencil);
    REQUIRE(a.analytic);
    REQUIRE_FALSE(s.analytic);
    double err = 0;
    for (std::size_t j = 4; j + 4 < g.ys.size(); ++j)
        for (std::size_t i = 4; i + 4 < nx; ++i) {
            std::size_t k = F.index(i, j);
            if (s.low_order[k] || g.ys[j] < ymin) continue;
            err = std::max(err, std::abs(a.mu[k] - s.mu[k]));
        }
    return err;
}
}  // namespace

TEST_CASE("stencil derivatives agree with analytic ones away from the edges") {
    // x spacing h = 0.025: four spacings above the axis the kernels are resolved
    CHECK(stencil_gap(161, 0.1) < 1e-3);
    // fourth order in x: halving h near the axis gains close to 16
    double coarse = stencil_gap(81, 0.05), fine = stencil_gap(161, 0.05);
    INFO(coarse << " " << fine);
    CHECK(coarse / fine > 6.0);
}

TEST_CASE("parallel extension equals serial") {
    ExtensionGrid g = small_grid();
    MonotoneMap f = family_fk(1.0);
    HeatExtensionField p = ba_heat_extension(f, g), q = ba_heat_extension_serial(f, g);
    CHECK(p.U == q.U);
    CHECK(p.V == q.V);
    CHECK(p.Ux == q.Ux);
}

TEST_CASE("integral form of the identity") {
    ExtensionGrid g = ExtensionGrid::make(-1.0, 1.0, 21, 1e-2, 1.0, 5);
    IntegralMap f(SampledFunction({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}));
    HeatExtensionField F = ba_heat_extension(MonotoneMap(f), g);
    HeatExtensionField I = ba_heat_extension(MonotoneMap(PiecewiseLinearMap()), g);
    for (std::size_t k = 0; k < F.U.size(); ++k) {
        CHECK(std::abs(F.U[k] - I.U[k]) < 1e-10);
        CHECK(std::abs(F.V[k] - I.V[k]) < 1e-10);
    }
}

TEST_CASE("dilatation of f_k shrinks with k") {
    ExtensionGrid g = small_grid();
    double prev = 1.0;
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
        double m = beltrami(ba_heat_extension(MonotoneMap(family_fk(k)), g)).sup_abs();
        CHECK(m < prev);
        CHECK(m > 0.0);
        prev = m;
    }
}
