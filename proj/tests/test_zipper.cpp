#include <cmath>

#include "chordarc/welding.hpp"
#include "chordarc/zipper.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {
// Negative real axis then positive imaginary axis; left domain is the second
// quadrant, mapped onto the upper half-plane by -z^2.
ZipperMap right_angle(int N, bool parallel = true) {
    WeldSampling ws;
    ws.N = N;
    std::vector<double> s = ws.nodes();
    std::vector<cplx> pts;
    std::size_t ref = 0, unit = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        pts.push_back(s[j] < 0 ? cplx(s[j], 0) : cplx(0, s[j]));
        if (s[j] == 0.0) ref = j;
        if (s[j] == 1.0) unit = j;
    }
    return ZipperMap::fit(pts, ref, unit, parallel);
}
}  // namespace

TEST_CASE("right-angle corner: map and inverse against -z^2") {
    ZipperMap z = right_angle(2048);
    for (cplx p : {cplx(-0.5, 0.7), cplx(-2.0, 0.3), cplx(-0.1, 3.0), cplx(-1, 1)}) {
        INFO("p = " << p);
        cplx ex = -p * p;
        CHECK(std::abs(z.evaluate_map(p) - ex) < 1e-4 * std::max(1.0, std::abs(ex)));
        CHECK(std::abs(z.evaluate_inverse(ex) - p) < 1e-4 * std::max(1.0, std::abs(p)));
    }
    // boundary images F(s) = s^2 on the imaginary side, -s^2 on the real side
    const auto& F = z.boundary_images();
    const auto& P = z.points();
    for (std::size_t j = 0; j < F.size(); ++j) {
        double s = P[j].real() < 0 ? P[j].real() : P[j].imag();
        double ex = s < 0 ? -s * s : s * s;
        if (std::abs(s) < 1e-2 || std::abs(s) > 10) continue;
        CHECK(std::abs(F[j] - ex) < 1e-4 * std::abs(ex));
    }
}

TEST_CASE("boundary images are increasing and normalized") {
    ZipperMap z = right_angle(512);
    const auto& F = z.boundary_images();
    for (std::size_t j = 0; j + 1 < F.size(); ++j) CHECK(F[j] < F[j + 1]);
}

TEST_CASE("straight line is fitted to rounding") {
    std::vector<cplx> pts;
    std::size_t ref = 0, unit = 0;
    for (int j = -100; j <= 100; ++j) {
        double s = std::sinh(j / 10.0);
        if (j == 0) ref = pts.size();
        pts.push_back(cplx(s, 0) * std::exp(cplx(0, 0.4)));
    }
    unit = ref + 10;  // s = sinh(1)
    REQUIRE(unit > ref);
    ZipperMap z = ZipperMap::fit(pts, ref, unit);
    CHECK(z.fit_residual() < 1e-6);
}

TEST_CASE("self-intersecting samples are rejected") {
    std::vector<cplx> loop{{-2, 0}, {0, 0}, {1, 1}, {0, 1}, {0.5, -1}, {3, -1}};
    CHECK_THROWS_AS(require_simple_polyline(loop), PreconditionError);
    CHECK_THROWS_AS(ZipperMap::fit(loop, 1, 2), PreconditionError);
    CHECK_NOTHROW(require_simple_polyline({{-2, 0}, {0, 0}, {1, 1}, {3, 1}}));
}

TEST_CASE("parallel fit equals serial") {
    ZipperMap a = right_angle(256, true), b = right_angle(256, false);
    CHECK(a.boundary_images() == b.boundary_images());
}
