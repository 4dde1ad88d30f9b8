#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "chordarc/experiments.hpp"
#include "chordarc/hilbert.hpp"
#include "doctest.h"

using namespace chordarc;

TEST_CASE("Cayley grid nodes") {
    CayleyGrid g = CayleyGrid::make(64);
    REQUIRE(g.x.size() == 64);
    for (std::size_t j = 0; j + 1 < g.x.size(); ++j) CHECK(g.x[j] < g.x[j + 1]);
    for (std::size_t j = 0; j < g.x.size(); ++j) {
        CHECK(std::isfinite(g.x[j]));
        CHECK(std::abs(CayleyGrid::angle_of(g.x[j]) - g.phi[j]) < 1e-13);
    }
    CHECK(std::abs(g.x[32]) < 0.05);  // phi = pi (1 + 1/64) is next to x = 0
    CHECK_THROWS_AS(CayleyGrid::make(100), PreconditionError);
    CHECK_THROWS_AS(CayleyGrid::make(8), PreconditionError);
}

TEST_CASE("FFT conjugate matches the direct transform") {
    Rng rng(5);
    std::vector<double> v(256);
    for (double& x : v) x = rng.uniform(-1, 1);
    std::vector<double> a = conjugate_circle(v), b = conjugate_circle_reference(v);
    double err = 0;
    for (std::size_t j = 0; j < v.size(); ++j) err = std::max(err, std::abs(a[j] - b[j]));
    CHECK(err < 1e-12);
    // cos phi -> sin phi
    CayleyGrid g = CayleyGrid::make(128);
    std::vector<double> c(128);
    for (int j = 0; j < 128; ++j) c[j] = std::cos(3 * g.phi[j]);
    std::vector<double> s = conjugate_circle(c);
    for (int j = 0; j < 128; ++j) CHECK(std::abs(s[j] - std::sin(3 * g.phi[j])) < 1e-13);
}

TEST_CASE("closed form for steps against direct integration") {
    StepFunction v = StepFunction::indicator(-1.0, 1.0);
    LogSumFunction t = hilbert_step(v);
    CHECK(std::abs(t(3.0).real() - std::log(2.0) / M_PI) < 1e-15);
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    StepFunction w = StepFunction({-1.0, 0.5, 2.0}, {0.0, 2.0, -1.0, 0.0});
    LogSumFunction tw = hilbert_step(w);
    for (double x : {-3.0, 2.5, 7.0}) {
        double direct = (2.0 * GK::integrate([&](double s) { return 1.0 / (x - s); }, -1.0, 0.5, 0, 0.0) -
                         GK::integrate([&](double s) { return 1.0 / (x - s); }, 0.5, 2.0, 0, 0.0)) /
                        M_PI;
        CHECK(std::abs(tw(x).real() - direct) < 1e-12);
    }
}

TEST_CASE("spectral transform of the Poisson kernel") {
    CayleyGrid g = CayleyGrid::make(1024);
    std::vector<double> vals(g.x.size());
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = 1.0 / (1.0 + g.x[j] * g.x[j]);
    SpectralResult r = hilbert_nodes(vals, g);
    CHECK_FALSE(r.inconclusive);
    CHECK(std::abs(r.value(3.0)) < 1e-15);
    // at the nodes, modulo the constant fixed by interpolating at the anchor
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < g.x.size(); ++j) {
        double d = r.value.values()[j].real() - g.x[j] / (1 + g.x[j] * g.x[j]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    CHECK(hi - lo < 1e-12);
    CHECK(std::abs(lo + 0.3) < 1e-4);
}

TEST_CASE("rough samples are flagged inconclusive") {
    CayleyGrid g = CayleyGrid::make(256);
    std::vector<double> vals(g.x.size());
    Rng rng(3);
    for (double& x : vals) x = rng.uniform(-1, 1);
    CHECK(hilbert_nodes(vals, g).inconclusive);
}

TEST_CASE("T^2 = -I modulo constants on the standard step set") {
    for (const auto& s : standard_step_set()) {
        InvolutionReport r = check_involution(Function(s.f), 4096);
        INFO(s.name << " residual " << r.residual);
        CHECK(r.residual < 1e-3);
        CHECK(r.N == 4096);
    }
}

TEST_CASE("anchor avoids breakpoints") {
    CHECK(hilbert_anchor({0.0, 1.0}) == 3.0);
    CHECK(hilbert_anchor({3.0}) != 3.0);
}
