#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "chordarc/embedding.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

cplx gk_curve(const Function& w, double a, double b, const std::vector<double>& cuts) {
    std::vector<double> pts{a};
    for (double c : cuts)
        if (c > a && c < b) pts.push_back(c);
    pts.push_back(b);
    cplx s = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double re = GK::integrate([&](double t) { return std::exp(evaluate(w, t)).real(); }, pts[i], pts[i + 1], 0, 0.0);
        double im = GK::integrate([&](double t) { return std::exp(evaluate(w, t)).imag(); }, pts[i], pts[i + 1], 0, 0.0);
        s += cplx(re, im);
    }
    return s;
}
}  // namespace

TEST_CASE("raw curve of a step log-derivative against quadrature") {
    Function w = StepFunction({-1.0, 0.5, 2.0}, {cplx(0.2, 0.3), cplx(-0.4, 1.0), cplx(0.1, -0.7), cplx(0, 0.2)});
    EmbeddingCurve c(w);
    std::vector<double> cuts{-1.0, 0.5, 2.0};
    for (double x : {0.3, 1.0, 2.7}) CHECK(std::abs(c.raw(x) - gk_curve(w, 0.0, x, cuts)) < 1e-13);
    CHECK(std::abs(c.raw(-2.0) + gk_curve(w, -2.0, 0.0, cuts)) < 1e-13);
    CHECK(std::abs(c(0.0)) == 0.0);
    CHECK(std::abs(c(1.0) - 1.0) < 1e-15);
}

TEST_CASE("raw curve of a sampled log-derivative against quadrature") {
    SampledFunction s({-1.0, 0.0, 0.7, 1.5}, {cplx(0, 0.5), cplx(0.3, -0.2), cplx(-0.1, 0.4), cplx(0.2, 0.0)});
    Function w = s;
    EmbeddingCurve c(w);
    std::vector<double> cuts{-1.0, 0.0, 0.7, 1.5};
    for (double x : {0.5, 1.2, 3.0}) CHECK(std::abs(c.raw(x) - gk_curve(w, 0.0, x, cuts)) < 1e-12);
    CHECK(std::abs(c.raw(-2.0) + gk_curve(w, -2.0, 0.0, cuts)) < 1e-12);
}

TEST_CASE("unimodular derivative gives arc length b - a") {
    EmbeddingCurve c(Function(StepFunction({0.0, 1.0}, {cplx(0, 0.3), cplx(0, 2.0), cplx(0, -1.0)})));
    CHECK(std::abs(c.raw_arclength(-2.0, 3.5) - 5.5) < 1e-14);
}

TEST_CASE("wedge chord-arc constant is sec(theta/2)") {
    for (double th : {M_PI / 6, M_PI / 3, M_PI / 2, 2.5}) {
        ChordArcReport r = chord_arc_constant(wedge_curve(th));
        INFO("theta " << th);
        CHECK(std::abs(r.constant - 1.0 / std::cos(th / 2)) < 1e-12);
        CHECK(r.pairs > 0);
    }
    CHECK(std::abs(chord_arc_constant(EmbeddingCurve(Function(StepFunction::constant(0.0)))).constant - 1.0) < 1e-14);
}

TEST_CASE("parallel chord-arc equals serial") {
    EmbeddingCurve c(Function(StepFunction({-1.0, 0.5}, {cplx(0, 0.0), cplx(0.3, 0.9), cplx(0, -0.4)})));
    ChordArcSampler s;
    s.random_count = 500;
    CHECK(chord_arc_constant(c, s).constant == chord_arc_constant_serial(c, s).constant);
}

TEST_CASE("log-derivative of a curve round trips") {
    Function w = StepFunction::heaviside(0.0, cplx(0, 1.0));
    EmbeddingCurve c = curve_from_logderiv(w);
    Function back = log_derivative_of_curve(c);
    CHECK(equal_mod_constant(std::get<StepFunction>(back), std::get<StepFunction>(w), 1e-14));
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.1 * i);
    SampledFunction sm = log_derivative_of_samples([](double x) { return std::exp(cplx(0, 1) * x); }, grid, 1e-3);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(sm.values()[i] - cplx(0, grid[i] + M_PI / 2)) < 1e-8);  // log(i e^{ix})
}

TEST_CASE("J and its inverse") {
    StepFunction u({-0.5, 0.25, 1.0}, {0.0, 0.5, -0.25, 0.125});
    StepFunction v({-1.0, 0.75}, {0.0, 1.0, 0.5});
    JResult j = j_map(Function(u), Function(v));
    CHECK(j.checked);
    JInverse back = j_inverse(j.w);
    CHECK(equal_mod_constant(std::get<StepFunction>(back.u), u, 1e-12));
    CHECK(equal_mod_constant(std::get<StepFunction>(back.v), v, 1e-12));
    CHECK_FALSE(j_map(Function(u), Function(v), false).checked);
}

TEST_CASE("J rejects mixed representations") {
    SampledFunction s({0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(j_map(Function(s), Function(StepFunction::indicator(0, 1))), UnsupportedModeError);
}
