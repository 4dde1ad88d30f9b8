#include <algorithm>
#include <cmath>

#include "chordarc/bmo.hpp"
#include "chordarc/experiments.hpp"
#include "chordarc/oracles.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {

std::vector<double> wide_nodes(const StepFunction& f) {
    std::vector<double> n = f.breakpoints();
    for (int i = 0; i <= 240; ++i) n.push_back(-6.0 + 12.0 * i / 240.0);
    for (double r : {8.0, 12.0, 16.0, 24.0, 32.0, 64.0, 128.0, 1024.0}) {
        n.push_back(r);
        n.push_back(-r);
    }
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    return n;
}

}  // namespace

TEST_CASE("two-valued steps: norm is half the jump") {
    for (double d : {0.1, 1.0, 7.5}) {
        CHECK(std::abs(bmo_norm_exact(StepFunction::heaviside(0.3, d)).value - d / 2) < 1e-12);
        CHECK(std::abs(bmo_norm_exact(StepFunction::indicator(-2.0, 5.0, cplx(0, d))).value - d / 2) < 1e-12);
    }
    CHECK(bmo_norm_exact(StepFunction::constant(4.0)).value == 0.0);
}

TEST_CASE("mean oscillation against the two-valued closed form") {
    // Fraction p of I inside [0,1]: 2 p (1 - p) |c|.
    StepFunction f = StepFunction::indicator(0.0, 1.0, 3.0);
    for (double a : {-1.0, -0.5, 0.2}) {
        double b = 1.5;
        double p = (1.0 - std::max(a, 0.0)) / (b - a);
        CHECK(std::abs(mean_oscillation(f, {a, b}) - 2 * p * (1 - p) * 3.0) < 1e-14);
    }
    CHECK_THROWS_AS(mean_oscillation(f, {1.0, 1.0}), PreconditionError);
}

TEST_CASE("mean oscillation agrees with direct summation") {
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        StepFunction f = random_step(rng, 6, 3.0) + StepFunction({0.1}, {0.0, cplx(0, rng.uniform())});
        for (int m = 0; m < 20; ++m) {
            double a = rng.uniform(-5, 5), b = a + rng.uniform(0.01, 6);
            CHECK(std::abs(mean_oscillation(f, {a, b}) - direct_mean_oscillation(f, a, b)) < 1e-13);
        }
    }
}

TEST_CASE("exact optimizer is an upper envelope of the dense-grid oracle") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        StepFunction f = random_step(rng, 5, 3.0);
        double exact = bmo_norm_exact(f).value;
        double grid = dense_grid_bmo(f, wide_nodes(f));
        CHECK(exact >= grid - 1e-12);
        CHECK(exact - grid < 5e-3);
    }
}

TEST_CASE("aligned dense grid reproduces indicator norms") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        double a = rng.uniform(-3, 3), b = a + rng.uniform(0.1, 4);
        cplx c = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.0));
        StepFunction f = StepFunction::indicator(a, b, c);
        CHECK(std::abs(dense_grid_bmo(f, aligned_nodes(a, b, 40)) - bmo_norm_exact(f).value) < 1e-6);
    }
}

TEST_CASE("invariance under constants, scaling, translation and dilation") {
    Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        StepFunction f = random_step(rng) + cplx(0, 1) * random_step(rng);
        double n = bmo_norm_exact(f).value;
        CHECK(std::abs(bmo_norm_exact(f + cplx(3.0, -2.0)).value - n) < 1e-12);
        cplx a(-1.5, 0.7);
        CHECK(std::abs(bmo_norm_exact(a * f).value - std::abs(a) * n) < 1e-12 * (1 + std::abs(a)));
        CHECK(std::abs(bmo_norm_exact(f.translated(2.5)).value - n) < 1e-10);
        CHECK(std::abs(bmo_norm_exact(f.dilated(3.0)).value - n) < 1e-10);
    }
}

TEST_CASE("real and imaginary parts bound the complex norm") {
    Rng rng(37);
    for (int t = 0; t < 25; ++t) {
        StepFunction f = random_step(rng) + cplx(0, 1) * random_step(rng);
        double n = bmo_norm_exact(f).value;
        double nr = bmo_norm_exact(f.real_part()).value, ni = bmo_norm_exact(f.imag_part()).value;
        CHECK(std::max(nr, ni) <= n + 1e-9);
        CHECK(n <= nr + ni + 1e-9);
    }
}

TEST_CASE("every interval oscillation is below the exact norm") {
    Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        StepFunction f = random_step(rng, 6);
        BmoResult r = bmo_norm_exact(f);
        CHECK(r.certified);
        CHECK(std::abs(mean_oscillation(f, r.witness) - r.value) < 1e-9);
        for (int m = 0; m < 200; ++m) {
            double a = rng.uniform(-8, 8), b = a + std::pow(10.0, rng.uniform(-3, 2));
            CHECK(mean_oscillation(f, {a, b}) <= r.value + 1e-9);
        }
    }
}

TEST_CASE("parallel and serial kernels agree") {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        StepFunction f = random_step(rng, 8);
        CHECK(bmo_norm_exact(f).value == bmo_norm_exact_serial(f).value);
        IntervalFamily fam = IntervalFamily::dyadic(-8, 8, 8);
        Function ff = f;
        FunctionCombination h{ff};
        CHECK(bmo_norm_family(h, fam).value == bmo_norm_family_serial(h, fam).value);
    }
}

TEST_CASE("family mode is a lower bound and uncertified for samples") {
    StepFunction f({-1.0, 0.0, 2.0}, {0.0, 1.0, -1.0, 0.5});
    IntervalFamily fam = IntervalFamily::default_for(f.breakpoints());
    BmoResult fr = bmo_norm(Function(f), BmoMode::Family, &fam);
    CHECK(fr.value <= bmo_norm_exact(f).value + 1e-12);
    CHECK(fr.value > 0.9 * bmo_norm_exact(f).value);

    std::vector<double> g;
    for (int i = 0; i <= 200; ++i) g.push_back(-2.0 + 4.0 * i / 200.0);
    SampledFunction s = SampledFunction::from_callable(g, [](double x) { return cplx(std::sin(3 * x)); });
    BmoResult sr = bmo_norm(Function(s), BmoMode::Family, &fam);
    CHECK_FALSE(sr.certified);
    CHECK(sr.value > 0.0);
    CHECK_THROWS_AS(bmo_norm(Function(s), BmoMode::Exact), UnsupportedModeError);
    CHECK_THROWS_AS(bmo_norm(Function(s), BmoMode::Family), PreconditionError);
}

TEST_CASE("piecewise-linear mean oscillation against quadrature by midpoints") {
    SampledFunction s({0.0, 1.0, 2.0}, {0.0, 1.0, cplx(0.0, 1.0)});
    Interval I{0.2, 1.7};
    const int M = 200000;
    cplx m = 0.0;
    for (int k = 0; k < M; ++k) m += s(I.a + I.length() * (k + 0.5) / M);
    m /= M;
    double osc = 0.0;
    for (int k = 0; k < M; ++k) osc += std::abs(s(I.a + I.length() * (k + 0.5) / M) - m);
    osc /= M;
    CHECK(std::abs(mean_oscillation(Function(s), I) - osc) < 1e-8);
}

TEST_CASE("distance modulo constants") {
    StepFunction f({0.0, 1.0}, {0.0, 1.0, 0.0});
    CHECK(bmo_distance(Function(f), Function(f + 2.0), BmoMode::Exact).value == 0.0);
    CHECK(std::abs(bmo_distance(Function(f), Function(StepFunction::constant(0.0)), BmoMode::Exact).value - 0.5) <
          1e-12);
}

TEST_CASE("tail fractions for a step are exact") {
    StepFunction f = StepFunction::indicator(0.0, 1.0, 2.0);
    JnTailReport r = jn_tail(Function(f), {-1.0, 1.0}, {0.5, 1.5});
    CHECK(r.exact);
    // mean 1 on [-1,1], |f - 1| = 1 everywhere
    CHECK(r.tail[0].second == 1.0);
    CHECK(r.tail[1].second == 0.0);
    CHECK_THROWS_AS(jn_tail(Function(f), {0.0, 1.0}, {0.0}), PreconditionError);
}
