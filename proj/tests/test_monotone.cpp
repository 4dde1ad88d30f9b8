#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <functional>

#include "chordarc/experiments.hpp"
#include "chordarc/monotone_map.hpp"
#include "doctest.h"

using namespace chordarc;

TEST_CASE("family f_k and l_n closed forms") {
    for (double k : {1.0, 2.0, 7.0}) {
        PiecewiseLinearMap f = family_fk(k);
        CHECK(f.normalized());
        CHECK(f(0.5) == 0.5);
        CHECK(std::abs(f(-0.5) - (-0.5 * k / (k + 1))) < 1e-15);
        CHECK(std::abs(f(-(k + 1) / k) + 1.0) < 1e-15);
        CHECK(std::abs(f(-10.0) - (-10.0 + 1.0 / k)) < 1e-14);
    }
    PiecewiseLinearMap l = family_ln(3.0);
    CHECK(l(2.0) == 2.0);
    CHECK(std::abs(l(-4.0) + 3.0) < 1e-15);
}

TEST_CASE("inversion is exact on stored data") {
    Rng rng(trial_seed(7, 0));
    for (int t = 0; t < 50; ++t) {
        PiecewiseLinearMap f = random_normalized_pl(rng);
        PiecewiseLinearMap fi = invert(f);
        CHECK(invert(fi) == f);
        CHECK(compose(f, fi).is_identity());
        for (double x : {-7.0, -1.3, 0.0, 0.4, 1.0, 2.5, 9.0}) {
            CHECK(std::abs(fi(f(x)) - x) <= 1e-13 * (1 + std::abs(x)));
            CHECK(std::abs(f.inverse(f(x)) - x) <= 1e-13 * (1 + std::abs(x)));
        }
    }
}

TEST_CASE("chain rule for log-derivatives of compositions") {
    Rng rng(trial_seed(11, 0));
    for (int t = 0; t < 50; ++t) {
        PiecewiseLinearMap f = random_normalized_pl(rng), g = random_normalized_pl(rng);
        StepFunction lhs = log_derivative(compose(f, g));
        StepFunction rhs = pullback(g, log_derivative(f)) + log_derivative(g);
        CHECK(sup_deviation_mod_constant(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("gamma of a step integrates e^u") {
    StepFunction u = StepFunction({-1.0, 0.5}, {0.3, -0.2, 1.1});
    PiecewiseLinearMap g = gamma_from_step(u);
    CHECK(g.normalized());
    CHECK(std::abs(g(0.0)) < 1e-15);
    CHECK(std::abs(g(1.0) - 1.0) < 1e-15);
    StepFunction back = log_derivative(g);
    CHECK(sup_deviation_mod_constant(back, u) < 1e-13);
    // slope ratio across the break at 0.5 is e^{1.1 - (-0.2)}
    CHECK(std::abs((g(0.75) - g(0.5)) / (g(0.5) - g(0.25)) - std::exp(1.3)) < 1e-12);
}

TEST_CASE("IntegralMap agrees with Gauss-Kronrod quadrature") {
    SampledFunction u({-2.0, -0.5, 0.3, 1.7, 3.0}, {0.4, -1.0, 0.8, 0.2, -0.6});
    IntegralMap f(u);
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto e = [&](double t) { return std::exp(evaluate(Function(u), t).real()); };
    auto integral = [&](double a, double b) {
        // split at grid knots where the integrand has kinks
        std::vector<double> cuts{a};
        for (double g : u.grid())
            if (g > std::min(a, b) && g < std::max(a, b)) cuts.push_back(g);
        cuts.push_back(b);
        if (a > b) std::sort(cuts.begin(), cuts.end(), std::greater<>());
        double s = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += GK::integrate(e, cuts[i], cuts[i + 1], 0, 0.0);
        return s;
    };
    double z = integral(0.0, 1.0);
    CHECK(std::abs(f.normalizer() - z) < 1e-13);
    for (double x : {-3.0, -1.0, 0.0, 0.2, 1.0, 2.5, 4.0}) {
        double ref = integral(0.0, x) / z;
        CHECK(std::abs(f(x) - ref) < 1e-13 * (1 + std::abs(ref)));
        CHECK(std::abs(f.inverse(f(x)) - x) < 1e-12 * (1 + std::abs(x)));
    }
}

TEST_CASE("pullback composes values") {
    PiecewiseLinearMap f = family_fk(2.0);
    StepFunction w = StepFunction({-0.5, 0.25}, {1.0, 2.0, 3.0});
    StepFunction p = pullback(f, w);
    for (double x : {-3.0, -1.0, -0.6, 0.0, 0.2, 0.3, 5.0})
        CHECK(p(x) == w(f(x)));
    Function back = pullback_inverse(MonotoneMap(f), Function(p));
    for (double y : {-3.0, -0.7, -0.2, 0.1, 0.5})
        CHECK(std::abs(evaluate(back, y) - w(y)) < 1e-15);
}

TEST_CASE("Q_u with u = 0 is the identity") {
    StepFunction w = StepFunction::indicator(0.0, 1.0, 2.0);
    Function q = q_affine(Function(StepFunction::constant(0.0)), Function(w));
    CHECK(equal_mod_constant(std::get<StepFunction>(q), w));
}

TEST_CASE("pf norm bound of the identity map is one") {
    std::vector<StepFunction> ens;
    for (const auto& s : standard_step_set()) ens.push_back(s.f);
    PfNormReport r = pf_norm_lower_bound(PiecewiseLinearMap(), ens, false);
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    PfNormReport d = pf_norm_lower_bound(PiecewiseLinearMap(), ens, true);
    CHECK(d.value < 1e-14);
}

TEST_CASE("invalid maps are rejected") {
    CHECK_THROWS_AS(PiecewiseLinearMap({0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0, 0.0}, false), PreconditionError);
    CHECK_THROWS_AS(PiecewiseLinearMap({1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0, 0.0}, false), PreconditionError);
}
