#include <cmath>

#include "chordarc/experiments.hpp"
#include "chordarc/function.hpp"
#include "doctest.h"

using namespace chordarc;

TEST_CASE("step function pieces are right-continuous") {
    StepFunction f({-1.0, 2.0}, {0.0, 3.0, 0.0});
    CHECK(f(-1.0) == cplx(3.0));
    CHECK(f(-1.0 - 1e-15) == cplx(0.0));
    CHECK(f(2.0) == cplx(0.0));
    CHECK(f(1.999) == cplx(3.0));
    CHECK(f.piece(-5.0) == 0);
    CHECK(f.piece(0.0) == 1);
}

TEST_CASE("equal adjacent values are merged") {
    StepFunction f({0.0, 1.0, 2.0}, {1.0, 1.0, 2.0, 2.0});
    CHECK(f.breakpoints() == std::vector<double>{1.0});
    CHECK(f == StepFunction({1.0}, {1.0, 2.0}));
}

TEST_CASE("constructor rejects bad data") {
    CHECK_THROWS_AS(StepFunction({1.0, 0.0}, {0.0, 1.0, 2.0}), PreconditionError);
    CHECK_THROWS_AS(StepFunction({0.0}, {0.0}), PreconditionError);
    CHECK_THROWS_AS(StepFunction({0.0}, {0.0, cplx(NAN, 0)}), PreconditionError);
    CHECK_THROWS_AS(StepFunction::indicator(1.0, 1.0), PreconditionError);
}

TEST_CASE("integral over a step matches a piecewise sum") {
    StepFunction f({-1.0, 0.5, 2.0}, {1.0, cplx(0, 2), -3.0, 0.5});
    // [-2,3]: 1*1 + 2i*1.5 - 3*1.5 + 0.5*1
    cplx expected = 1.0 + cplx(0, 3.0) - 4.5 + 0.5;
    CHECK(std::abs(f.integral(-2.0, 3.0) - expected) < 1e-15);
    CHECK(std::abs(f.integral(3.0, -2.0) + expected) < 1e-15);
    CHECK(std::abs(f.mean(-2.0, 3.0) - expected / 5.0) < 1e-15);
}

TEST_CASE("arithmetic on the common refinement") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        StepFunction f = random_step(rng), g = random_step(rng);
        StepFunction h = f + g;
        for (int m = 0; m < 100; ++m) {
            double x = rng.uniform(-4.0, 4.0);
            CHECK(h(x) == f(x) + g(x));
        }
        CHECK((f - f) == StepFunction::constant(0.0));
        CHECK((cplx(2.0) * f)(0.3) == 2.0 * f(0.3));
    }
}

TEST_CASE("translation and dilation") {
    StepFunction f = StepFunction::indicator(0.0, 1.0, 2.0);
    CHECK(f.translated(3.0) == StepFunction::indicator(3.0, 4.0, 2.0));
    CHECK(f.dilated(4.0) == StepFunction::indicator(0.0, 4.0, 2.0));
    CHECK_THROWS_AS(f.dilated(0.0), PreconditionError);
}

TEST_CASE("canonical representative has zero mean on [0,1]") {
    StepFunction f({0.25, 3.0}, {5.0, cplx(1, 1), 7.0});
    StepFunction c = f.canonical_representative();
    CHECK(std::abs(c.mean(0.0, 1.0)) < 1e-15);
    CHECK(equal_mod_constant(f, c));
    CHECK(sup_deviation_mod_constant(f, c + 4.0) < 1e-15);
}

TEST_CASE("sampled function interpolates and extends by its tails") {
    SampledFunction f({0.0, 1.0, 3.0}, {0.0, 2.0, cplx(0, 4)}, Tail::hold(), Tail::log(cplx(2.0)));
    CHECK(std::abs(f(0.5) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(f(2.0) - cplx(1.0, 2.0)) < 1e-15);
    CHECK(f(-7.0) == cplx(0.0));
    CHECK(std::abs(f(6.0) - (cplx(0, 4) + 2.0 * std::log(2.0))) < 1e-14);
    CHECK_FALSE(f.is_real());
    CHECK(f.real_part().is_real());
    CHECK_THROWS_AS(SampledFunction(std::vector<double>{}, std::vector<cplx>{}), PreconditionError);
    CHECK_THROWS_AS(SampledFunction(std::vector<double>{0.0, 1.0}, std::vector<cplx>{1.0}), PreconditionError);
    CHECK_THROWS_AS(SampledFunction(std::vector<double>{0.0, 1.0}, std::vector<cplx>{1.0, 2.0}, Tail::log(1.0)),
                    PreconditionError);
}

TEST_CASE("log-sum evaluation and singular points") {
    LogSumFunction f({{1.0, 2.0}, {-1.0, -1.0}}, 0.5);
    double x = 3.0;
    CHECK(std::abs(f(x) - cplx(2.0 * std::log(2.0) - std::log(4.0) + 0.5)) < 1e-15);
    CHECK(f.is_singular_at(1.0));
    CHECK(std::isinf(f(1.0).real()));
    CHECK(f(1.0).real() < 0);
    CHECK(std::abs(f.total_coef() - cplx(1.0)) < 1e-15);
}

TEST_CASE("function variant helpers") {
    Function f = StepFunction({0.0}, {cplx(1, 2), 3.0});
    CHECK(std::string(kind_name(f)) == "step");
    CHECK_FALSE(is_real(f));
    CHECK(evaluate(real_part(f), -1.0) == cplx(1.0));
    CHECK(evaluate(imag_part(f), -1.0) == cplx(2.0));
    CHECK(evaluate(scale(f, cplx(0, 1)), 1.0) == cplx(0, 3));
    std::vector<double> b;
    collect_breaks(Function(StepFunction({-2.0, 0.0, 5.0}, {0.0, 1.0, 2.0, 3.0})), -1.0, 6.0, b);
    CHECK(b == std::vector<double>{0.0, 5.0});
}
