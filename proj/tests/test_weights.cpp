#include <cmath>

#include "chordarc/monotone_map.hpp"
#include "chordarc/weights.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {

IntervalFamily single(double a, double b) {
    IntervalFamily f;
    f.add({a, b});
    return f;
}

Function power_weight(double s) { return LogSumFunction({{0.0, s}}); }  // e^u = |x|^s

}  // namespace

TEST_CASE("constant weight has all constants equal to one") {
    Function one = StepFunction::constant(0.0);
    IntervalFamily fam = IntervalFamily::dyadic(-4, 4, 6);
    for (double p : {1.5, 2.0, 4.0}) CHECK(std::abs(ap_constant(one, p, fam).value - 1.0) < 1e-15);
    CHECK(std::abs(reverse_jensen_constant(one, fam).value - 1.0) < 1e-15);
    DoublingFit d = doubling_fit(one, fam, {});
    CHECK(d.K == 1.0);
    CHECK(std::abs(d.alpha - 1.0) < 1e-12);
}

TEST_CASE("A2 term of |x|^(1/2) on [-1,1]") {
    FamilySup r = ap_constant(power_weight(0.5), 2.0, single(-1.0, 1.0));
    CHECK_FALSE(r.divergent);
    CHECK(std::abs(r.value - 4.0 / 3.0) < 1e-9);
}

TEST_CASE("A2 of a two-valued step: (1 + cosh a)/2 at the balanced interval") {
    double a = 1.3;
    Function u = StepFunction::heaviside(0.0, a);
    FamilySup r = ap_constant(u, 2.0, single(-2.0, 2.0));
    CHECK(std::abs(r.value - (1.0 + std::cosh(a)) / 2.0) < 1e-14);
    IntervalFamily fam = IntervalFamily::default_for({0.0});
    CHECK(std::abs(ap_constant(u, 2.0, fam).value - (1.0 + std::cosh(a)) / 2.0) < 1e-14);
}

TEST_CASE("|x|^(-1) is flagged divergent") {
    IntervalFamily fam = IntervalFamily::dyadic(-1, 1, 6);
    CHECK(ap_constant(power_weight(-1.0), 2.0, fam).divergent);
    CHECK(reverse_jensen_constant(power_weight(-1.0), fam).divergent);
    CHECK(doubling_fit(power_weight(-1.0), fam, {}).divergent);
}

TEST_CASE("reverse Jensen constants") {
    Function u = StepFunction::indicator(0.0, 1.0);
    CHECK(std::abs(reverse_jensen_constant(u, single(0.0, 2.0)).value - (std::exp(1.0) + 1) / (2 * std::exp(0.5))) <
          1e-14);
    FamilySup r = reverse_jensen_constant(power_weight(1.0), single(-1.0, 1.0));
    CHECK(std::abs(r.value - std::exp(1.0) / 2.0) < 1e-9);
}

TEST_CASE("sampled weights: exact piecewise exponential integrals") {
    // u linear on [0,1]: int e^{2x} = (e^2 - 1)/2
    SampledFunction u({0.0, 1.0}, {0.0, 2.0});
    WeightIntegrals w = weight_integrals(Function(u), 1.0, 0.0, 1.0, 0.0);
    CHECK(std::abs(w.exp_int - (std::exp(2.0) - 1) / 2) < 1e-13);
    CHECK(std::abs(w.val_int - 1.0) < 1e-14);
    // hold tails: constant beyond the grid
    WeightIntegrals t = weight_integrals(Function(u), 1.0, 1.0, 3.0, 0.0);
    CHECK(std::abs(t.exp_int - 2 * std::exp(2.0)) < 1e-12);
}

TEST_CASE("doubling fit of e^{chi[0,1]}: alpha strictly below one") {
    Function u = StepFunction::indicator(0.0, 1.0);
    DoublingFit d = doubling_fit(u, IntervalFamily::default_for({0.0, 1.0}), {});
    CHECK_FALSE(d.divergent);
    CHECK(d.alpha < 1.0);
    CHECK(d.alpha > 0.0);
    CHECK(d.K == 1.0);
    CHECK(d.pairs > 0);
    // the witness pair attains the fitted exponent
    double wE = 0.0;
    for (const auto& p : d.witness_E.parts) wE += weight_integrals(u, 1.0, p.a, p.b, 0.0).exp_int;
    double wI = weight_integrals(u, 1.0, d.witness_I.a, d.witness_I.b, 0.0).exp_int;
    CHECK(std::abs(wE / wI - std::pow(d.witness_E.measure() / d.witness_I.length(), d.alpha)) < 1e-12);
    // [0,2] with E = [0,1] bounds the exponent by log(e/(e+1))/log(1/2)
    CHECK(d.alpha <= std::log(std::exp(1.0) / (std::exp(1.0) + 1)) / std::log(0.5) + 1e-12);
}

TEST_CASE("parallel and serial A_p agree") {
    Function u = StepFunction({-1.0, 0.5, 2.0}, {0.0, 0.7, -0.4, 0.1});
    IntervalFamily fam = IntervalFamily::default_for({-1.0, 0.5, 2.0});
    CHECK(ap_constant(u, 2.0, fam).value == ap_constant_serial(u, 2.0, fam).value);
}

TEST_CASE("subset sampler is seeded") {
    Function u = StepFunction::indicator(0.0, 1.0);
    SubsetSampler a, b;
    b.seed = 2;
    auto sa = a.sample(u, {-1.0, 1.0}, 0), sa2 = a.sample(u, {-1.0, 1.0}, 0), sb = b.sample(u, {-1.0, 1.0}, 0);
    REQUIRE(sa.size() == sa2.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].measure() == sa2[i].measure());
        CHECK(sa[i].measure() <= 2.0 + 1e-15);
    }
    bool differ = sa.size() != sb.size();
    for (std::size_t i = 0; !differ && i < sa.size(); ++i) differ = sa[i].measure() != sb[i].measure();
    CHECK(differ);
}

TEST_CASE("BMO* verdicts") {
    CHECK(is_bmo_star(Function(StepFunction::constant(0.0))).verdict == Verdict::Pass);
    for (double n : {1.0, 10.0, 100.0, 1e4}) {
        WeightReport r = is_bmo_star(Function(log_derivative(family_ln(n))));
        CHECK(r.verdict == Verdict::Pass);
    }
    WeightReport bad = is_bmo_star(power_weight(-1.0));
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(bad.ap.divergent);
    CHECK_THROWS_AS(is_bmo_star(Function(StepFunction::constant(cplx(0, 1)))), PreconditionError);
}

TEST_CASE("verdict names") {
    CHECK(std::string(verdict_name(Verdict::Pass)) == "pass");
    CHECK(std::string(verdict_name(Verdict::Fail)) == "fail");
    CHECK(std::string(verdict_name(Verdict::Inconclusive)) == "inconclusive");
}
