#include <algorithm>
#include <cmath>

#include "chordarc/experiments.hpp"
#include "chordarc/welding.hpp"
#include "doctest.h"

using namespace chordarc;

namespace {
double sector_error(const WeldingResult& w, double theta) {
    double e = M_PI / (M_PI - theta), err = 0;
    for (std::size_t j = 0; j < w.s.size(); ++j) {
        double s = w.s[j];
        if (std::abs(s) < 1e-2 || std::abs(s) > 10) continue;
        double ex = (s > 0 ? 1.0 : -1.0) * std::pow(std::abs(s), e);
        err = std::max(err, std::abs(w.f[j] - ex) / std::abs(ex));
    }
    return err;
}
}  // namespace

TEST_CASE("sampling nodes") {
    WeldSampling g;
    g.N = 64;
    std::vector<double> s = g.nodes();
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::count(s.begin(), s.end(), 0.0) == 1);
    CHECK(std::count(s.begin(), s.end(), 1.0) == 1);
    CHECK(s.front() == -1e4);
    CHECK(s.back() == 1e4);
    WeldSampling c;
    c.kind = WeldSampling::Kind::CoreGraded;
    c.N = 101;
    std::vector<double> t = c.nodes();
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
}

TEST_CASE("welding of a line is the identity") {
    WeldSampling ws;
    ws.N = 512;
    WeldingResult w = welding_homeo(EmbeddingCurve(Function(StepFunction::constant(cplx(0, 0.3)))), ws);
    CHECK(w.fit_residual < 1e-6);
    for (std::size_t j = 0; j < w.s.size(); ++j)
        CHECK(std::abs(w.f[j] - w.s[j]) < 1e-8 * std::max(1.0, std::abs(w.s[j])));
}

TEST_CASE("right-angle sector welding and its self-convergence") {
    WeldSampling a, b;
    a.N = 2048;
    b.N = 4096;
    WeldingResult wa = welding_homeo(wedge_curve(M_PI / 2), a), wb = welding_homeo(wedge_curve(M_PI / 2), b);
    double ea = sector_error(wa, M_PI / 2), eb = sector_error(wb, M_PI / 2);
    INFO("errors " << ea << " " << eb);
    CHECK(eb < 1e-5);
    CHECK(eb <= ea / 2);
    CHECK(wa.f[std::find(wa.s.begin(), wa.s.end(), 1.0) - wa.s.begin()] == 1.0);
}

TEST_CASE("log-derivative of monotone samples is second order") {
    auto gap = [](double h) {
        std::vector<double> s, f;
        for (int j = 1; j * h <= 4.0 + 1e-12; ++j) {
            s.push_back(j * h);
            f.push_back(std::pow(j * h, 3.0));
        }
        SampledFunction l = log_derivative_monotone(s, f);
        double err = 0;
        for (std::size_t j = 0; j + 1 < s.size(); ++j) {
            if (s[j] < 1.0) continue;
            double e = std::abs(l.values()[j].real() - std::log(3 * s[j] * s[j]));
            // centered difference: f' error h^2 f'''/6 = h^2, relative h^2 / (3 s^2)
            CHECK(e < 1.2 * h * h / (3 * s[j] * s[j]));
            err = std::max(err, e);
        }
        return err;
    };
    double a = gap(0.02), b = gap(0.01);
    CHECK(a / b > 3.5);
    CHECK(a / b < 4.5);
}

TEST_CASE("lambda of zero is zero mod constants") {
    WeldSampling ws;
    ws.N = 256;
    LambdaResult r = lambda_map(Function(StepFunction::constant(0.0)), ws);
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < r.value.grid().size(); ++j) {
        double s = std::abs(r.value.grid()[j]);
        if (s < 1e-2 || s > 10) continue;
        lo = std::min(lo, r.value.values()[j].real());
        hi = std::max(hi, r.value.values()[j].real());
    }
    CHECK(hi - lo < 1e-6);
}

TEST_CASE("rho is consistent with the two one-sided weldings") {
    std::vector<double> g;
    for (int i = 0; i <= 400; ++i) g.push_back(-2 + 4.0 * i / 400);
    SampledFunction v = SampledFunction::from_callable(g, [](double x) { return cplx(0.3 * smooth_bump(x)); });
    WeldSampling ws;
    ws.N = 1024;
    RhoResult r = rho_map(Function(v), ws);
    CHECK(r.consistency < 1e-3);
    for (std::size_t j = 0; j + 1 < r.x.size(); ++j) {
        CHECK(r.x[j] < r.x[j + 1]);
        CHECK(r.W[j] < r.W[j + 1]);
    }
}
