#include "chordarc/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "chordarc/bmo.hpp"
#include "chordarc/embedding.hpp"
#include "chordarc/extension.hpp"
#include "chordarc/hilbert.hpp"
#include "chordarc/oracles.hpp"
#include "chordarc/welding.hpp"

namespace chordarc {

using io::fmt;
using io::json;

namespace {

const cplx I1(0.0, 1.0);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> err(n);
    long m = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < m; ++i) {
        auto k = static_cast<std::size_t>(i);
        try {
            out[k] = fn(k);
        } catch (...) {
            err[k] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

struct Recorder {
    std::vector<std::string> columns;
    json rows = json::array();
    std::vector<Assertion> assertions;
    std::vector<std::string> failures;
    json extra = json::object();
    std::vector<io::SvgSeries> series;
    std::string svg_title;
    bool log_x = false;
    bool equal_aspect = false;

    void row(json r) { rows.push_back(std::move(r)); }
    void check(int criterion, std::string name, bool ok, std::string detail) {
        assertions.push_back({criterion, std::move(name), ok, std::move(detail)});
    }
    void fail(std::string s) { failures.push_back(std::move(s)); }
};

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    return v.get<std::string>();
}

// Rows are emitted in parameter order, independent of the thread schedule.
void require_sorted_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------- discontinuity

void suite_discontinuity(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"k", "n", "norm_log_ln", "expected", "abs_error", "norm_conjugated", "bound", "margin"};
    struct Res {
        double k, n, nl, expected, nc, bound;
    };
    std::vector<std::pair<double, double>> grid;
    for (double k : c.k)
        for (double n : c.n) grid.emplace_back(k, n);
    auto res = parallel_map<Res>(grid.size(), [&](std::size_t i) {
        auto [k, n] = grid[i];
        PiecewiseLinearMap ln = family_ln(n), fk = family_fk(k);
        double nl = bmo_norm_exact(log_derivative(ln)).value;
        PiecewiseLinearMap g = compose(compose(fk, invert(ln)), invert(fk));
        double nc = bmo_norm_exact(log_derivative(g)).value;
        return Res{k, n, nl, 0.5 * std::log1p(1.0 / n), nc, 0.5 * std::log1p(1.0 / k)};
    });
    bool ok_ln = true, ok_conj = true, ok_mono = true;
    double worst_ln = 0.0, worst_margin = 1e300;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        double err = std::abs(r.nl - r.expected), margin = r.nc - r.bound;
        R.row({r.k, r.n, r.nl, r.expected, err, r.nc, r.bound, margin});
        worst_ln = std::max(worst_ln, err);
        worst_margin = std::min(worst_margin, margin);
        if (err > 1e-9) {
            ok_ln = false;
            R.fail("k=" + fmt(r.k) + " n=" + fmt(r.n) + ": ||log l_n'|| = " + fmt(r.nl) + ", expected " +
                   fmt(r.expected));
        }
        if (margin < -1e-9) {
            ok_conj = false;
            R.fail("k=" + fmt(r.k) + " n=" + fmt(r.n) + ": conjugated norm " + fmt(r.nc) + " below bound " +
                   fmt(r.bound));
        }
        if (i > 0 && res[i - 1].k == r.k && !(r.nl < res[i - 1].nl)) ok_mono = false;
    }
    R.check(1, "norm of log l_n' matches 0.5 log(1+1/n)", ok_ln, "max abs error " + fmt(worst_ln));
    R.check(1, "conjugated norm stays above 0.5 log(1+1/k)", ok_conj, "min margin " + fmt(worst_margin));
    R.check(1, "norm of log l_n' decreases in n", ok_mono, "");
    R.svg_title = "BMO norms against n";
    R.log_x = true;
    for (double k : c.k) {
        io::SvgSeries a{"conjugated, k=" + fmt(k), {}}, b{"log l_n', k=" + fmt(k), {}};
        for (const auto& r : res)
            if (r.k == k) {
                a.points.emplace_back(r.n, r.nc);
                b.points.emplace_back(r.n, r.nl);
            }
        R.series.push_back(a);
        if (k == c.k.front()) R.series.push_back(b);
    }
}

// ---------------------------------------------------------------- indicator

void suite_indicator(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"trial", "a", "b", "re_c", "im_c", "exact", "expected", "oracle", "error_expected",
                 "error_oracle"};
    struct Res {
        double a, b;
        cplx cc;
        double exact, oracle;
    };
    auto res = parallel_map<Res>(static_cast<std::size_t>(c.trials), [&](std::size_t t) {
        Rng rng(trial_seed(c.seed, t));
        double a = rng.uniform(-10.0, 10.0);
        double len = std::pow(10.0, rng.uniform(-3.0, 3.0));
        double b = a + len;
        cplx cc = std::polar(rng.uniform(0.1, 5.0), rng.uniform(0.0, 2.0 * kPi));
        StepFunction f = StepFunction::indicator(a, b, cc);
        double exact = bmo_norm_exact(f).value;
        double oracle = dense_grid_bmo(f, aligned_nodes(a, b, 40));
        return Res{a, b, cc, exact, oracle};
    });
    bool ok_e = true, ok_o = true;
    double we = 0.0, wo = 0.0;
    for (std::size_t t = 0; t < res.size(); ++t) {
        const auto& r = res[t];
        double expected = 0.5 * std::abs(r.cc);
        double ee = std::abs(r.exact - expected), eo = std::abs(r.exact - r.oracle);
        we = std::max(we, ee);
        wo = std::max(wo, eo);
        R.row({static_cast<long long>(t), r.a, r.b, r.cc.real(), r.cc.imag(), r.exact, expected, r.oracle, ee, eo});
        std::string tag = "trial " + std::to_string(t) + " a=" + fmt(r.a) + " b=" + fmt(r.b) + " c=(" +
                          fmt(r.cc.real()) + "," + fmt(r.cc.imag()) + "): exact " + fmt(r.exact);
        if (ee > 1e-9) {
            ok_e = false;
            R.fail(tag + ", expected " + fmt(expected));
        }
        if (eo > 1e-6) {
            ok_o = false;
            R.fail(tag + ", dense-grid oracle " + fmt(r.oracle));
        }
    }
    R.check(2, "exact norm equals |c|/2", ok_e, "max error " + fmt(we));
    R.check(2, "exact optimizer agrees with dense-grid oracle", ok_o, "max difference " + fmt(wo));
}

// ---------------------------------------------------------------- operator

void suite_operator(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"k", "n", "norm_difference", "expected", "abs_error", "norm_log_ln"};
    struct Res {
        double k, n, d, expected, nl;
    };
    std::vector<std::pair<double, double>> grid;
    for (double k : c.k)
        for (double n : c.n) grid.emplace_back(k, n);
    auto res = parallel_map<Res>(grid.size(), [&](std::size_t i) {
        auto [k, n] = grid[i];
        StepFunction v0 = log_derivative(family_fk(k));
        PiecewiseLinearMap ln = family_ln(n);
        double d = bmo_norm_exact(pullback(ln, v0) - v0).value;
        double nl = bmo_norm_exact(log_derivative(ln)).value;
        return Res{k, n, d, 0.5 * std::log1p(1.0 / k), nl};
    });
    bool ok = true, mono = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        double err = std::abs(r.d - r.expected);
        worst = std::max(worst, err);
        R.row({r.k, r.n, r.d, r.expected, err, r.nl});
        if (err > 1e-9) {
            ok = false;
            R.fail("k=" + fmt(r.k) + " n=" + fmt(r.n) + ": ||P v0 - v0|| = " + fmt(r.d) + ", expected " +
                   fmt(r.expected));
        }
        if (i > 0 && res[i - 1].k == r.k && !(r.nl < res[i - 1].nl)) mono = false;
    }
    R.check(3, "||P_{l_n} v0 - v0|| is constant 0.5 log(1+1/k) in n", ok, "max error " + fmt(worst));
    R.check(3, "||log l_n'|| decreases to 0", mono, "");
    R.svg_title = "||P_{l_n} v0 - v0|| and ||log l_n'|| against n";
    R.log_x = true;
    for (double k : c.k) {
        io::SvgSeries a{"difference, k=" + fmt(k), {}};
        for (const auto& r : res)
            if (r.k == k) a.points.emplace_back(r.n, r.d);
        R.series.push_back(a);
    }
    io::SvgSeries b{"log l_n'", {}};
    for (const auto& r : res)
        if (r.k == c.k.front()) b.points.emplace_back(r.n, r.nl);
    R.series.push_back(b);
}

// ---------------------------------------------------------------- j-identity

void suite_j_identity(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"trial", "breaks_u", "breaks_v", "identity_error", "curve_error"};
    struct Res {
        std::size_t bu, bv;
        double id_err, curve_err;
    };
    auto res = parallel_map<Res>(static_cast<std::size_t>(c.trials), [&](std::size_t t) {
        Rng rng(trial_seed(c.seed, t));
        StepFunction u = random_step(rng), v0 = random_step(rng);
        StepFunction J = std::get<StepFunction>(j_map(u, v0, false).w);
        StepFunction rhs = I1 * log_derivative(compose(gamma_from_step(v0), gamma_from_step(u))) +
                           cplx(1.0, -1.0) * u;
        StepFunction diff = J - rhs;
        cplx c0 = diff(0.0);
        double id_err = 0.0;
        for (cplx v : diff.values()) id_err = std::max(id_err, std::abs(v - c0));
        EmbeddingCurve gJ(J), gv(Function(I1 * v0));
        PiecewiseLinearMap gu = gamma_from_step(u);
        double curve_err = 0.0;
        for (int m = 0; m < 1000; ++m) {
            double x = -5.0 + 10.0 * (m + 0.5) / 1000.0;
            curve_err = std::max(curve_err, std::abs(gJ(x) - gv(gu(x))));
        }
        return Res{u.breakpoints().size(), v0.breakpoints().size(), id_err, curve_err};
    });
    bool ok_id = true, ok_c = true;
    double wi = 0.0, wc = 0.0;
    for (std::size_t t = 0; t < res.size(); ++t) {
        const auto& r = res[t];
        wi = std::max(wi, r.id_err);
        wc = std::max(wc, r.curve_err);
        R.row({static_cast<long long>(t), static_cast<long long>(r.bu), static_cast<long long>(r.bv), r.id_err,
               r.curve_err});
        if (r.id_err > 1e-12) {
            ok_id = false;
            R.fail("trial " + std::to_string(t) + ": identity error " + fmt(r.id_err));
        }
        if (r.curve_err > 1e-10) {
            ok_c = false;
            R.fail("trial " + std::to_string(t) + ": curve error " + fmt(r.curve_err));
        }
    }
    R.check(4, "J(u, iv0) = i log(gamma_v0 o gamma_u)' + (1-i)u pointwise", ok_id, "max error " + fmt(wi));
    R.check(4, "gamma_J(u,iv) = gamma_iv o gamma_u at 1000 points", ok_c, "max error " + fmt(wc));
}

// ---------------------------------------------------------------- chain-rule

void suite_chain_rule(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"trial", "knots_f", "knots_g", "chain_exact", "chain_deviation", "inverse_exact"};
    struct Res {
        std::size_t kf, kg;
        bool chain;
        double dev;
        bool inv;
    };
    auto res = parallel_map<Res>(static_cast<std::size_t>(c.trials), [&](std::size_t t) {
        Rng rng(trial_seed(c.seed, t));
        PiecewiseLinearMap f = random_normalized_pl(rng), g = random_normalized_pl(rng);
        StepFunction lhs = log_derivative(compose(f, g));
        StepFunction rhs = pullback(g, log_derivative(f)) + log_derivative(g);
        bool inv = compose(f, invert(f)).is_identity() && compose(invert(f), f).is_identity();
        return Res{f.xs().size(), g.xs().size(), lhs == rhs, sup_deviation_mod_constant(lhs, rhs), inv};
    });
    bool ok_c = true, ok_i = true;
    for (std::size_t t = 0; t < res.size(); ++t) {
        const auto& r = res[t];
        R.row({static_cast<long long>(t), static_cast<long long>(r.kf), static_cast<long long>(r.kg), r.chain, r.dev,
               r.inv});
        if (!r.chain) {
            ok_c = false;
            R.fail("trial " + std::to_string(t) + ": chain rule not exact, deviation " + fmt(r.dev));
        }
        if (!r.inv) {
            ok_i = false;
            R.fail("trial " + std::to_string(t) + ": f o f^{-1} is not the identity");
        }
    }
    R.check(5, "log(f o g)' = P_g(log f') + log g' exactly", ok_c, "");
    R.check(5, "compose(f, invert(f)) = id exactly", ok_i, "");
}

// ---------------------------------------------------------------- hilbert

void suite_hilbert(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"check", "case", "value", "reference", "error", "tolerance"};
    // Closed form.
    double v3 = hilbert_step(StepFunction::indicator(-1.0, 1.0))(3.0).real();
    double ref3 = std::log(2.0) / kPi;
    R.row({"closed-form", "T(chi[-1,1])(3)", v3, ref3, std::abs(v3 - ref3), 1e-12});
    R.check(6, "T(chi[-1,1])(3) = log(2)/pi", std::abs(v3 - ref3) <= 1e-12, "error " + fmt(std::abs(v3 - ref3)));

    // T^2 = -I on the standard step set.
    auto set = standard_step_set();
    auto inv = parallel_map<InvolutionReport>(set.size(), [&](std::size_t i) { return check_involution(set[i].f, c.N); });
    bool ok_inv = true;
    double worst = 0.0;
    json raw = json::object();
    for (std::size_t i = 0; i < set.size(); ++i) {
        R.row({"involution", set[i].name, inv[i].residual, 0.0, inv[i].residual, 1e-3});
        raw[set[i].name] = inv[i].raw_residual;
        worst = std::max(worst, inv[i].residual);
        if (!(inv[i].residual < 1e-3)) {
            ok_inv = false;
            R.fail("T^2 v + v residual " + fmt(inv[i].residual) + " for " + set[i].name);
        }
    }
    R.extra["involution_raw_spectral_residual"] = raw;
    R.check(6, "T^2 v = -v mod constants on the standard step set", ok_inv,
            "N=" + std::to_string(c.N) + ", max residual " + fmt(worst));

    // Poisson pair.
    CayleyGrid g = CayleyGrid::make(c.N);
    std::vector<double> pv(g.x.size());
    for (std::size_t j = 0; j < pv.size(); ++j) pv[j] = 1.0 / (1.0 + g.x[j] * g.x[j]);
    SpectralResult T = hilbert_nodes(pv, g);
    double perr = 0.0;
    for (std::size_t j = 0; j < g.x.size(); ++j) {
        double x = g.x[j];
        if (std::abs(x) > 100.0) continue;
        double exact = x / (1.0 + x * x) - 3.0 / 10.0;
        perr = std::max(perr, std::abs(T.value.values()[j].real() - exact));
    }
    R.row({"poisson", "T(1/(1+x^2)) = x/(1+x^2), |x|<=100", perr, 0.0, perr, 1e-6});
    R.check(6, "Poisson pair", perr <= 1e-6 && !T.inconclusive, "max error " + fmt(perr));

    // Convention: the first-order welding exponent of a small wedge is the
    // coefficient of T(theta chi_[0,inf)).
    double th = 0.05;
    double coef = hilbert_step(StepFunction::heaviside(0.0, th)).terms().at(0).coef.real();
    WeldSampling ws;
    ws.N = 1024;
    WeldingResult w = welding_homeo(wedge_curve(th), ws);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t j = 0; j < w.s.size(); ++j) {
        if (w.s[j] < 0.1 || w.s[j] > 10.0) continue;
        double lx = std::log(w.s[j]), ly = std::log(w.f[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) - 1.0;
    double rel = slope / coef - 1.0;
    R.row({"convention", "welding exponent of wedge(0.05) against T coefficient", slope, coef, rel, 2.0 * th / kPi});
    R.check(6, "sign convention matches first-order sector welding", coef > 0 && std::abs(rel) <= 2.0 * th / kPi,
            "relative difference " + fmt(rel));
}

// ---------------------------------------------------------------- sector-welding

double sector_exact(double s, double theta) {
    double e = kPi / (kPi - theta);
    return (s > 0 ? 1.0 : -1.0) * std::pow(std::abs(s), e);
}

void suite_sector_welding(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"theta", "N", "max_relative_error", "worst_s", "fit_residual"};
    bool ok = true;
    R.svg_title = "welded f against sgn(s)|s|^(pi/(pi-theta))";
    for (double th : c.theta) {
        WeldSampling ws;
        ws.N = c.N;
        WeldingResult w = welding_homeo(wedge_curve(th), ws);
        double err = 0.0, worst = 0.0;
        io::SvgSeries a{"computed, theta=" + fmt(th), {}}, b{"exact, theta=" + fmt(th), {}};
        for (std::size_t j = 0; j < w.s.size(); ++j) {
            double s = w.s[j];
            if (std::abs(s) > 10.0) continue;
            double ex = sector_exact(s, th);
            a.points.emplace_back(s, w.f[j]);
            b.points.emplace_back(s, ex);
            if (std::abs(s) < 1e-2) continue;
            double e = std::abs(w.f[j] - ex) / std::abs(ex);
            if (e > err) {
                err = e;
                worst = s;
            }
        }
        R.series.push_back(a);
        R.series.push_back(b);
        R.row({th, static_cast<long long>(c.N), err, worst, w.fit_residual});
        if (!(err < 1e-3)) {
            ok = false;
            R.fail("theta=" + fmt(th) + ": relative error " + fmt(err) + " at s=" + fmt(worst));
        }
        R.extra["sampling"] = ws.to_string();
    }
    R.check(7, "welding matches the sector map to 1e-3 on 1e-2 <= |s| <= 10", ok, "");
}

// ---------------------------------------------------------------- linearization

void suite_linearization(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"eps", "residual", "ratio"};
    std::vector<double> grid;
    for (int i = 0; i <= 8000; ++i) grid.push_back(-1.0 + 2.0 * i / 8000.0);
    SampledFunction v = SampledFunction::from_callable(grid, [](double x) { return cplx(smooth_bump(x)); });
    CayleyGrid cg = CayleyGrid::make(1 << 16);
    std::vector<double> nv(cg.x.size());
    for (std::size_t j = 0; j < nv.size(); ++j) nv[j] = smooth_bump(cg.x[j]);
    SpectralResult T = hilbert_nodes(nv, cg);
    WeldSampling ws;
    ws.kind = WeldSampling::Kind::CoreGraded;
    ws.N = c.N;
    IntervalFamily fam = IntervalFamily::dyadic(-4.0, 4.0, 8);
    R.extra["sampling"] = ws.to_string();
    R.extra["family"] = fam.descriptor().to_string();
    R.extra["hilbert_tail_mass"] = T.tail_mass;
    std::vector<double> eps = c.eps;
    std::sort(eps.rbegin(), eps.rend());
    bool ok = true;
    double prev = 0.0;
    io::SvgSeries s{"residual", {}};
    for (double e : eps) {
        LambdaResult L = lambda_map(scale(Function(v), e), ws, false);
        double r = bmo_distance(Function(L.value), scale(Function(T.value), e), BmoMode::Family, &fam).value;
        s.points.emplace_back(e, r);
        if (prev > 0.0) {
            double ratio = prev / r;
            R.row({e, r, ratio});
            if (!(ratio >= 3.0 && ratio <= 5.0)) {
                ok = false;
                R.fail("eps=" + fmt(e) + ": residual ratio " + fmt(ratio));
            }
        } else {
            R.row({e, r, nullptr});
        }
        prev = r;
    }
    R.series.push_back(s);
    R.svg_title = "||lambda(i eps v) - eps T v|| against eps";
    R.log_x = true;
    R.check(8, "residual ratio per halving of eps in [3, 5]", ok, "");
}

// ---------------------------------------------------------------- chord-arc

void suite_chord_arc(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"case", "refinement", "constant", "expected", "gap", "pairs"};
    struct Case {
        std::string name;
        EmbeddingCurve curve;
        double expected;
    };
    std::vector<Case> cases = {{"line", EmbeddingCurve(StepFunction::constant(0.0)), 1.0},
                               {"wedge(pi/2)", wedge_curve(kPi / 2), std::sqrt(2.0)},
                               {"wedge(2pi/3)", wedge_curve(2 * kPi / 3), 2.0}};
    bool ok_line = true, ok_w = true;
    for (const auto& cs : cases) {
        double prev_gap = 1e300;
        double gap = 0.0;
        for (int ref : {1, 2, 4, 8}) {
            ChordArcSampler s;
            s.refinement = ref;
            s.seed = c.seed;
            ChordArcReport r = chord_arc_constant(cs.curve, s);
            gap = std::abs(r.constant - cs.expected);
            R.row({cs.name, static_cast<long long>(ref), r.constant, cs.expected, gap, static_cast<long long>(r.pairs)});
            if (cs.name == "line" && r.constant != 1.0) {
                ok_line = false;
                R.fail("line: constant " + fmt(r.constant) + " at refinement " + std::to_string(ref));
            }
            if (gap > prev_gap) {
                ok_w = false;
                R.fail(cs.name + ": gap grew to " + fmt(gap) + " at refinement " + std::to_string(ref));
            }
            prev_gap = gap;
        }
        if (cs.name != "line" && gap > 1e-6) {
            ok_w = false;
            R.fail(cs.name + ": final gap " + fmt(gap));
        }
        io::SvgSeries tr{cs.name, {}};
        for (int i = 0; i <= 400; ++i) {
            cplx z = cs.curve(-2.0 + 4.0 * i / 400.0);
            tr.points.emplace_back(z.real(), z.imag());
        }
        R.series.push_back(tr);
    }
    R.svg_title = "curve traces";
    R.equal_aspect = true;
    R.check(9, "line has constant exactly 1", ok_line, "");
    R.check(9, "wedge constants converge to 1/cos(theta/2) within 1e-6 under refinement", ok_w, "");
}

// ---------------------------------------------------------------- extension

void suite_extension(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"map", "k", "sup_mu", "sup_mu_stencil", "carleson", "field_error"};
    ExtensionGrid grid = ExtensionGrid::standard();
    IntervalFamily boxes = IntervalFamily::dyadic(-4.0, 4.0, 6);
    R.extra["carleson_boxes"] = boxes.descriptor().to_string();
    HeatExtensionField F = ba_heat_extension(MonotoneMap(PiecewiseLinearMap()), grid);
    BeltramiField mu = beltrami(F);
    BeltramiField mus = beltrami(F, DerivativeMethod::Stencil);
    double ferr = 0.0;
    for (std::size_t j = 0; j < grid.ys.size(); ++j)
        for (std::size_t i = 0; i < grid.xs.size(); ++i) {
            std::size_t id = F.index(i, j);
            double sc = std::max(1.0, std::hypot(grid.xs[i], grid.ys[j]));
            ferr = std::max(ferr, std::abs(cplx(F.U[id], F.V[id]) - cplx(grid.xs[i], grid.ys[j])) / sc);
        }
    double car_id = carleson_box_norm(mu, boxes).value;
    R.row({"id", 0.0, mu.sup_abs(), mus.sup_abs(), car_id, ferr});
    bool ok_id = mu.sup_abs() <= 1e-10 && ferr <= 1e-10;
    if (!ok_id) R.fail("identity: sup|mu| " + fmt(mu.sup_abs()) + ", field error " + fmt(ferr));
    R.check(10, "f = id gives F = z and mu = 0", ok_id, "sup|mu| " + fmt(mu.sup_abs()) + ", field error " + fmt(ferr));

    struct Res {
        double sup, sup_st, car;
    };
    auto res = parallel_map<Res>(c.k.size(), [&](std::size_t i) {
        HeatExtensionField G = ba_heat_extension(MonotoneMap(family_fk(c.k[i])), grid);
        BeltramiField m = beltrami(G);
        BeltramiField ms = beltrami(G, DerivativeMethod::Stencil);
        return Res{m.sup_abs(), ms.sup_abs(), carleson_box_norm(m, boxes).value};
    });
    bool ok_lt1 = true, ok_dec = true, ok_car = true;
    io::SvgSeries s1{"sup|mu|", {}}, s2{"Carleson box norm", {}};
    for (std::size_t i = 0; i < res.size(); ++i) {
        R.row({"f_k", c.k[i], res[i].sup, res[i].sup_st, res[i].car, nullptr});
        s1.points.emplace_back(c.k[i], res[i].sup);
        s2.points.emplace_back(c.k[i], res[i].car);
        if (!(res[i].sup < 1.0)) {
            ok_lt1 = false;
            R.fail("k=" + fmt(c.k[i]) + ": sup|mu| = " + fmt(res[i].sup));
        }
        if (i > 0 && !(res[i].sup < res[i - 1].sup)) {
            ok_dec = false;
            R.fail("k=" + fmt(c.k[i]) + ": sup|mu| not decreasing");
        }
        if (i > 0 && !(res[i].car < res[i - 1].car)) {
            ok_car = false;
            R.fail("k=" + fmt(c.k[i]) + ": Carleson norm not decreasing");
        }
    }
    R.series = {s1, s2};
    R.svg_title = "extension of f_k";
    R.log_x = true;
    R.check(10, "f_k: sup|mu| < 1", ok_lt1, "");
    R.check(10, "f_k: sup|mu| strictly decreasing in k", ok_dec, "");
    R.check(10, "f_k: Carleson box norm decreasing in k", ok_car, "");
}

// ---------------------------------------------------------------- reproducibility

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void suite_reproducibility(const ExperimentConfig& c, Recorder& R) {
    R.columns = {"suite", "file", "bytes", "identical"};
    namespace fs = std::filesystem;
    fs::path base = fs::path(c.out_dir) / "reproducibility";
    bool ok = true;
    int threads = omp_get_max_threads();
    for (const char* s : {"discontinuity", "indicator", "operator", "j-identity", "chain-rule", "chord-arc"}) {
        ExperimentConfig e;
        e.suite = s;
        e.seed = c.seed;
        e.write_csv = e.write_json = true;
        e.out_dir = (base / "run1").string();
        SuiteReport a = run_suite(e);
        // Second run single-threaded: aggregation must not depend on the schedule.
        omp_set_num_threads(1);
        e.out_dir = (base / "run2").string();
        SuiteReport b;
        try {
            b = run_suite(e);
        } catch (...) {
            omp_set_num_threads(threads);
            throw;
        }
        omp_set_num_threads(threads);
        for (const char* ext : {".csv", ".json"}) {
            std::string name = std::string(s) + ext;
            std::string x = slurp(base / "run1" / name), y = slurp(base / "run2" / name);
            bool same = !x.empty() && x == y;
            R.row({s, name, static_cast<long long>(x.size()), same});
            if (!same) {
                ok = false;
                R.fail(name + " differs between runs");
            }
        }
    }
    R.check(11, "reruns with the same seed are byte-identical", ok, "");
}

// ---------------------------------------------------------------- registry

using SuiteFn = void (*)(const ExperimentConfig&, Recorder&);

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r = {
        {"discontinuity", suite_discontinuity}, {"indicator", suite_indicator},
        {"operator", suite_operator},           {"j-identity", suite_j_identity},
        {"chain-rule", suite_chain_rule},       {"hilbert", suite_hilbert},
        {"sector-welding", suite_sector_welding}, {"linearization", suite_linearization},
        {"chord-arc", suite_chord_arc},         {"extension", suite_extension},
        {"reproducibility", suite_reproducibility}};
    return r;
}

json range_json(const std::vector<double>& v) { return v.empty() ? json(nullptr) : json(v); }

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"discontinuity", "indicator",      "operator",
                                                   "j-identity",    "chain-rule",     "hilbert",
                                                   "sector-welding", "linearization", "chord-arc",
                                                   "extension",     "reproducibility"};
    return names;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(trial) + 1;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

StepFunction random_step(Rng& rng, int max_breaks, double window) {
    int m = rng.integer(1, max_breaks);
    std::vector<double> b;
    for (int i = 0; i < m; ++i) b.push_back(rng.uniform(-window, window));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<cplx> v;
    for (std::size_t i = 0; i <= b.size(); ++i) v.push_back(rng.uniform(-1.0, 1.0));
    return StepFunction(b, v);
}

PiecewiseLinearMap random_normalized_pl(Rng& rng, int max_knots) {
    int m = rng.integer(0, max_knots);
    std::vector<double> b{0.0, 1.0};
    for (int i = 0; i < m; ++i) b.push_back(rng.uniform(-3.0, 3.0));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<double> slopes;
    for (std::size_t i = 0; i <= b.size(); ++i) slopes.push_back(std::exp(rng.uniform(-1.0, 1.0)));
    return PiecewiseLinearMap::from_slopes(b, slopes, 0.0, 0.0).normalize();
}

std::vector<NamedStep> standard_step_set() {
    return {{"chi[-1,1]", StepFunction::indicator(-1.0, 1.0)},
            {"chi[0,inf)", StepFunction::heaviside(0.0)},
            {"chi[0,1]-2chi[2,5]", StepFunction({0.0, 1.0, 2.0, 5.0}, {0.0, 1.0, 0.0, -2.0, 0.0})},
            {"three-level", StepFunction({-3.0, -1.0, 0.5, 4.0}, {0.0, 0.5, 1.0, -0.7, 0.0})},
            {"fine", StepFunction({-0.25, 0.0, 0.125, 0.5}, {0.0, -1.0, 2.0, 0.5, 0.0})}};
}

double smooth_bump(double x) { return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0; }

ExperimentConfig ExperimentConfig::resolved() const {
    ExperimentConfig c = *this;
    std::vector<double> ns{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    if (c.suite == "discontinuity" || c.suite == "operator") {
        if (c.k.empty()) c.k = {1, 2, 5};
        if (c.n.empty()) c.n = ns;
        require_sorted_unique(c.k);
        require_sorted_unique(c.n);
    } else if (c.suite == "indicator" || c.suite == "chain-rule") {
        if (c.trials == 0) c.trials = 100;
    } else if (c.suite == "j-identity") {
        if (c.trials == 0) c.trials = 50;
    } else if (c.suite == "hilbert") {
        if (c.N == 0) c.N = 1 << 14;
    } else if (c.suite == "sector-welding") {
        if (c.theta.empty()) c.theta = {kPi / 6, kPi / 4, kPi / 2};
        if (c.N == 0) c.N = 1 << 12;
    } else if (c.suite == "linearization") {
        if (c.eps.empty()) c.eps = {0.1, 0.05, 0.025};
        if (c.N == 0) c.N = 2000;
    } else if (c.suite == "extension") {
        if (c.k.empty()) c.k = {1, 2, 4, 8};
        require_sorted_unique(c.k);
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (!registry().count(suite)) throw InvalidInputError("unknown suite '" + suite + "'");
    auto positive = [](const std::vector<double>& v, const char* what) {
        for (double x : v)
            if (!(x > 0) || !std::isfinite(x)) throw InvalidInputError(std::string(what) + " values must be positive");
    };
    positive(k, "k");
    positive(n, "n");
    positive(eps, "eps");
    for (double t : theta)
        if (!(std::abs(t) < kPi) || t == 0.0) throw InvalidInputError("theta must satisfy 0 < |theta| < pi");
    if (N < 0 || trials < 0) throw InvalidInputError("N and trials must be nonnegative");
    ExperimentConfig r = resolved();
    if ((suite == "discontinuity" || suite == "operator" || suite == "extension") && r.k.empty())
        throw InvalidInputError("empty k range");
    if (suite == "hilbert" && (r.N < 16 || (r.N & (r.N - 1)) != 0))
        throw InvalidInputError("hilbert: N must be a power of two >= 16");
    if (suite == "sector-welding" && r.N < 64) throw InvalidInputError("sector-welding: N must be at least 64");
    if (suite == "linearization" && r.eps.size() < 2) throw InvalidInputError("linearization: need two eps values");
    if (suite == "linearization" && r.N < 64) throw InvalidInputError("linearization: N must be at least 64");
    if (out_dir.empty()) throw InvalidInputError("empty output directory");
}

SuiteReport run_suite(const ExperimentConfig& config) {
    config.validate();
    ExperimentConfig c = config.resolved();
    Recorder R;
    registry().at(c.suite)(c, R);

    SuiteReport rep;
    rep.suite = c.suite;
    rep.assertions = R.assertions;
    rep.failures = R.failures;
    rep.passed = !R.assertions.empty();
    for (const auto& a : R.assertions) rep.passed = rep.passed && a.passed;

    io::CsvTable t(R.columns);
    for (const auto& r : R.rows) {
        std::vector<std::string> cells;
        for (const auto& v : r) cells.push_back(cell(v));
        t.add_row(std::move(cells));
    }
    rep.csv = t.str();

    json asserts = json::array();
    for (const auto& a : R.assertions)
        asserts.push_back({{"criterion", a.criterion}, {"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    rep.summary = {{"schema", io::kSchema},
                   {"suite", c.suite},
                   {"seed", c.seed},
                   {"config",
                    {{"k", range_json(c.k)},
                     {"n", range_json(c.n)},
                     {"eps", range_json(c.eps)},
                     {"theta", range_json(c.theta)},
                     {"N", c.N},
                     {"trials", c.trials}}},
                   {"passed", rep.passed},
                   {"assertions", asserts},
                   {"failures", R.failures},
                   {"columns", R.columns},
                   {"rows", R.rows}};
    for (auto it = R.extra.begin(); it != R.extra.end(); ++it) rep.summary[it.key()] = it.value();
    if (c.write_svg && !R.series.empty())
        rep.svg = io::svg_plot(c.suite + ": " + R.svg_title, R.series, R.log_x, R.equal_aspect);

    namespace fs = std::filesystem;
    fs::create_directories(c.out_dir);
    fs::path base = fs::path(c.out_dir) / c.suite;
    auto emit = [&](const std::string& ext, const std::string& text) {
        std::string p = base.string() + ext;
        io::write_text_file(p, text);
        rep.files.push_back(p);
    };
    if (c.write_csv) emit(".csv", rep.csv);
    if (c.write_json) emit(".json", io::dump(rep.summary));
    if (!rep.svg.empty()) emit(".svg", rep.svg);
    return rep;
}

}  // namespace chordarc
