#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chordarc/bmo.hpp"
#include "chordarc/embedding.hpp"
#include "chordarc/experiments.hpp"
#include "chordarc/extension.hpp"
#include "chordarc/hilbert.hpp"
#include "chordarc/io.hpp"
#include "chordarc/parallel.hpp"
#include "chordarc/weights.hpp"
#include "chordarc/welding.hpp"

using namespace chordarc;
using io::fmt;
using io::json;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::string svg;
};

void emit(const Common& c, const std::string& text) {
    if (c.out.empty())
        std::cout << text;
    else
        io::write_text_file(c.out, text);
}

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out", c.out, "output file (stdout if omitted)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--svg", c.svg, "write an SVG plot to this file");
}

std::vector<double> all_breaks(const Function& f) {
    std::vector<double> b;
    collect_breaks(f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), b);
    return b;
}

IntervalFamily make_family(const Function& f, int depth, double window) {
    IntervalFamily fam = IntervalFamily::dyadic(-window, window, depth);
    auto b = all_breaks(f);
    if (!b.empty()) fam.add_straddling(b, -20, 16);
    return fam;
}

int run_bmo(const Common& c, const std::string& input, const std::string& mode, int depth, double window) {
    Function f = io::function_from_json(io::read_json_file(input));
    bool exact = mode == "exact" || (mode == "auto" && std::holds_alternative<StepFunction>(f));
    BmoResult r;
    IntervalFamily fam;
    if (exact) {
        r = bmo_norm(f, BmoMode::Exact);
    } else {
        fam = make_family(f, depth, window);
        r = bmo_norm(f, BmoMode::Family, &fam);
    }
    if (c.format == "csv") {
        io::CsvTable t({"value", "witness_a", "witness_b", "certified", "mode"});
        t.add_row({fmt(r.value), fmt(r.witness.a), fmt(r.witness.b), r.certified ? "true" : "false",
                   exact ? "exact" : "family"});
        emit(c, t.str());
    } else {
        json j = io::to_json(r);
        j["schema"] = io::kSchema;
        j["kind"] = kind_name(f);
        if (!exact) j["family"] = fam.descriptor().to_string();
        emit(c, io::dump(j));
    }
    return 0;
}

int run_weight(const Common& c, const std::string& input, double p, int depth) {
    Function u = io::function_from_json(io::read_json_file(input));
    BmoStarOptions opt;
    opt.p = p;
    opt.sampler.seed = c.seed;
    IntervalFamily fam = make_family(u, depth, 65536.0);
    WeightReport r = is_bmo_star(u, opt, &fam);
    if (c.format == "csv") {
        io::CsvTable t({"p", "ap_constant", "reverse_jensen", "alpha", "bmo_norm", "verdict"});
        t.add_row({fmt(r.p), r.ap.divergent ? "inf" : fmt(r.ap.value),
                   r.reverse_jensen.divergent ? "inf" : fmt(r.reverse_jensen.value), fmt(r.doubling.alpha),
                   fmt(r.bmo_norm), verdict_name(r.verdict)});
        emit(c, t.str());
    } else {
        emit(c, io::dump(io::to_json(r)));
    }
    return 0;
}

int run_hilbert(const Common& c, const std::string& input, const std::string& method, int N) {
    Function v = io::function_from_json(io::read_json_file(input));
    if (!is_real(v)) throw InvalidInputError("hilbert: input must be real");
    if (method == "step") {
        auto* s = std::get_if<StepFunction>(&v);
        if (!s) throw InvalidInputError("hilbert: method step needs a step function");
        LogSumFunction t = hilbert_step(*s);
        if (c.format == "csv") {
            io::CsvTable tab({"at", "re_coef", "im_coef"});
            for (const auto& term : t.terms())
                tab.add_row({fmt(term.at), fmt(term.coef.real()), fmt(term.coef.imag())});
            emit(c, tab.str());
        } else {
            json j = io::to_json(t);
            j["schema"] = io::kSchema;
            emit(c, io::dump(j));
        }
        return 0;
    }
    if (N < 16 || (N & (N - 1)) != 0) throw InvalidInputError("hilbert: N must be a power of two >= 16");
    CayleyGrid g = CayleyGrid::make(N);
    std::vector<double> vals(g.x.size());
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = evaluate(v, g.x[j]).real();
    SpectralResult r = hilbert_nodes(vals, g);
    if (r.inconclusive) std::cerr << "warning: spectral tail mass " << fmt(r.tail_mass) << " above tolerance\n";
    if (c.format == "csv") {
        io::CsvTable tab({"x", "Tv"});
        for (std::size_t j = 0; j < g.x.size(); ++j) tab.add_row({fmt(g.x[j]), fmt(r.value.values()[j].real())});
        emit(c, tab.str());
    } else {
        json j = {{"schema", io::kSchema},
                  {"N", N},
                  {"anchor", 3.0},
                  {"tail_mass", r.tail_mass},
                  {"inconclusive", r.inconclusive},
                  {"value", io::to_json(Function(r.value))}};
        emit(c, io::dump(j));
    }
    return 0;
}

int run_curve(const Common& c, const std::string& input, bool chord_arc, double a, double b, int count) {
    EmbeddingCurve g = io::curve_from_json(io::read_json_file(input));
    if (count < 2 || !(b > a)) throw InvalidInputError("curve: need count >= 2 and a < b");
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
    if (c.format == "csv") {
        io::CsvTable t({"x", "re_gamma", "im_gamma"});
        for (double x : xs) {
            cplx z = g(x);
            t.add_row({fmt(x), fmt(z.real()), fmt(z.imag())});
        }
        emit(c, t.str());
    } else {
        json j = {{"schema", io::kSchema}, {"kind", "curve"}, {"w", io::to_json(g.w())},
                  {"normalizer", io::to_json(g.normalizer())}};
        if (chord_arc) {
            ChordArcSampler s;
            s.seed = c.seed;
            j["chord_arc"] = io::to_json(chord_arc_constant(g, s));
        }
        emit(c, io::dump(j));
    }
    if (!c.svg.empty()) {
        io::SvgSeries s{"gamma", {}};
        for (double x : xs) s.points.emplace_back(g(x).real(), g(x).imag());
        io::write_text_file(c.svg, io::svg_plot("curve trace", {s}, false, true));
    }
    return 0;
}

int run_weld(const Common& c, const std::string& input, int N, const std::string& side, const std::string& sampling) {
    EmbeddingCurve g = io::curve_from_json(io::read_json_file(input));
    WeldSampling ws;
    ws.N = N;
    if (sampling == "core-graded") ws.kind = WeldSampling::Kind::CoreGraded;
    WeldingResult r = welding_homeo(g, ws, side == "right" ? Side::Right : Side::Left);
    if (c.format == "csv") {
        io::CsvTable t({"s", "f", "re_h", "im_h", "log_fprime"});
        for (std::size_t j = 0; j < r.s.size(); ++j)
            t.add_row({fmt(r.s[j]), fmt(r.f[j]), fmt(r.h[j].real()), fmt(r.h[j].imag()),
                       fmt(r.log_fprime.values()[j].real())});
        emit(c, t.str());
    } else {
        emit(c, io::dump(io::to_json(r)));
    }
    if (!c.svg.empty()) {
        io::SvgSeries s{"f", {}};
        for (std::size_t j = 0; j < r.s.size(); ++j)
            if (std::abs(r.s[j]) <= 10.0) s.points.emplace_back(r.s[j], r.f[j]);
        io::write_text_file(c.svg, io::svg_plot("welding homeomorphism", {s}));
    }
    return 0;
}

int run_extension(const Common& c, const std::string& input, const std::string& grid_name, const std::string& method) {
    MonotoneMap f = io::map_from_json(io::read_json_file(input));
    if (grid_name != "default") throw InvalidInputError("extension: only --grid default is available");
    ExtensionGrid grid = ExtensionGrid::standard();
    HeatExtensionField F = ba_heat_extension(f, grid);
    BeltramiField mu = beltrami(F, method == "stencil" ? DerivativeMethod::Stencil : DerivativeMethod::Auto);
    if (c.format == "csv") {
        emit(c, io::field_csv(F, mu));
    } else {
        IntervalFamily boxes = IntervalFamily::dyadic(-4.0, 4.0, 6);
        CarlesonReport car = carleson_box_norm(mu, boxes);
        json j = {{"schema", io::kSchema},
                  {"map", io::to_json(f)},
                  {"nx", grid.xs.size()},
                  {"ny", grid.ys.size()},
                  {"analytic_derivatives", mu.analytic},
                  {"sup_mu", mu.sup_abs()},
                  {"carleson", {{"value", car.value},
                                {"witness", io::to_json(car.witness)},
                                {"boxes", boxes.descriptor().to_string()},
                                {"y_min", car.y_min},
                                {"y_max", car.y_max}}}};
        emit(c, io::dump(j));
    }
    return 0;
}

int run_experiment(ExperimentConfig cfg, const std::string& format) {
    cfg.write_csv = format != "json";
    cfg.write_json = format != "csv";
    std::vector<std::string> suites;
    if (cfg.suite == "all")
        suites = suite_names();
    else
        suites = {cfg.suite};
    bool all = true;
    for (const auto& s : suites) {
        ExperimentConfig c = cfg;
        c.suite = s;
        c.validate();
        SuiteReport r = run_suite(c);
        for (const auto& a : r.assertions)
            std::cout << (a.passed ? "PASS" : "FAIL") << " [" << r.suite << "] criterion " << a.criterion << ": "
                      << a.name << (a.detail.empty() ? "" : " (" + a.detail + ")") << "\n";
        for (const auto& f : r.failures) std::cerr << "  failing case [" << r.suite << "]: " << f << "\n";
        for (const auto& f : r.files) std::cout << "  wrote " << f << "\n";
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();
    CLI::App app{"chordarc: BMO embeddings, chord-arc curves and conformal welding"};
    app.require_subcommand(1);

    Common cb, cw, ch, cc, cwe, ce;
    std::string in_b, mode_b = "auto";
    int depth_b = 12;
    double window_b = 65536.0;
    auto* b = app.add_subcommand("bmo-norm", "BMO norm of a function");
    b->add_option("--input", in_b, "function JSON")->required();
    b->add_option("--mode", mode_b)->check(CLI::IsMember({"auto", "exact", "family"}));
    b->add_option("--depth", depth_b, "dyadic depth of the family");
    b->add_option("--window", window_b, "family window half-width");
    add_common(b, cb, "json");

    std::string in_w;
    double p_w = 2.0;
    int depth_w = 12;
    auto* w = app.add_subcommand("weight-check", "A_p / A_infinity diagnostics of e^u");
    w->add_option("--input", in_w, "function JSON")->required();
    w->add_option("--p", p_w);
    w->add_option("--depth", depth_w);
    add_common(w, cw, "json");

    std::string in_h, method_h = "step";
    int N_h = 1 << 14;
    auto* h = app.add_subcommand("hilbert", "Hilbert transform");
    h->add_option("--input", in_h, "function JSON")->required();
    h->add_option("--method", method_h)->check(CLI::IsMember({"step", "spectral"}));
    h->add_option("--N", N_h);
    add_common(h, ch, "json");

    std::string in_c;
    bool chord_c = false;
    std::vector<double> range_c{-4.0, 4.0};
    int count_c = 801;
    auto* c = app.add_subcommand("curve", "curve from its log-derivative");
    c->add_option("--input", in_c, "curve or function JSON")->required();
    c->add_flag("--chord-arc", chord_c, "estimate the chord-arc constant");
    c->add_option("--range", range_c, "parameter range a b")->expected(2);
    c->add_option("--count", count_c);
    add_common(c, cc, "json");

    std::string in_we, side_we = "left", sampling_we = "geometric";
    int N_we = 4096;
    auto* we = app.add_subcommand("weld", "conformal welding of a curve");
    we->add_option("--curve", in_we, "curve JSON")->required();
    we->add_option("--N", N_we);
    we->add_option("--side", side_we)->check(CLI::IsMember({"left", "right"}));
    we->add_option("--sampling", sampling_we)->check(CLI::IsMember({"geometric", "core-graded"}));
    add_common(we, cwe, "json");

    std::string in_e, grid_e = "default", method_e = "auto";
    auto* e = app.add_subcommand("extension", "heat-kernel extension and Beltrami coefficient");
    e->add_option("--map", in_e, "map JSON")->required();
    e->add_option("--grid", grid_e);
    e->add_option("--method", method_e)->check(CLI::IsMember({"auto", "stencil"}));
    add_common(e, ce, "csv");

    ExperimentConfig cfg;
    std::string format_x = "both";
    bool svg_x = false;
    cfg.out_dir = "results";
    auto* x = app.add_subcommand("experiment", "run an experiment suite");
    std::vector<std::string> choices = suite_names();
    choices.push_back("all");
    x->add_option("suite", cfg.suite, "suite name")->required()->check(CLI::IsMember(choices));
    x->add_option("--k", cfg.k)->delimiter(',');
    x->add_option("--n", cfg.n)->delimiter(',');
    x->add_option("--eps", cfg.eps)->delimiter(',');
    x->add_option("--theta", cfg.theta)->delimiter(',');
    x->add_option("--N", cfg.N);
    x->add_option("--trials", cfg.trials);
    x->add_option("--seed", cfg.seed);
    x->add_option("--out", cfg.out_dir, "output directory");
    x->add_option("--format", format_x)->check(CLI::IsMember({"csv", "json", "both"}));
    x->add_flag("--svg", svg_x, "also write an SVG plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*b) return run_bmo(cb, in_b, mode_b, depth_b, window_b);
        if (*w) return run_weight(cw, in_w, p_w, depth_w);
        if (*h) return run_hilbert(ch, in_h, method_h, N_h);
        if (*c) return run_curve(cc, in_c, chord_c, range_c[0], range_c[1], count_c);
        if (*we) return run_weld(cwe, in_we, N_we, side_we, sampling_we);
        if (*e) return run_extension(ce, in_e, grid_e, method_e);
        if (*x) {
            cfg.write_svg = svg_x;
            return run_experiment(cfg, format_x);
        }
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const PreconditionError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const UnsupportedModeError& err) {
        std::cerr << "unsupported: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
