#include "chordarc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chordarc::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw InvalidInputError(msg); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<double> doubles(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<double> v;
    for (const auto& e : j) {
        if (!e.is_number()) bad(std::string(what) + " must contain numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

std::vector<cplx> complexes(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<cplx> v;
    for (const auto& e : j) v.push_back(complex_from_json(e));
    return v;
}

json tail_json(const Tail& t) {
    if (t.kind == Tail::Kind::Hold) return "hold";
    return json{{"log", to_json(t.coef)}};
}

Tail tail_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "hold") return Tail::hold();
    if (j.is_object() && j.contains("log")) return Tail::log(complex_from_json(j.at("log")));
    bad("tail must be \"hold\" or {\"log\": coef}");
}

template <class F>
auto guarded(F f) -> decltype(f()) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw InvalidInputError(e.what());
    } catch (const json::exception& e) {
        throw InvalidInputError(e.what());
    }
}

}  // namespace

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const LogSumFunction& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) terms.push_back({{"at", t.at}, {"coef", to_json(t.coef)}});
    return {{"kind", "logsum"}, {"terms", terms}, {"constant", to_json(f.constant())}};
}

json to_json(const Function& f) {
    if (auto* s = std::get_if<StepFunction>(&f)) {
        json vals = json::array();
        for (auto v : s->values()) vals.push_back(to_json(v));
        return {{"kind", "step"}, {"breakpoints", s->breakpoints()}, {"values", vals}};
    }
    if (auto* s = std::get_if<SampledFunction>(&f)) {
        json vals = json::array();
        for (auto v : s->values()) vals.push_back(to_json(v));
        return {{"kind", "sampled"},
                {"grid", s->grid()},
                {"values", vals},
                {"tail", {{"left", tail_json(s->left_tail())}, {"right", tail_json(s->right_tail())}}}};
    }
    return to_json(std::get<LogSumFunction>(f));
}

json to_json(const PiecewiseLinearMap& f) {
    return {{"kind", "pwl"},
            {"breakpoints", f.xs()},
            {"slopes", f.slopes()},
            {"anchor", {f.xs()[0], f.ys()[0]}},
            {"normalized", f.normalized()},
            {"ys", f.ys()},
            {"log_slopes", f.log_slopes()}};
}

json to_json(const MonotoneMap& f) {
    if (auto* p = std::get_if<PiecewiseLinearMap>(&f)) return to_json(*p);
    return {{"kind", "integral"}, {"u", to_json(Function(std::get<IntegralMap>(f).u()))}};
}

json to_json(Interval I) { return json::array({I.a, I.b}); }

json to_json(const BmoResult& r) {
    return {{"value", r.value},
            {"witness", to_json(r.witness)},
            {"certified", r.certified},
            {"mode", r.mode == BmoMode::Exact ? "exact" : "family"},
            {"evaluations", r.evaluations}};
}

json to_json(const FamilySup& r) {
    json j = {{"witness", to_json(r.witness)}, {"divergent", r.divergent}};
    j["value"] = r.divergent ? json(nullptr) : json(r.value);
    return j;
}

json to_json(const DoublingFit& r) {
    json parts = json::array();
    for (const auto& p : r.witness_E.parts) parts.push_back(to_json(p));
    return {{"K", r.K},          {"alpha", r.alpha},       {"witness_I", to_json(r.witness_I)},
            {"witness_E", parts}, {"pairs", r.pairs},        {"divergent", r.divergent}};
}

json to_json(const WeightReport& r) {
    return {{"schema", kSchema},
            {"p", r.p},
            {"ap_constant", to_json(r.ap)},
            {"reverse_jensen", to_json(r.reverse_jensen)},
            {"doubling_fit", to_json(r.doubling)},
            {"family", r.family.to_string()},
            {"bmo_norm", r.bmo_norm},
            {"bmo_norm_certified", r.bmo_norm_certified},
            {"fast_path", r.fast_path},
            {"verdict", verdict_name(r.verdict)}};
}

json to_json(const ChordArcReport& r) {
    return {{"constant", r.constant}, {"witness", {r.a, r.b}}, {"pairs", r.pairs}, {"sampler", r.sampler}};
}

json to_json(const WeldingResult& r) {
    json h = json::array();
    for (auto z : r.h) h.push_back(to_json(z));
    return {{"schema", kSchema},
            {"N", r.N},
            {"sampling", r.sampling},
            {"fit_residual", r.fit_residual},
            {"s", r.s},
            {"f", r.f},
            {"h", h},
            {"log_fprime", to_json(Function(r.log_fprime))}};
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    bad("complex value must be a number or [re, im]");
}

Function function_from_json(const json& j) {
    return guarded([&]() -> Function {
        std::string kind = field(j, "kind").get<std::string>();
        if (kind == "step")
            return StepFunction(doubles(field(j, "breakpoints"), "breakpoints"), complexes(field(j, "values"), "values"));
        if (kind == "sampled") {
            Tail l, r;
            if (j.contains("tail")) {
                const auto& t = j.at("tail");
                if (t.contains("left")) l = tail_from_json(t.at("left"));
                if (t.contains("right")) r = tail_from_json(t.at("right"));
            }
            return SampledFunction(doubles(field(j, "grid"), "grid"), complexes(field(j, "values"), "values"), l, r);
        }
        if (kind == "logsum") {
            std::vector<LogTerm> terms;
            for (const auto& t : field(j, "terms"))
                terms.push_back({field(t, "at").get<double>(), complex_from_json(field(t, "coef"))});
            cplx c = j.contains("constant") ? complex_from_json(j.at("constant")) : cplx(0.0);
            return LogSumFunction(std::move(terms), c);
        }
        bad("unknown function kind '" + kind + "'");
    });
}

MonotoneMap map_from_json(const json& j) {
    return guarded([&]() -> MonotoneMap {
        std::string kind = field(j, "kind").get<std::string>();
        if (kind == "pwl") {
            bool normalized = j.value("normalized", false);
            if (j.contains("ys") && j.contains("log_slopes"))
                return PiecewiseLinearMap(doubles(field(j, "breakpoints"), "breakpoints"), doubles(j.at("ys"), "ys"),
                                          doubles(j.at("log_slopes"), "log_slopes"), normalized);
            auto anchor = doubles(field(j, "anchor"), "anchor");
            if (anchor.size() != 2) bad("anchor must be [x0, y0]");
            return PiecewiseLinearMap::from_slopes(doubles(field(j, "breakpoints"), "breakpoints"),
                                                   doubles(field(j, "slopes"), "slopes"), anchor[0], anchor[1],
                                                   normalized);
        }
        if (kind == "integral") return gamma_from_u(function_from_json(field(j, "u")));
        bad("unknown map kind '" + kind + "'");
    });
}

EmbeddingCurve curve_from_json(const json& j) {
    return guarded([&]() {
        if (j.is_object() && j.value("kind", "") == "curve") return EmbeddingCurve(function_from_json(field(j, "w")));
        return EmbeddingCurve(function_from_json(j));
    });
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("csv: row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

std::string field_csv(const HeatExtensionField& F, const BeltramiField& mu) {
    CsvTable t({"x", "y", "U", "V", "re_mu", "im_mu"});
    const auto& g = F.grid;
    for (std::size_t j = 0; j < g.ys.size(); ++j)
        for (std::size_t i = 0; i < g.xs.size(); ++i) {
            std::size_t id = F.index(i, j);
            t.add_row({fmt(g.xs[i]), fmt(g.ys[j]), fmt(F.U[id]), fmt(F.V[id]), fmt(mu.mu[id].real()),
                       fmt(mu.mu[id].imag())});
        }
    return t.str();
}

std::string svg_plot(const std::string& title, const std::vector<SvgSeries>& series, bool log_x, bool equal_aspect) {
    const double W = 640, H = 420, m = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto X = [&](double x) { return log_x ? std::log10(x) : x; };
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(X(x)) || !std::isfinite(y)) continue;
            x0 = std::min(x0, X(x));
            x1 = std::max(x1, X(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    if (equal_aspect) {
        double sx = (x1 - x0) / (W - 2 * m), sy = (y1 - y0) / (H - 2 * m), s = std::max(sx, sy);
        double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        x0 = cx - s * (W - 2 * m) / 2;
        x1 = cx + s * (W - 2 * m) / 2;
        y0 = cy - s * (H - 2 * m) / 2;
        y1 = cy + s * (H - 2 * m) / 2;
    }
    auto px = [&](double x) { return m + (X(x) - x0) / (x1 - x0) * (W - 2 * m); };
    auto py = [&](double y) { return H - m - (y - y0) / (y1 - y0) * (H - 2 * m); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m << "\" height=\"" << H - 2 * m
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << m << "\" y=\"" << H - m + 16 << "\" font-family=\"sans-serif\" font-size=\"10\">"
       << (log_x ? "1e" : "") << x0 << "</text>\n";
    os << "<text x=\"" << W - m << "\" y=\"" << H - m + 16
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << (log_x ? "1e" : "") << x1
       << "</text>\n";
    os << "<text x=\"" << m - 4 << "\" y=\"" << H - m << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"10\">"
       << y0 << "</text>\n";
    os << "<text x=\"" << m - 4 << "\" y=\"" << m + 8 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"10\">"
       << y1 << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* c = colors[k % 6];
        os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[k].points)
            if (std::isfinite(X(x)) && std::isfinite(y)) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - m - 4 << "\" y=\"" << m + 14 + 14 * static_cast<double>(k)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << c << "\">"
           << series[k].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace chordarc::io
