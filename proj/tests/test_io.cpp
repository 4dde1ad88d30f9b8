#include <cmath>
#include <filesystem>

#include "chordarc/io.hpp"
#include "doctest.h"

using namespace chordarc;
using io::json;

TEST_CASE("function round trips") {
    std::vector<Function> fs = {
        StepFunction({-1.0, 0.1, 2.0}, {cplx(0.1, 0.2), 1.0 / 3.0, cplx(0, -1e-300), 0.0}),
        SampledFunction({-1.0, 0.3, 1.0}, {1.0, cplx(2.0, 0.1), M_PI}, Tail::log(0.5),
                        Tail::hold()),
        LogSumFunction({{0.0, 1.0 / M_PI}, {1.0, -1.0 / M_PI}}, 0.25)};
    for (const Function& f : fs) {
        json j = io::to_json(f);
        Function g = io::function_from_json(json::parse(j.dump()));
        CHECK(io::to_json(g) == j);
        for (double x : {-2.0, 0.2, 0.5, 3.0}) CHECK(evaluate(f, x) == evaluate(g, x));
    }
}

TEST_CASE("map round trips are exact") {
    PiecewiseLinearMap f = family_fk(3.0);
    MonotoneMap g = io::map_from_json(json::parse(io::to_json(MonotoneMap(f)).dump()));
    CHECK(std::get<PiecewiseLinearMap>(g) == f);
    IntegralMap im(SampledFunction(std::vector<double>{0.0, 1.0}, std::vector<cplx>{0.0, 0.5}));
    MonotoneMap h = io::map_from_json(io::to_json(MonotoneMap(im)));
    CHECK(chordarc::apply(h, 0.7) == im(0.7));
}

TEST_CASE("curves accept wrapped and bare functions") {
    json w = io::to_json(Function(StepFunction::heaviside(0.0, cplx(0, 1))));
    EmbeddingCurve a = io::curve_from_json(json{{"kind", "curve"}, {"w", w}});
    EmbeddingCurve b = io::curve_from_json(w);
    CHECK(a(2.0) == b(2.0));
}

TEST_CASE("malformed documents are invalid input") {
    CHECK_THROWS_AS(io::function_from_json(json{{"kind", "mystery"}}), InvalidInputError);
    CHECK_THROWS_AS(io::function_from_json(json{{"kind", "step"}, {"breakpoints", {0.0}}}), InvalidInputError);
    CHECK_THROWS_AS(io::function_from_json(json{{"kind", "step"}, {"breakpoints", {1.0, 0.0}}, {"values", {0, 1, 2}}}),
                    InvalidInputError);
    CHECK_THROWS_AS(io::function_from_json(json{{"kind", "step"}, {"breakpoints", {0.0}}, {"values", {"a", 1}}}),
                    InvalidInputError);
    CHECK_THROWS_AS(io::complex_from_json(json{1, 2, 3}), InvalidInputError);
    CHECK_THROWS_AS(io::map_from_json(json{{"kind", "pwl"}}), InvalidInputError);
    CHECK_THROWS_AS(io::read_json_file("/nonexistent/file.json"), InvalidInputError);
    auto p = std::filesystem::temp_directory_path() / "chordarc_bad.json";
    io::write_text_file(p.string(), "{ not json");
    CHECK_THROWS_AS(io::read_json_file(p.string()), InvalidInputError);
    std::filesystem::remove(p);
}

TEST_CASE("numbers are written at full precision") {
    CHECK(io::fmt(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::fmt(M_PI)) == M_PI);
    io::CsvTable t({"a", "b"});
    t.add_row({io::fmt(1.0 / 3.0), "x"});
    CHECK(t.str() == "a,b\n0.33333333333333331,x\n");
    CHECK_THROWS(t.add_row({"1"}));
    CHECK(json::parse(io::to_json(cplx(0.1, 1.0 / 3.0)).dump())[1].get<double>() == 1.0 / 3.0);
}

TEST_CASE("svg output is a standalone document") {
    std::string s = io::svg_plot("t", {{"a", {{1.0, 2.0}, {10.0, 3.0}}}}, true);
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("polyline") != std::string::npos);
}
