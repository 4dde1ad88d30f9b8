#include <filesystem>
#include <fstream>
#include <sstream>

#include "chordarc/experiments.hpp"
#include "doctest.h"

using namespace chordarc;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("chordarc_test_" + name);
    fs::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("seeded generators are deterministic") {
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
    Rng a(trial_seed(4, 2)), b(trial_seed(4, 2));
    CHECK(random_step(a) == random_step(b));
    PiecewiseLinearMap f = random_normalized_pl(a);
    CHECK(f.normalized());
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 1.0);
}

TEST_CASE("configuration validation") {
    ExperimentConfig c;
    c.suite = "nope";
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c.suite = "hilbert";
    c.N = 1000;
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c.N = 1024;
    CHECK_NOTHROW(c.validate());
    c.suite = "sector-welding";
    c.theta = {4.0};
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c.theta = {};
    c.suite = "discontinuity";
    c.k = {-1.0};
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    c.k = {};
    c.suite = "linearization";
    c.eps = {0.1};
    CHECK_THROWS_AS(c.validate(), InvalidInputError);
    ExperimentConfig d;
    d.suite = "sector-welding";
    ExperimentConfig r = d.resolved();
    CHECK(r.theta.size() == 3);
    CHECK(r.N == 4096);
    CHECK(suite_names().size() == 11);
}

TEST_CASE("suite outputs are byte-identical across reruns") {
    fs::path a = scratch("a"), b = scratch("b");
    ExperimentConfig c;
    c.suite = "discontinuity";
    c.k = {2};
    c.n = {10, 1000};
    c.seed = 9;
    c.write_svg = true;
    c.out_dir = a.string();
    SuiteReport ra = run_suite(c);
    c.out_dir = b.string();
    SuiteReport rb = run_suite(c);
    CHECK(ra.passed);
    REQUIRE(ra.files.size() == 3);
    for (const char* n : {"discontinuity.csv", "discontinuity.json", "discontinuity.svg"})
        CHECK(slurp(a / n) == slurp(b / n));
    CHECK(ra.csv == rb.csv);
    CHECK(ra.summary["schema"] == "chordarc-lab/1");
    CHECK(ra.summary["seed"] == 9);
    c.suite = "indicator";
    c.k = {};
    c.n = {};
    c.trials = 10;
    c.write_csv = c.write_json = c.write_svg = false;
    std::string first = run_suite(c).csv;
    CHECK(run_suite(c).csv == first);
    c.seed = 10;
    CHECK(run_suite(c).csv != first);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("small suites pass") {
    fs::path d = scratch("small");
    ExperimentConfig c;
    c.out_dir = d.string();
    c.write_csv = c.write_json = false;
    for (const char* s : {"discontinuity", "operator", "chain-rule", "j-identity", "chord-arc"}) {
        c.suite = s;
        c.trials = 5;
        SuiteReport r = run_suite(c);
        INFO(s);
        CHECK(r.passed);
        CHECK(r.files.empty());
        CHECK_FALSE(r.assertions.empty());
    }
    fs::remove_all(d);
}

TEST_CASE("bump function") {
    CHECK(smooth_bump(0.0) == 1.0);
    CHECK(smooth_bump(1.0) == 0.0);
    CHECK(smooth_bump(-0.5) == smooth_bump(0.5));
}
