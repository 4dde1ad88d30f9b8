#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chordarc/io.hpp"
#include "chordarc/monotone_map.hpp"

namespace chordarc {

struct ExperimentConfig {
    std::string suite;
    std::vector<double> k;
    std::vector<double> n;
    std::vector<double> eps;
    std::vector<double> theta;
    int N = 0;       // grid or sample count; 0 selects the suite default
    int trials = 0;  // seeded trials; 0 selects the suite default
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    bool write_csv = true;
    bool write_json = true;
    bool write_svg = false;

    // Suite defaults with empty ranges filled in.
    ExperimentConfig resolved() const;
    // Throws InvalidInputError on an unknown suite or empty/invalid ranges.
    void validate() const;
};

struct Assertion {
    int criterion = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    bool passed = false;
    std::vector<Assertion> assertions;
    std::vector<std::string> failures;  // failing cases
    io::json summary;
    std::string csv;
    std::string svg;
    std::vector<std::string> files;
};

const std::vector<std::string>& suite_names();

// Runs the suite, writes <out>/<suite>.{csv,json,svg} as configured.
SuiteReport run_suite(const ExperimentConfig& config);

// Seeded generators shared by suites and tests.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);
// Real step with 1..max_breaks breakpoints in [-window, window], values in (-1, 1).
StepFunction random_step(Rng& rng, int max_breaks = 5, double window = 3.0);
// Normalized piecewise-linear map with up to max_knots extra knots in [-3, 3].
PiecewiseLinearMap random_normalized_pl(Rng& rng, int max_knots = 5);

// Functions on which the T^2 = -I check is run.
struct NamedStep {
    std::string name;
    StepFunction f;
};
std::vector<NamedStep> standard_step_set();

// e exp(-1/(1-x^2)) on (-1, 1).
double smooth_bump(double x);

}  // namespace chordarc
