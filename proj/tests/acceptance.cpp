// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "chordarc/experiments.hpp"
#include "chordarc/parallel.hpp"

using namespace chordarc;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;
};

double run(const std::string& suite, const std::string& out, std::map<int, Outcome>& results,
           ExperimentConfig c = {}) {
    c.suite = suite;
    c.out_dir = out;
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport r;
    try {
        r = run_suite(c);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", suite.c_str(), e.what());
        for (int k = 1; k <= 11; ++k)
            if (suite_names()[k - 1] == suite) {
                results[k].passed = false;
                results[k].notes.push_back(std::string("error: ") + e.what());
            }
        return 0.0;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& a : r.assertions) {
        Outcome& o = results[a.criterion];
        o.passed = o.passed && a.passed;
        if (!a.passed) o.notes.push_back(a.name + (a.detail.empty() ? "" : " (" + a.detail + ")"));
    }
    for (const auto& f : r.failures) std::fprintf(stderr, "  %s: %s\n", suite.c_str(), f.c_str());
    return secs;
}

void limit(std::map<int, Outcome>& results, int criterion, double secs, double max_secs, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.1f s (limit %.0f s)", what.c_str(), secs, max_secs);
    results[criterion].notes.push_back(buf);
    if (!(secs < max_secs)) results[criterion].passed = false;
}

}  // namespace

int main(int argc, char** argv) {
    std::string out = argc > 1 ? argv[1] : "acceptance_out";
    configure_threads_from_env();
    std::map<int, Outcome> results;

    limit(results, 1, run("discontinuity", out, results), 10, "runtime");
    limit(results, 2, run("indicator", out, results), 30, "runtime");
    run("operator", out, results);
    run("j-identity", out, results);
    run("chain-rule", out, results);
    run("hilbert", out, results);
    for (double th : {M_PI / 6, M_PI / 4, M_PI / 2}) {
        ExperimentConfig c;
        c.theta = {th};
        char what[64];
        std::snprintf(what, sizeof what, "theta=%.4f", th);
        limit(results, 7, run("sector-welding", out + "/theta_" + std::to_string(static_cast<int>(std::lround(M_PI / th))), results, c), 120, what);
    }
    limit(results, 8, run("linearization", out, results), 300, "runtime");
    run("chord-arc", out, results);
    run("extension", out, results);
    run("reproducibility", out, results);

    bool all = true;
    for (int k = 1; k <= 11; ++k) {
        auto it = results.find(k);
        bool ok = it != results.end() && it->second.passed;
        if (it == results.end()) ok = false;
        all = all && ok;
        std::string notes;
        if (it != results.end())
            for (const auto& n : it->second.notes) notes += (notes.empty() ? "" : "; ") + n;
        std::printf("criterion %d: %s%s%s\n", k, ok ? "PASS" : "FAIL", notes.empty() ? "" : "  ", notes.c_str());
    }
    return all ? 0 : 1;
}
