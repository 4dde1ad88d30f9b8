#pragma once

#include <cstdint>
#include <vector>

#include "chordarc/function.hpp"
#include "chordarc/interval_family.hpp"

namespace chordarc {

// Sup over a family of an averaged quantity of the weight e^w.
struct FamilySup {
    double value = 1.0;
    Interval witness{0.0, 1.0};
    bool divergent = false;  // a family interval carries a non-integrable singularity
};

// Integrals of e^{s (w - shift)} and of w over [a,b]; exact for step and
// piecewise-linear data, tanh-sinh for log-sums.
struct WeightIntegrals {
    double exp_int = 0.0;
    double val_int = 0.0;
    bool divergent = false;
};
WeightIntegrals weight_integrals(const Function& w, double s, double a, double b, double shift);

// max over the family of (avg e^w)(avg e^{-w/(p-1)})^{p-1}.
FamilySup ap_constant(const Function& w, double p, const IntervalFamily& family);
FamilySup ap_constant_serial(const Function& w, double p, const IntervalFamily& family);

// max over the family of avg(e^w) / exp(avg w).
FamilySup reverse_jensen_constant(const Function& w, const IntervalFamily& family);

// Finite union of disjoint subintervals.
struct Subset {
    std::vector<Interval> parts;
    double measure() const;
};

// Subsets of I: dyadic cells of I at levels 1..max_level (single cells,
// adjacent pairs, and the heaviest 1..4 cells for the weight), plus seeded
// random unions of up to 4 subintervals.
struct SubsetSampler {
    int max_level = 4;
    std::size_t random_count = 8;
    std::uint64_t seed = 1;
    std::vector<Subset> sample(const Function& w, Interval I, std::size_t interval_index) const;
};

struct DoublingFit {
    double K = 1.0;
    double alpha = 1.0;
    Interval witness_I{0.0, 1.0};
    Subset witness_E;
    std::size_t pairs = 0;
    bool divergent = false;
};

// Fit of w(E)/w(I) <= K (|E|/|I|)^alpha with K = 1 fixed and the largest alpha
// in (0,1] consistent with every sampled pair; alpha = 0 means no fit.
DoublingFit doubling_fit(const Function& w, const IntervalFamily& family, const SubsetSampler& sampler);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct WeightReport {
    double p = 2.0;
    FamilySup ap;
    FamilySup reverse_jensen;
    DoublingFit doubling;
    FamilyDescriptor family;
    double bmo_norm = 0.0;
    bool bmo_norm_certified = false;
    bool fast_path = false;  // ||u||_* < c_small
    Verdict verdict = Verdict::Inconclusive;
};

struct BmoStarOptions {
    double tol = 1e-3;         // minimal accepted doubling exponent
    double c_small = 0.1;      // small-norm fast path threshold
    double rj_max = 1e6;       // reverse Jensen ceiling
    double p = 2.0;
    SubsetSampler sampler;
};

// Finite-family A_infinity test of e^u. The default family is
// IntervalFamily::default_for(breaks of u).
WeightReport is_bmo_star(const Function& u, const BmoStarOptions& opt = {},
                         const IntervalFamily* family = nullptr);

}  // namespace chordarc
