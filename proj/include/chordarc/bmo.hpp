#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chordarc/function.hpp"
#include "chordarc/interval_family.hpp"

namespace chordarc {

enum class BmoMode { Exact, Family };

struct BmoResult {
    double value = 0.0;
    Interval witness{0.0, 1.0};
    bool certified = false;  // true: within 1e-9 of the supremum over all intervals
    BmoMode mode = BmoMode::Exact;
    std::size_t evaluations = 0;
};

// Non-owning linear combination sum_i c_i f_i, evaluated on the common
// refinement of all components.
class FunctionCombination {
public:
    FunctionCombination() = default;
    explicit FunctionCombination(const Function& f) { add(f); }
    FunctionCombination& add(const Function& f, cplx c = 1.0);

    cplx operator()(double x) const;
    bool is_real() const;
    double mean_oscillation(Interval I) const;
    cplx mean(Interval I) const;

private:
    struct Term {
        const Function* f;
        cplx c;
    };
    struct Piece {
        double l, r;
        bool linear;
        cplx vl, vr;  // one-sided endpoint values for linear pieces
        bool sing_l, sing_r;
    };
    std::vector<Piece> pieces(Interval I) const;
    cplx eval_in_piece(const Piece& p, double x, double dl, double dr) const;
    std::vector<Term> terms_;
};

// (1/|I|) integral over I of |f - f_I|. Closed form for step and piecewise-linear pieces.
double mean_oscillation(const StepFunction& f, Interval I);
double mean_oscillation(const Function& f, Interval I);

// Exact supremum over all bounded intervals (step data only), by nested 1-D
// refinement of both endpoints inside each pair of breakpoint cells.
BmoResult bmo_norm_exact(const StepFunction& f);
BmoResult bmo_norm_exact_serial(const StepFunction& f);

// Supremum over a finite family: a lower bound for the norm.
BmoResult bmo_norm_family(const FunctionCombination& h, const IntervalFamily& family);
BmoResult bmo_norm_family_serial(const FunctionCombination& h, const IntervalFamily& family);
BmoResult bmo_norm_family(const Function& f, const IntervalFamily& family);

// Exact mode requires a step function; family mode requires a family.
BmoResult bmo_norm(const Function& f, BmoMode mode, const IntervalFamily* family = nullptr);

// ||f - g||_* under the same rules. Exact mode converts nothing: both must be steps.
BmoResult bmo_distance(const Function& f, const Function& g, BmoMode mode,
                       const IntervalFamily* family = nullptr);

struct JnTailReport {
    std::vector<std::pair<double, double>> tail;  // (lambda, fraction)
    double norm = 0.0;                            // ||f||_* used for the rate
    double rate = 0.0;                            // fitted c in tail ~ C0 exp(-c lambda/||f||)
    bool rate_valid = false;
    bool exact = false;
};

JnTailReport jn_tail(const Function& f, Interval I, const std::vector<double>& lambdas);

}  // namespace chordarc
