#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "chordarc/core.hpp"

namespace chordarc {

// Piecewise-constant function on R. values[i] holds on (breakpoints[i-1], breakpoints[i]);
// values.front() and values.back() are the unbounded tails. At a breakpoint the
// right-hand value is taken, i.e. pieces are [b_{i-1}, b_i).
class StepFunction {
public:
    StepFunction() : values_{cplx(0.0)} {}
    StepFunction(std::vector<double> breakpoints, std::vector<cplx> values);

    static StepFunction constant(cplx c) { return StepFunction({}, {c}); }
    static StepFunction indicator(double a, double b, cplx c = 1.0);  // c on [a,b)
    static StepFunction heaviside(double a, cplx c = 1.0);            // c on [a,inf)

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<cplx>& values() const { return values_; }
    std::size_t piece(double x) const;
    cplx operator()(double x) const { return values_[piece(x)]; }

    bool is_real() const;
    bool is_constant() const { return breakpoints_.empty(); }
    StepFunction real_part() const;
    StepFunction imag_part() const;

    cplx integral(double a, double b) const;
    cplx mean(double a, double b) const;

    StepFunction translated(double s) const;  // x -> f(x - s)
    StepFunction dilated(double c) const;     // x -> f(x / c), c > 0
    // Representative of the class modulo constants: mean over [0,1] removed.
    StepFunction canonical_representative() const;

    StepFunction operator-() const;
    StepFunction operator+(cplx c) const;
    friend StepFunction operator+(const StepFunction& f, const StepFunction& g);
    friend StepFunction operator-(const StepFunction& f, const StepFunction& g);
    friend StepFunction operator*(cplx c, const StepFunction& f);

    // Exact equality of breakpoints and values.
    bool operator==(const StepFunction& other) const = default;

private:
    void canonicalize();
    std::vector<double> breakpoints_;
    std::vector<cplx> values_;
};

// f - g is constant; with tol = 0 the comparison is exact.
bool equal_mod_constant(const StepFunction& f, const StepFunction& g, double tol = 0.0);
// sup |(f - g) - c| minimized over the constant c chosen as the value of f - g on [0,1)'s piece at 0.
double sup_deviation_mod_constant(const StepFunction& f, const StepFunction& g);

// Extension rule outside the grid of a sampled function.
struct Tail {
    enum class Kind { Hold, Log };
    Kind kind = Kind::Hold;
    cplx coef = 0.0;  // Log: value_end + coef * log(|x| / |x_end|)
    static Tail hold() { return {}; }
    static Tail log(cplx c) { return {Kind::Log, c}; }
    bool operator==(const Tail&) const = default;
};

// Piecewise-linear interpolant of (grid, values) with declared tails.
class SampledFunction {
public:
    SampledFunction() = default;
    SampledFunction(std::vector<double> grid, std::vector<cplx> values, Tail left = {},
                    Tail right = {});
    static SampledFunction from_callable(std::vector<double> grid,
                                         const std::function<cplx(double)>& f, Tail left = {},
                                         Tail right = {});

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }
    const Tail& left_tail() const { return left_; }
    const Tail& right_tail() const { return right_; }
    std::size_t size() const { return grid_.size(); }

    cplx operator()(double x) const;
    bool is_real() const;
    SampledFunction real_part() const;
    SampledFunction imag_part() const;
    SampledFunction scaled(cplx c) const;
    SampledFunction operator+(cplx c) const;

private:
    std::vector<double> grid_;
    std::vector<cplx> values_;
    Tail left_, right_;
};

// sum_j coef_j * log|x - at_j| + constant. Exact output type of the Hilbert
// transform of step data.
struct LogTerm {
    double at = 0.0;
    cplx coef = 0.0;
    bool operator==(const LogTerm&) const = default;
};

class LogSumFunction {
public:
    LogSumFunction() = default;
    explicit LogSumFunction(std::vector<LogTerm> terms, cplx constant = 0.0);

    const std::vector<LogTerm>& terms() const { return terms_; }
    cplx constant() const { return constant_; }
    LogSumFunction with_constant(cplx c) const { return LogSumFunction(terms_, c); }

    // Value at x. At a singular point returns the signed-infinity marker:
    // each component is -sign(coef component) * infinity.
    cplx operator()(double x) const;
    bool is_singular_at(double x) const;
    // Evaluation with exact distances to nearby singular points a_end, b_end.
    cplx eval_with_distances(double x, double a_end, double da, double b_end, double db) const;
    cplx total_coef() const;
    bool is_real() const;
    SampledFunction sampled_on(std::vector<double> grid) const;

private:
    std::vector<LogTerm> terms_;  // sorted by location, merged
    cplx constant_ = 0.0;
};

using Function = std::variant<StepFunction, SampledFunction, LogSumFunction>;

cplx evaluate(const Function& f, double x);
bool is_real(const Function& f);
const char* kind_name(const Function& f);
Function real_part(const Function& f);
Function imag_part(const Function& f);
Function scale(const Function& f, cplx c);

// Sorted nodes, breakpoints or singular points of f strictly inside (a,b).
void collect_breaks(const Function& f, double a, double b, std::vector<double>& out);

}  // namespace chordarc
