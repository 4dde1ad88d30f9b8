#pragma once

#include <variant>
#include <vector>

#include "chordarc/bmo.hpp"
#include "chordarc/function.hpp"

namespace chordarc {

// Increasing piecewise-linear homeomorphism of R. Stores knots (x_i, y_i) and
// the log-slopes of the K+1 pieces. Inversion swaps the knot arrays and negates
// the log-slopes, so group operations are exact on the stored data.
class PiecewiseLinearMap {
public:
    PiecewiseLinearMap();  // identity, normalized
    PiecewiseLinearMap(std::vector<double> xs, std::vector<double> ys, std::vector<double> log_slopes,
                       bool normalized);
    // breakpoints b_i, slopes s_0..s_B (s_0 the left tail), anchor (x0, y0).
    static PiecewiseLinearMap from_slopes(const std::vector<double>& breakpoints,
                                          const std::vector<double>& slopes, double x0, double y0,
                                          bool normalized = false);

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    const std::vector<double>& log_slopes() const { return u_; }
    std::vector<double> slopes() const;
    bool normalized() const { return normalized_; }

    double operator()(double x) const;
    double inverse(double y) const;
    // Index of the piece containing x (0 = left tail).
    std::size_t piece(double x) const;

    bool is_identity() const;
    // Affine re-anchoring so that 0 and 1 are fixed; no-op if already exact.
    PiecewiseLinearMap normalize() const;

    bool operator==(const PiecewiseLinearMap&) const = default;

private:
    void canonicalize();
    std::vector<double> xs_, ys_, u_;
    bool normalized_ = false;
};

// Normalized integral f_u(x) = int_0^x e^u / int_0^1 e^u for piecewise-linear
// (sampled) u; the piece integrals and their inverses are closed form.
class IntegralMap {
public:
    explicit IntegralMap(SampledFunction u);

    const SampledFunction& u() const { return u_; }
    double operator()(double x) const;
    double inverse(double y) const;
    double normalizer() const { return z_; }  // int_0^1 e^u
    bool normalized() const { return true; }

private:
    double raw(double x) const;  // int_0^x e^u
    double raw_inverse(double F) const;
    SampledFunction u_;
    std::vector<double> cum_;  // int_{grid[0]}^{grid[k]} e^u
    double offset_ = 0.0;      // int_{grid[0]}^0 e^u
    double z_ = 1.0;
};

using MonotoneMap = std::variant<PiecewiseLinearMap, IntegralMap>;

double apply(const MonotoneMap& f, double x);
double apply_inverse(const MonotoneMap& f, double y);
bool is_normalized(const MonotoneMap& f);

MonotoneMap gamma_from_u(const Function& u);
PiecewiseLinearMap gamma_from_step(const StepFunction& u);

PiecewiseLinearMap invert(const PiecewiseLinearMap& f);
// compose(f, g) = f o g.
PiecewiseLinearMap compose(const PiecewiseLinearMap& f, const PiecewiseLinearMap& g);

StepFunction log_derivative(const PiecewiseLinearMap& f);
Function log_derivative(const MonotoneMap& f);

// P_f(w) = w o f.
StepFunction pullback(const PiecewiseLinearMap& f, const StepFunction& w);
Function pullback(const MonotoneMap& f, const Function& w);
// w o f^{-1}, with breakpoints transported forward by f.
Function pullback_inverse(const MonotoneMap& f, const Function& w);

// Q_u(w) = P_{gamma_u}(w) + u.
Function q_affine(const Function& u, const Function& w);

// Sum of two functions of compatible kinds (step+step, sampled+sampled).
Function add(const Function& f, const Function& g);

// f_k: x (x >= 0); k/(k+1) x on (-(k+1)/k, 0); x + 1/k for x <= -(k+1)/k.
PiecewiseLinearMap family_fk(double k);
// l_n: x (x >= 0); n/(n+1) x (x < 0).
PiecewiseLinearMap family_ln(double n);

struct PfNormReport {
    double value = 0.0;
    std::size_t witness = 0;
    bool certified = false;
};

// max over the ensemble of ||P_f w||_*/||w||_* (difference mode: ||P_f w - w||_*/||w||_*).
PfNormReport pf_norm_lower_bound(const PiecewiseLinearMap& f, const std::vector<StepFunction>& ensemble,
                                 bool difference_mode);

}  // namespace chordarc
