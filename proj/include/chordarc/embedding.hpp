#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chordarc/function.hpp"
#include "chordarc/weights.hpp"

namespace chordarc {

// Plane curve with log-derivative w (step or sampled, complex). The raw curve
// is G(x) = int_0^x e^w; the normalized curve is G(x)/G(1), fixing 0 and 1.
// Both are closed form per piece; tables are built at construction.
class EmbeddingCurve {
public:
    explicit EmbeddingCurve(Function w);

    const Function& w() const { return w_; }
    // w - log G(1): the representative with int_0^1 e^w = 1.
    Function normalized_w() const;

    cplx raw(double x) const;
    cplx operator()(double x) const { return raw(x) / z_; }
    cplx normalizer() const { return z_; }
    // Arc length of the raw curve over [a,b]: int_a^b e^{Re w}.
    double raw_arclength(double a, double b) const;
    // Arc length of the normalized curve.
    double arclength(double a, double b) const { return raw_arclength(a, b) / std::abs(z_); }

private:
    struct Piece {
        double l, r;  // r may be +inf for the right tail; l may be -inf
        cplx wl, wr;  // values at l, r (linear pieces) or the constant
        int kind;     // 0 constant, 1 linear, 2 log tail
        cplx coef;    // log tail coefficient
        double xe;    // log tail anchor
    };
    cplx piece_integral(const Piece& p, double a, double b) const;
    double piece_length(const Piece& p, double a, double b) const;
    std::size_t locate(double x) const;

    Function w_;
    std::vector<Piece> pieces_;
    std::vector<double> knots_;     // piece boundaries (finite), sorted
    std::vector<cplx> cum_;         // G at knots_
    std::vector<double> cum_len_;   // int_{knots_[0]}^{knots_[k]} e^{Re w}
    cplx z_ = 1.0;
};

// L(gamma) = log gamma' for a curve built from w: exact.
Function log_derivative_of_curve(const EmbeddingCurve& c);

// log gamma' at grid nodes of a curve given as a callable: centered differences
// with one Richardson step, argument unwrapped along the grid.
SampledFunction log_derivative_of_samples(const std::function<cplx(double)>& gamma, std::vector<double> grid,
                                          double h);

EmbeddingCurve curve_from_logderiv(const Function& w);
// w = i theta chi_[0,inf), |theta| < pi.
EmbeddingCurve wedge_curve(double theta);

struct ChordArcSampler {
    int min_exp = -20;
    int max_exp = 20;
    int refinement = 4;             // asymmetry ratios 2^{j/refinement}, |j| <= refinement
    std::size_t random_count = 2000;
    double random_window = 1024.0;  // random pair centers in [-W, W]
    std::uint64_t seed = 1;
    std::string to_string() const;
};

struct ChordArcReport {
    double constant = 1.0;
    double a = 0.0, b = 1.0;
    std::size_t pairs = 0;
    std::string sampler;
};

ChordArcReport chord_arc_constant(const EmbeddingCurve& c, const ChordArcSampler& s = {});
ChordArcReport chord_arc_constant_serial(const EmbeddingCurve& c, const ChordArcSampler& s = {});

struct JResult {
    Function w;
    bool checked = false;
    Verdict u_verdict = Verdict::Inconclusive;
};

// J(u, iv) = u + i (v o gamma_u). The BMO* test on u is advisory only.
JResult j_map(const Function& u, const Function& v, bool check_bmo_star = true);

struct JInverse {
    Function u;
    Function v;
};
// u = Re w, v = (Im w) o gamma_u^{-1}.
JInverse j_inverse(const Function& w);

}  // namespace chordarc
