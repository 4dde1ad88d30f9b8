#pragma once

#include <string>
#include <vector>

#include "chordarc/embedding.hpp"
#include "chordarc/zipper.hpp"

namespace chordarc {

// Parameter samples s_j for welding. Geometric: +-geomspace(smin, smax, N/2)
// plus 0 and 1. CoreGraded: N uniform points on [-core, core] plus `graded`
// geometric points per side out to smax, plus 0 and 1.
struct WeldSampling {
    enum class Kind { Geometric, CoreGraded };
    Kind kind = Kind::Geometric;
    int N = 4096;
    double smin = 1e-6;
    double smax = 1e4;
    double core = 2.0;
    int graded = 300;
    std::vector<double> nodes() const;
    std::string to_string() const;
};

enum class Side { Left, Right };

// Boundary samples of the Riemann map h of one side: h(t_j) = points_j.
struct BoundaryCorrespondence {
    std::vector<double> s;
    std::vector<cplx> points;
    std::vector<double> t;
    double fit_residual = 0.0;
};

// Samples of the normalized curve are fitted by the zipper; the right side is
// fitted as the left side of the conjugate curve.
BoundaryCorrespondence riemann_parametrization(const EmbeddingCurve& gamma, const WeldSampling& sampling,
                                               Side side = Side::Left, bool parallel = true);
BoundaryCorrespondence boundary_correspondence(const std::vector<double>& s, const std::vector<cplx>& points,
                                               Side side = Side::Left, bool parallel = true);

struct WeldingResult {
    std::vector<double> s;
    std::vector<double> f;   // f(s_j) = h^{-1}(gamma(s_j)), f(0) = 0, f(1) = 1
    std::vector<cplx> h;     // h(f(s_j)) samples, i.e. gamma(s_j)
    SampledFunction log_fprime;
    double fit_residual = 0.0;
    int N = 0;
    std::string sampling;
};

WeldingResult welding_homeo(const EmbeddingCurve& gamma, const WeldSampling& sampling, Side side = Side::Left);

// log f' of increasing samples: three-point nonuniform derivative, limited to
// [0, 3 min(adjacent secants)], one-sided secants at the ends.
SampledFunction log_derivative_monotone(const std::vector<double>& s, const std::vector<double>& f);

struct LambdaResult {
    WeldingResult weld;
    SampledFunction value;            // log f'
    double identity_residual = -1.0;  // ||P_f T P_f^{-1}(log f') + v|| on the check window, -1 if skipped
};

// lambda(iv) = log f' for the welding of gamma_{iv}.
LambdaResult lambda_map(const Function& v, const WeldSampling& sampling, bool check_identity = false);

struct RhoResult {
    std::vector<double> x;  // f_+(s_j)
    std::vector<double> W;  // f_-(s_j)
    SampledFunction value;  // log W' on x
    double consistency = 0.0;  // log W' against log f_-' - log f_+' (mod constants, |s| in [1e-2, 10])
};

// W = f_- o f_+^{-1} from the two sides of gamma_{iv}; log W'.
RhoResult rho_map(const Function& v, const WeldSampling& sampling);

}  // namespace chordarc
