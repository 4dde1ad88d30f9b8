#pragma once

#include <vector>

#include "chordarc/function.hpp"

namespace chordarc {

// Uniform circle nodes phi_j = 2 pi (j + 1/2) / N pulled back to the line by
// x = -cot(phi/2), the boundary form of the Cayley map. The point phi = 0
// (x = infinity) is never a node.
struct CayleyGrid {
    int N = 0;
    std::vector<double> phi;
    std::vector<double> x;  // increasing

    static CayleyGrid make(int N);
    static double angle_of(double x);  // inverse of x = -cot(phi/2), in (0, 2 pi)
};

// Tv(x) = (1/pi) p.v. int v(t)/(x - t) dt for real step v, in closed form:
// sum_i (jump_i / pi) log|x - b_i|. The divergent constant of unbounded steps
// is dropped, so T(chi_[0,inf)) = (1/pi) log|x|.
LogSumFunction hilbert_step(const StepFunction& v);

// Conjugate function on the circle: multiplier -i sgn(k) applied to N
// real samples at the nodes of a CayleyGrid (FFT, N a power of two).
std::vector<double> conjugate_circle(const std::vector<double>& samples);
// O(N^2) direct transform; reference for testing.
std::vector<double> conjugate_circle_reference(const std::vector<double>& samples);

struct SpectralResult {
    SampledFunction value;  // anchored: value at x = 3 is zero
    double tail_mass = 0.0;  // relative l1 mass of the top half of the spectrum
    bool inconclusive = false;
};

// Spectral Hilbert transform of a real sampled function; modulo constants.
// inconclusive is set when tail_mass exceeds tol.
SpectralResult hilbert_sampled(const SampledFunction& v, const CayleyGrid& grid, double tol = 1e-6);
// Same, for a real function given by its values at the grid nodes.
SpectralResult hilbert_nodes(const std::vector<double>& values, const CayleyGrid& grid, double tol = 1e-6);

struct InvolutionReport {
    double residual = 0.0;      // family-mode BMO distance of T(Tv) and -v on the grid nodes
    double raw_residual = 0.0;  // same, second pass purely spectral (diagnostic)
    int N = 0;
    const char* method = "";
};

// T(T(v)) against -v. Step v: closed-form first pass, spectral second pass with
// the logarithmic singularities conjugated analytically. Sampled v: both passes
// spectral.
InvolutionReport check_involution(const Function& v, int N = 1 << 14);

// Anchor point for modulo-constant representatives.
double hilbert_anchor(const std::vector<double>& breakpoints);

}  // namespace chordarc
