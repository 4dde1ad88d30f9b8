#pragma once

#include <vector>

#include "chordarc/function.hpp"

namespace chordarc {

// Brute-force references, written without the optimizers they check.

// Mean oscillation of a step function on [x0, x1] by direct summation over pieces.
double direct_mean_oscillation(const StepFunction& f, double x0, double x1);

// max of the mean oscillation over all intervals with endpoints in `nodes`.
double dense_grid_bmo(const StepFunction& f, const std::vector<double>& nodes);

// Nodes a + i (b - a)/K for i = -before*K .. (1 + after)*K.
std::vector<double> aligned_nodes(double a, double b, int K, int before = 2, int after = 2);

}  // namespace chordarc
