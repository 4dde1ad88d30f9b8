#include "chordarc/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace chordarc {

double direct_mean_oscillation(const StepFunction& f, double x0, double x1) {
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    std::vector<double> lens;
    std::vector<cplx> vals;
    double left = x0;
    for (std::size_t i = 0; i <= bp.size(); ++i) {
        double right = i < bp.size() ? std::min(bp[i], x1) : x1;
        if (right > left) {
            lens.push_back(right - left);
            vals.push_back(v[i]);
            left = right;
        }
        if (left >= x1) break;
    }
    double L = x1 - x0;
    cplx m = 0.0;
    for (std::size_t i = 0; i < lens.size(); ++i) m += vals[i] * lens[i];
    m /= L;
    double osc = 0.0;
    for (std::size_t i = 0; i < lens.size(); ++i) osc += std::abs(vals[i] - m) * lens[i];
    return osc / L;
}

double dense_grid_bmo(const StepFunction& f, const std::vector<double>& nodes) {
    double best = 0.0;
    long n = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            double a = nodes[static_cast<std::size_t>(i)], b = nodes[static_cast<std::size_t>(j)];
            if (b > a) best = std::max(best, direct_mean_oscillation(f, a, b));
        }
    return best;
}

std::vector<double> aligned_nodes(double a, double b, int K, int before, int after) {
    double h = (b - a) / K;
    std::vector<double> v;
    for (int i = -before * K; i <= (1 + after) * K; ++i) v.push_back(a + i * h);
    return v;
}

}  // namespace chordarc
