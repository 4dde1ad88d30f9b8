#include "chordarc/interval_family.hpp"

#include <cmath>
#include <sstream>

namespace chordarc {

std::string FamilyDescriptor::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "dyadic(depth=" << depth << ",window=[" << window_lo << "," << window_hi << "])";
    if (straddle_centers)
        os << "+straddle(centers=" << straddle_centers << ",spans=2^" << straddle_min_exp << "..2^"
           << straddle_max_exp << ")";
    if (random_count) os << "+random(count=" << random_count << ",seed=" << seed << ")";
    if (explicit_count) os << "+explicit(" << explicit_count << ")";
    return os.str();
}

IntervalFamily IntervalFamily::dyadic(double lo, double hi, int depth) {
    if (!(lo < hi)) throw PreconditionError("dyadic family: need lo < hi");
    if (depth < 0 || depth > 24) throw PreconditionError("dyadic family: depth out of range");
    IntervalFamily fam;
    fam.desc_.window_lo = lo;
    fam.desc_.window_hi = hi;
    fam.desc_.depth = depth;
    for (int d = 0; d <= depth; ++d) {
        std::size_t n = std::size_t{1} << d;
        double h = (hi - lo) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double a = lo + h * static_cast<double>(i);
            double b = i + 1 == n ? hi : lo + h * static_cast<double>(i + 1);
            fam.intervals_.push_back({a, b});
        }
    }
    return fam;
}

IntervalFamily& IntervalFamily::add_straddling(const std::vector<double>& centers, int min_exp,
                                               int max_exp) {
    for (double c : centers) {
        for (int e = min_exp; e <= max_exp; ++e) {
            double r = std::ldexp(1.0, e);
            intervals_.push_back({c - r, c + r});
            intervals_.push_back({c - r, c + 0.5 * r});
            intervals_.push_back({c - 0.5 * r, c + r});
        }
    }
    desc_.straddle_centers += centers.size();
    desc_.straddle_min_exp = min_exp;
    desc_.straddle_max_exp = max_exp;
    return *this;
}

IntervalFamily& IntervalFamily::add_random(std::size_t count, std::uint64_t seed) {
    double lo = desc_.window_lo, hi = desc_.window_hi;
    if (!(lo < hi)) {
        lo = -1.0;
        hi = 1.0;
    }
    Rng rng(seed);
    double span = hi - lo;
    for (std::size_t i = 0; i < count; ++i) {
        double c = rng.uniform(lo, hi);
        double len = span * std::exp2(-rng.uniform(0.0, 20.0));
        intervals_.push_back({c - 0.5 * len, c + 0.5 * len});
    }
    desc_.random_count += count;
    desc_.seed = seed;
    return *this;
}

IntervalFamily& IntervalFamily::add(Interval I) {
    if (!(I.b > I.a) || !std::isfinite(I.a) || !std::isfinite(I.b))
        throw PreconditionError("interval family: degenerate or unbounded interval");
    intervals_.push_back(I);
    ++desc_.explicit_count;
    return *this;
}

IntervalFamily IntervalFamily::default_for(const std::vector<double>& breakpoints) {
    IntervalFamily fam = dyadic(-65536.0, 65536.0, 12);
    fam.add_straddling(breakpoints, -20, 16);
    return fam;
}

}  // namespace chordarc
