#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chordarc/core.hpp"

namespace chordarc {

struct FamilyDescriptor {
    double window_lo = 0.0;
    double window_hi = 0.0;
    int depth = -1;                 // dyadic depth, -1 if no dyadic part
    std::size_t straddle_centers = 0;
    int straddle_min_exp = 0;       // spans 2^min_exp .. 2^max_exp
    int straddle_max_exp = 0;
    std::size_t random_count = 0;
    std::uint64_t seed = 0;
    std::size_t explicit_count = 0;
    std::string to_string() const;
};

// Finite family of bounded intervals over which suprema are evaluated.
class IntervalFamily {
public:
    IntervalFamily() = default;

    // All dyadic subintervals of [lo,hi] down to depth D (2^{D+1}-1 intervals).
    static IntervalFamily dyadic(double lo, double hi, int depth);

    // Intervals [c - r, c + r], [c - r, c + r/2], [c - r/2, c + r] for r = 2^e,
    // e in [min_exp, max_exp], around each center.
    IntervalFamily& add_straddling(const std::vector<double>& centers, int min_exp, int max_exp);
    // count intervals with uniform center in the window and log-uniform length.
    IntervalFamily& add_random(std::size_t count, std::uint64_t seed);
    IntervalFamily& add(Interval I);

    const std::vector<Interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    const FamilyDescriptor& descriptor() const { return desc_; }

    // Default family of the weight diagnostics: dyadic depth 12 over
    // [-2^16, 2^16] plus straddling intervals around the given breakpoints.
    static IntervalFamily default_for(const std::vector<double>& breakpoints);

private:
    std::vector<Interval> intervals_;
    FamilyDescriptor desc_;
};

}  // namespace chordarc
