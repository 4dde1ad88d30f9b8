#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace chordarc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

struct Interval {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
};

// Violated precondition of an operation (degenerate interval, bad parameter).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested mode is not available for this representation.
class UnsupportedModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed external input (JSON, CLI arguments).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical procedure could not reach its target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Seeded generator. The engine sequence is fixed by the standard; the double
// conversion is done here because std distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace chordarc
