#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfaudit {

// Error taxonomy, mapped to CLI exit codes (validation=2, numeric=3, io=4).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64 finalizer; used to derive independent substream seeds from a
// master seed so that adding draws to one component does not shift another.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    return mix64(mix64(master ^ mix64(stream)) ^ mix64(index));
}

// Substream tags. Values are arbitrary but fixed: changing them changes
// every seeded artifact.
namespace stream {
inline constexpr std::uint64_t kSimAttribute = 1;
inline constexpr std::uint64_t kSimCovariates = 2;
inline constexpr std::uint64_t kSimWeights = 3;
inline constexpr std::uint64_t kSimOutcomes = 4;
inline constexpr std::uint64_t kSimDecisions = 5;
inline constexpr std::uint64_t kFitStep = 6;
inline constexpr std::uint64_t kAssessTheta0 = 7;
inline constexpr std::uint64_t kAssessTheta1 = 8;
inline constexpr std::uint64_t kAssessImpute = 9;
} // namespace stream

// Numerically stable log(sigmoid(x)); no overflow for |x| up to ~1e308.
inline double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

// sigmoid(x) clamped to the open interval (0,1) at machine precision.
inline double sigmoid(double x) {
    double p;
    if (x >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        p = e / (1.0 + e);
    }
    const double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    if (p < lo) return lo;
    if (p > hi) return hi;
    return p;
}

// Linear-interpolation quantile on a sorted sample (the convention used by
// most plotting stacks). q in [0,1]; sample must be non-empty and sorted.
double quantile_sorted(const std::vector<double>& sorted, double q);

// FNV-1a 64-bit, used for config hashes in report provenance.
std::uint64_t fnv1a64(const std::string& text);

// Shortest round-trippable decimal rendering of a double (to_chars based).
std::string format_double(double value);

} // namespace pfaudit
