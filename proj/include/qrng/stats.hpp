#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrng/types.hpp"

namespace qrng::stats {

struct TestResult {
    std::string name;
    std::string parameters;  // human-readable, e.g. "n=100000,M=128"
    double statistic = 0.0;
    double p_value = 0.0;
    bool pass = false;  // filled in when the result joins a report
    std::string note;   // warnings: low expected counts, gated prerequisites
};

/// Exact per-symbol counts; throws std::runtime_error naming the first
/// offending index if a symbol is out of range.
BinDistribution histogram(std::span<const std::uint32_t> symbols, int n_symbols);

/// -log2(max frequency) / log2(bin count) from an observed histogram.
double empirical_min_entropy(const BinDistribution& hist);

/// Pearson chi-square of a count histogram against the uniform expectation;
/// p-value from the upper regularized incomplete gamma at dof = bins - 1.
TestResult chi_square_uniformity(const BinDistribution& counts);

/// Pearson chi-square of a count histogram against an arbitrary expected
/// probability vector over the same bins.
TestResult chi_square_against(const BinDistribution& counts, const BinDistribution& expected);

/// Bit-level frequency test: p = erfc(|sum(2b-1)| / sqrt(2n)); needs n >= 100.
TestResult monobit_frequency(std::span<const std::uint8_t> bits);

/// Frequency within blocks of block_len bits; needs n >= 20 * block_len.
TestResult block_frequency(std::span<const std::uint8_t> bits, int block_len);

/// Total runs count versus expectation; gated on the monobit prerequisite
/// |pi - 1/2| < 2/sqrt(n): when it fails the p-value is reported as 0.
TestResult runs_test(std::span<const std::uint8_t> bits);

/// Lag-1 Pearson autocorrelation of the symbol sequence (the correlation of
/// the sequence against its own one-step shift). Throws on zero variance.
double serial_correlation(std::span<const std::uint32_t> symbols);

/// serial_correlation wrapped with the two-sided normal p-value
/// erfc(|rho| sqrt(n) / sqrt(2)).
TestResult serial_correlation_test(std::span<const std::uint32_t> symbols);

/// Kuiper V = D+ + D- of a p-value sample against the uniform CDF, with the
/// finite-sample correction (sqrt(n) + 0.155 + 0.24/sqrt(n)). Needs n >= 5.
TestResult kuiper_aggregate(std::span<const double> p_values);

struct ReportMetadata {
    std::string input;
    std::uint64_t n_bits = 0;
    std::uint64_t n_symbols = 0;
    std::string toolkit_version;
    std::string generator;
    std::string seed_provenance;
};

struct TestReport {
    std::vector<TestResult> entries;
    double alpha = 0.01;
    ReportMetadata metadata;

    /// Stamps the pass flag (p_value >= alpha) and appends.
    void add(TestResult result);
    bool all_pass() const;

    std::string to_json() const;
    static TestReport from_json(const std::string& text);
};

}  // namespace qrng::stats
