#pragma once

#include <cstdint>
#include <vector>

namespace qrng {

/// Physical and digitizer parameters of one experiment configuration.
///
/// The detector sees a Poissonian photon stream at `lambda_per_second`
/// (plus an optional dark-count background). Arrival times are digitized
/// into bins of width `t0_seconds`; an observation period spans `n0`
/// consecutive bins; detector pulses closer than `nd` bins merge into one.
struct ExperimentConfig {
    double t0_seconds = 0.162e-9;
    int n0 = 320;
    int nd = 32;
    double lambda_per_second = 0.0;
    double dark_rate_per_second = 0.0;
    std::uint64_t seed = 0;

    double period_seconds() const { return static_cast<double>(n0) * t0_seconds; }
    double total_rate() const { return lambda_per_second + dark_rate_per_second; }
    double lambda_t0() const { return total_rate() * t0_seconds; }
    double mean_per_period() const { return total_rate() * period_seconds(); }
    double dead_time_ratio() const { return static_cast<double>(nd) / static_cast<double>(n0); }
    int symbol_count() const { return n0 - 2 * nd; }

    /// Convenience for theory-only use where only the dimensionless product
    /// lambda*t0 matters: fixes t0 = 1 s and sets the rate accordingly.
    static ExperimentConfig from_lambda_t0(double lambda_t0, int n0, int nd);

    /// Throws std::invalid_argument on any violated invariant
    /// (t0 <= 0, n0 < 1, nd < 0, n0 <= 2*nd, negative or non-finite rates).
    void validate() const;
};

enum class DistributionKind {
    TheoreticalProbability,
    EmpiricalCount,
    EmpiricalFrequency,
};

/// Values over bins k = 1..n0. Bin indices are 1-based at the API surface;
/// values[k-1] stores bin k.
struct BinDistribution {
    int n0 = 0;
    std::vector<double> values;
    DistributionKind kind = DistributionKind::TheoreticalProbability;

    double value(int k) const;  // 1-based, throws std::domain_error out of range
    double sum() const;
    double max_value() const;
    int max_bin() const;  // 1-based index of the first maximum
};

/// Counts divided by the total; input must be an EmpiricalCount histogram.
BinDistribution to_frequency(const BinDistribution& counts);

/// One observation window: how many pulse rising edges fell inside, and for
/// single-edge windows the 1-based bin index of that edge.
struct PeriodRecord {
    std::uint64_t period_index = 0;
    std::uint32_t edge_count = 0;
    std::uint32_t bin_k = 0;  // valid iff edge_count == 1
};

}  // namespace qrng
