#pragma once

#include <cstdint>
#include <vector>

#include "qrng/types.hpp"

namespace qrng::theory {

/// Poisson pmf e^-mean * mean^count / count!, evaluated in log space.
double poisson_pmf(double mean, int count);

/// Probability that the first arrival of an exponential stream falls in bin k
/// of a window of n0 bins, conditioned on at least one arrival in the window.
double first_arrival_bin_pmf(double lambda_t0, int n0, int k);

/// The ideal zero-dead-time bin distribution, conditioned on exactly one
/// detection in the window: uniform 1/n0.
double conditional_uniform_pmf(int n0);

/// Probability that a paralyzable counter with dead-time fraction
/// `deadtime_ratio` (dead time / window length) registers `count` pulses in
/// one window, given a Poisson mean of `mu` arrivals per window.
///
/// Alternating series over the physical support; terms whose support factor
/// is non-positive contribute zero, and tiny negative totals from truncation
/// are clamped to zero. With deadtime_ratio = 0 this is exactly poisson_pmf.
double deadtime_count_pmf(double mu, double deadtime_ratio, int count);

/// deadtime_count_pmf with count = 1: the acceptance probability of the
/// single-pulse selection rule, and a factor of the output bitrate.
double prob_single_pulse(double mu, double deadtime_ratio);

/// Number of bin positions a second detection can occupy such that it merges
/// into a pulse whose rising edge sits `gap` bins before the window end.
std::int64_t merge_choices_two(std::int64_t gap, int nd);

/// Number of ordered position pairs for a second and third detection that all
/// merge into one pulse; continuous across its branch boundaries.
double merge_choices_three(std::int64_t gap, int nd);

/// Unnormalized probability that an observation window holds exactly one
/// pulse with rising edge in bin k (1-based), accounting for dead-time
/// shadowing from the preceding window and merge chains of up to three
/// detections.
double single_pulse_bin_prob(const ExperimentConfig& cfg, int k);

/// single_pulse_bin_prob for every k = 1..n0 in one pass.
std::vector<double> single_pulse_bin_curve(const ExperimentConfig& cfg);

/// The curve above normalized to sum 1. Throws std::domain_error when the
/// configuration carries no signal (zero rate).
BinDistribution normalized_bin_distribution(const ExperimentConfig& cfg);

/// Keeps bins [nd+1, n0-nd] and renormalizes. EmpiricalCount inputs come out
/// as EmpiricalFrequency; other kinds are preserved.
BinDistribution truncate_distribution(const BinDistribution& dist, int nd);

/// -log2(p_max) / log2(symbol_count): min-entropy normalized per output bit.
double min_entropy_per_bit(double p_max, int symbol_count);

struct RetainedFraction {
    double exact = 0.0;        // sum of the distribution over the retained bins
    double approximate = 0.0;  // (n0 - 2*nd) / n0
};

/// Fraction of accepted symbols surviving two-sided truncation by nd bins.
RetainedFraction retained_fraction(const BinDistribution& dist, int nd);

struct BitrateEstimate {
    double exact_bps = 0.0;        // uses the exact retained fraction
    double approximate_bps = 0.0;  // uses (n0 - 2*nd) / n0
    double bits_per_symbol = 0.0;  // log2(n0 - 2*nd), real-valued
    double p_single = 0.0;         // single-pulse probability per period
};

/// Predicted output bitrate: bits-per-symbol x single-pulse probability x
/// period frequency x retained fraction.
BitrateEstimate predicted_bitrate(const ExperimentConfig& cfg);

}  // namespace qrng::theory
