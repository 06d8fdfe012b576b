#pragma once

#include <cstdint>
#include <vector>

#include "qrng/types.hpp"

namespace qrng::sim {

/// Detection event times quantized to TDC ticks, strictly increasing.
struct TimestampStream {
    std::uint64_t t0_femtoseconds = 0;
    std::vector<std::uint64_t> ticks;
};

/// Rising edges of the merged pulse train. merged_multiplicities[i] is the
/// number of detection events absorbed into pulse i (diagnostic).
struct PulseTrain {
    std::vector<std::uint64_t> edges;
    std::vector<std::uint32_t> merged_multiplicities;
};

/// Substream granularity: each block of this many periods is generated from
/// its own RNG substream, so the stream identity is (seed, block_periods)
/// and is independent of thread count.
inline constexpr std::uint64_t kDefaultBlockPeriods = 4096;

std::uint64_t t0_femtoseconds_of(const ExperimentConfig& cfg);

/// Homogeneous Poisson arrivals at rate lambda + dark over
/// duration_periods * n0 ticks: continuous exponential gaps, floor-quantized
/// to ticks, same-tick pairs collapsed (a TDC cannot resolve them).
/// Deterministic for a fixed (seed, block_periods).
TimestampStream generate_arrivals(const ExperimentConfig& cfg, std::uint64_t duration_periods,
                                  std::uint64_t seed,
                                  std::uint64_t block_periods = kDefaultBlockPeriods);

/// Same stream, blocks generated across OpenMP threads. Bit-identical to
/// generate_arrivals for the same arguments.
TimestampStream generate_arrivals_parallel(const ExperimentConfig& cfg,
                                           std::uint64_t duration_periods, std::uint64_t seed,
                                           std::uint64_t block_periods = kDefaultBlockPeriods);

/// Paralyzable (extended) dead-time merging: every detection, registered or
/// not, extends the live pulse by nd_ticks, so an event opens a new pulse
/// exactly when its gap to the previous event is >= nd_ticks. nd_ticks = 0 is
/// the identity. Serial reference implementation.
PulseTrain merge_dead_time(const TimestampStream& events, std::uint32_t nd_ticks);

/// OpenMP implementation of the same kernel; bit-identical output.
PulseTrain merge_dead_time_parallel(const TimestampStream& events, std::uint32_t nd_ticks);

/// Counts edges per window [p*n0, (p+1)*n0); the single edge's 1-based bin is
/// (tick mod n0) + 1. Edges at or beyond period_count * n0 are discarded.
std::vector<PeriodRecord> segment_periods(const PulseTrain& pulses, int n0,
                                          std::uint64_t period_count);

}  // namespace qrng::sim
