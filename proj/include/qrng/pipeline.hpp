#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qrng/extractor.hpp"
#include "qrng/simulator.hpp"
#include "qrng/types.hpp"

namespace qrng::pipeline {

struct Options {
    std::uint64_t block_periods = sim::kDefaultBlockPeriods;
    bool parallel = true;
    bool keep_symbols = true;
};

/// Aggregates of one generate -> merge -> segment -> select -> truncate run.
/// Large runs stream period records through per-block accumulators instead of
/// materializing them; composing the standalone operations gives the same
/// result (tested) at higher memory cost.
struct Summary {
    std::uint64_t periods = 0;
    std::uint64_t events = 0;  // quantized detection events
    std::uint64_t edges = 0;   // pulse rising edges
    std::array<std::uint64_t, 8> periods_by_edge_count{};  // last slot counts >= 7
    std::vector<std::uint64_t> accepted_bin_counts;        // size n0, 1-based bins at [k-1]
    std::uint64_t accepted = 0;  // periods with exactly one edge
    extract::SymbolStream symbols;

    double acceptance_ratio() const {
        return periods == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(periods);
    }
};

/// Full simulation pipeline from a seed. Bit-identical for fixed
/// (seed, block_periods) regardless of options.parallel or thread count.
Summary run(const ExperimentConfig& cfg, std::uint64_t periods, std::uint64_t seed,
            const Options& opts = {});

/// The same reduction over a pre-recorded event stream (file ingestion path).
Summary run_from_events(std::span<const std::uint64_t> ticks, const ExperimentConfig& cfg,
                        std::uint64_t periods, const Options& opts = {});

}  // namespace qrng::pipeline
