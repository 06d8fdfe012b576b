#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrng/types.hpp"

namespace qrng::extract {

struct Selection {
    std::vector<std::uint32_t> bins;  // 1-based bin of each single-pulse period, in order
    std::uint64_t total_periods = 0;

    double acceptance_ratio() const {
        return total_periods == 0 ? 0.0
                                  : static_cast<double>(bins.size()) / static_cast<double>(total_periods);
    }
};

/// Order-preserving filter keeping the bin index of periods with exactly one
/// pulse. No other processing: this is the whole debiasing step.
Selection select_single_pulse(std::span<const PeriodRecord> records);

struct SymbolStream {
    int bit_width = 0;               // bits per emitted symbol
    std::uint32_t symbol_range = 0;  // number of retained bins, n0 - 2*nd
    std::vector<std::uint32_t> symbols;
    std::uint64_t kept = 0;                // == symbols.size() unless symbols are not collected
    std::uint64_t input_count = 0;         // accepted periods offered
    std::uint64_t truncation_dropped = 0;  // bins outside [nd+1, n0-nd]
    std::uint64_t width_dropped = 0;       // symbols >= 2^bit_width (non-power-of-two ranges)

    double retained_fraction() const {
        return input_count == 0 ? 0.0
                                : static_cast<double>(kept) / static_cast<double>(input_count);
    }
};

/// Keeps bins in [nd+1, n0-nd] and remaps them to symbols k - (nd+1).
/// When the retained range is not a power of two, symbols are emitted at
/// width floor(log2(range)) and out-of-range symbols discarded (and counted);
/// any remapping cleverer than that would be post-processing.
SymbolStream truncate_and_pack(std::span<const std::uint32_t> bins, int n0, int nd);

/// One 0/1 per element, most-significant bit of each symbol first.
std::vector<std::uint8_t> symbols_to_bits(const SymbolStream& stream);

/// Packs a 0/1 sequence into bytes MSB-first; a trailing partial byte is dropped.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);

}  // namespace qrng::extract
