#include "qrng/extractor.hpp"

#include <cmath>
#include <stdexcept>

namespace qrng::extract {

Selection select_single_pulse(std::span<const PeriodRecord> records) {
    Selection out;
    out.total_periods = records.size();
    for (const auto& r : records) {
        if (r.edge_count == 1) {
            out.bins.push_back(r.bin_k);
        }
    }
    return out;
}

SymbolStream truncate_and_pack(std::span<const std::uint32_t> bins, int n0, int nd) {
    if (nd < 0 || n0 - 2 * nd < 2) {
        throw std::domain_error("truncate_and_pack: retained range must hold at least 2 bins");
    }
    SymbolStream out;
    out.symbol_range = static_cast<std::uint32_t>(n0 - 2 * nd);
    out.bit_width = static_cast<int>(std::floor(std::log2(static_cast<double>(out.symbol_range))));
    const std::uint32_t width_limit = 1u << out.bit_width;
    const auto lo = static_cast<std::uint32_t>(nd + 1);
    const auto hi = static_cast<std::uint32_t>(n0 - nd);
    out.input_count = bins.size();
    for (std::uint32_t k : bins) {
        if (k < lo || k > hi) {
            ++out.truncation_dropped;
            continue;
        }
        const std::uint32_t symbol = k - lo;
        if (symbol >= width_limit) {
            ++out.width_dropped;
            continue;
        }
        out.symbols.push_back(symbol);
    }
    out.kept = out.symbols.size();
    return out;
}

std::vector<std::uint8_t> symbols_to_bits(const SymbolStream& stream) {
    if (stream.bit_width < 1) {
        throw std::domain_error("symbols_to_bits: bit width must be at least 1");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(stream.symbols.size() * static_cast<std::size_t>(stream.bit_width));
    const std::uint32_t limit = 1u << stream.bit_width;
    for (std::uint32_t s : stream.symbols) {
        if (s >= limit) {
            throw std::logic_error("symbols_to_bits: symbol exceeds declared bit width");
        }
        for (int b = stream.bit_width - 1; b >= 0; --b) {
            bits.push_back(static_cast<std::uint8_t>((s >> b) & 1u));
        }
    }
    return bits;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes;
    const std::size_t full = bits.size() / 8;
    bytes.reserve(full);
    for (std::size_t i = 0; i < full; ++i) {
        std::uint8_t b = 0;
        for (std::size_t j = 0; j < 8; ++j) {
            b = static_cast<std::uint8_t>((b << 1) | (bits[i * 8 + j] & 1u));
        }
        bytes.push_back(b);
    }
    return bytes;
}

}  // namespace qrng::extract
