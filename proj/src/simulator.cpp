#include "qrng/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "qrng/rng.hpp"

namespace qrng::sim {

namespace {

// Events of one block, as ticks relative to the block start. The block spans
// span_ticks; a half-ulp of floating drift at the upper boundary is clipped
// so blocks can never bleed into each other.
void generate_block_ticks(double lambda_t0, std::uint64_t span_ticks, std::uint64_t bseed,
                          std::vector<std::uint64_t>& out) {
    out.clear();
    if (!(lambda_t0 > 0.0)) {
        return;
    }
    Xoshiro256pp rng(bseed);
    const double span = static_cast<double>(span_ticks);
    const double inv_rate = 1.0 / lambda_t0;
    double t = -std::log1p(-rng.uniform01()) * inv_rate;
    std::uint64_t prev_tick = ~std::uint64_t{0};
    while (t < span) {
        const auto tick = static_cast<std::uint64_t>(t);
        if (tick >= span_ticks) {
            break;
        }
        if (tick != prev_tick) {
            out.push_back(tick);
            prev_tick = tick;
        }
        t += -std::log1p(-rng.uniform01()) * inv_rate;
    }
}

struct BlockLayout {
    std::uint64_t block_periods;
    std::uint64_t block_count;
    std::uint64_t periods;

    std::uint64_t span_periods(std::uint64_t b) const {
        const std::uint64_t start = b * block_periods;
        return std::min(block_periods, periods - start);
    }
};

BlockLayout layout_blocks(std::uint64_t periods, std::uint64_t block_periods) {
    if (block_periods < 1) {
        throw std::invalid_argument("block_periods must be at least 1");
    }
    BlockLayout layout{};
    layout.block_periods = block_periods;
    layout.periods = periods;
    layout.block_count = (periods + block_periods - 1) / block_periods;
    return layout;
}

TimestampStream assemble_stream(const ExperimentConfig& cfg,
                                std::vector<std::vector<std::uint64_t>>& blocks,
                                const BlockLayout& layout, int n0) {
    TimestampStream stream;
    stream.t0_femtoseconds = t0_femtoseconds_of(cfg);
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.size();
    stream.ticks.reserve(total);
    for (std::uint64_t b = 0; b < layout.block_count; ++b) {
        const std::uint64_t first_tick = b * layout.block_periods * static_cast<std::uint64_t>(n0);
        for (std::uint64_t t : blocks[b]) {
            stream.ticks.push_back(first_tick + t);
        }
    }
    return stream;
}

void check_monotone(const TimestampStream& events) {
    for (std::size_t i = 1; i < events.ticks.size(); ++i) {
        if (events.ticks[i] <= events.ticks[i - 1]) {
            throw std::invalid_argument("merge_dead_time: events not strictly increasing at index " +
                                        std::to_string(i));
        }
    }
}

}  // namespace

std::uint64_t t0_femtoseconds_of(const ExperimentConfig& cfg) {
    const double fs = cfg.t0_seconds * 1e15;
    const auto rounded = static_cast<std::uint64_t>(std::llround(fs));
    if (rounded == 0) {
        throw std::invalid_argument("t0 below 1 fs cannot be represented in file metadata");
    }
    return rounded;
}

TimestampStream generate_arrivals(const ExperimentConfig& cfg, std::uint64_t duration_periods,
                                  std::uint64_t seed, std::uint64_t block_periods) {
    cfg.validate();
    if (duration_periods < 1) {
        throw std::invalid_argument("duration_periods must be at least 1");
    }
    const auto layout = layout_blocks(duration_periods, block_periods);
    const double lambda_t0 = cfg.lambda_t0();
    std::vector<std::vector<std::uint64_t>> blocks(layout.block_count);
    for (std::uint64_t b = 0; b < layout.block_count; ++b) {
        const std::uint64_t span = layout.span_periods(b) * static_cast<std::uint64_t>(cfg.n0);
        generate_block_ticks(lambda_t0, span, block_seed(seed, b), blocks[b]);
    }
    return assemble_stream(cfg, blocks, layout, cfg.n0);
}

TimestampStream generate_arrivals_parallel(const ExperimentConfig& cfg,
                                           std::uint64_t duration_periods, std::uint64_t seed,
                                           std::uint64_t block_periods) {
    cfg.validate();
    if (duration_periods < 1) {
        throw std::invalid_argument("duration_periods must be at least 1");
    }
    const auto layout = layout_blocks(duration_periods, block_periods);
    const double lambda_t0 = cfg.lambda_t0();
    std::vector<std::vector<std::uint64_t>> blocks(layout.block_count);
    const auto count = static_cast<std::int64_t>(layout.block_count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < count; ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        const std::uint64_t span = layout.span_periods(ub) * static_cast<std::uint64_t>(cfg.n0);
        generate_block_ticks(lambda_t0, span, block_seed(seed, ub), blocks[ub]);
    }
    return assemble_stream(cfg, blocks, layout, cfg.n0);
}

PulseTrain merge_dead_time(const TimestampStream& events, std::uint32_t nd_ticks) {
    check_monotone(events);
    PulseTrain out;
    const auto& t = events.ticks;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const bool edge = i == 0 || t[i] - t[i - 1] >= nd_ticks;
        if (edge) {
            out.edges.push_back(t[i]);
            out.merged_multiplicities.push_back(1);
        } else {
            ++out.merged_multiplicities.back();
        }
    }
    return out;
}

PulseTrain merge_dead_time_parallel(const TimestampStream& events, std::uint32_t nd_ticks) {
    check_monotone(events);
    const auto& t = events.ticks;
    const std::size_t n = t.size();
    PulseTrain out;
    if (n == 0) {
        return out;
    }

    // The edge flag depends only on the gap to the immediately preceding
    // event, so flagging is embarrassingly parallel; compaction uses
    // per-chunk counts.
    std::vector<std::uint8_t> is_edge(n);
    const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) {
        is_edge[static_cast<std::size_t>(i)] =
            i == 0 || t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i) - 1] >= nd_ticks;
    }

    std::size_t edge_count = 0;
    for (std::size_t i = 0; i < n; ++i) edge_count += is_edge[i];

    std::vector<std::size_t> edge_index;
    edge_index.reserve(edge_count);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_edge[i]) edge_index.push_back(i);
    }

    out.edges.resize(edge_count);
    out.merged_multiplicities.resize(edge_count);
    const auto ec = static_cast<std::int64_t>(edge_count);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < ec; ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        const std::size_t begin = edge_index[uj];
        const std::size_t end = uj + 1 < edge_count ? edge_index[uj + 1] : n;
        out.edges[uj] = t[begin];
        out.merged_multiplicities[uj] = static_cast<std::uint32_t>(end - begin);
    }
    return out;
}

std::vector<PeriodRecord> segment_periods(const PulseTrain& pulses, int n0,
                                          std::uint64_t period_count) {
    if (n0 < 1) {
        throw std::invalid_argument("segment_periods: n0 must be at least 1");
    }
    std::vector<PeriodRecord> records(period_count);
    for (std::uint64_t p = 0; p < period_count; ++p) {
        records[p].period_index = p;
    }
    const auto un0 = static_cast<std::uint64_t>(n0);
    for (std::uint64_t edge : pulses.edges) {
        const std::uint64_t p = edge / un0;
        if (p >= period_count) {
            break;  // beyond the simulated span: discarded, never wrapped
        }
        auto& r = records[p];
        ++r.edge_count;
        r.bin_k = r.edge_count == 1 ? static_cast<std::uint32_t>(edge % un0) + 1 : 0;
    }
    return records;
}

}  // namespace qrng::sim
