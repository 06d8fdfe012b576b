#include "qrng/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrng::pipeline {

namespace {

struct BlockPartial {
    std::uint64_t edges = 0;
    std::uint64_t accepted = 0;
    std::array<std::uint64_t, 8> by_count{};
    std::uint64_t kept = 0;
    std::uint64_t truncation_dropped = 0;
    std::uint64_t width_dropped = 0;
    std::vector<std::uint32_t> symbols;
};

struct PackParams {
    std::uint64_t nd_ticks = 0;
    std::uint64_t n0 = 0;
    std::uint32_t lo = 0;  // first retained 1-based bin
    std::uint32_t hi = 0;  // last retained 1-based bin
    std::uint32_t width_limit = 0;
};

// One block of the reduction. `ticks` is the block's slice of the global
// event stream; `has_prev`/`prev_last` carry the fix-up state: the block's
// first event is an edge only if its gap to the previous block's last event
// clears the dead time.
void process_block(std::span<const std::uint64_t> ticks, bool has_prev, std::uint64_t prev_last,
                   std::uint64_t first_tick, std::uint64_t span_periods, const PackParams& p,
                   bool keep_symbols, BlockPartial& out, std::vector<std::uint64_t>& hist) {
    std::uint64_t cur_period = 0;
    bool in_period = false;
    std::uint32_t cur_count = 0;
    std::uint32_t cur_bin = 0;
    std::uint64_t periods_with_edges = 0;

    const auto finalize = [&] {
        if (!in_period) {
            return;
        }
        ++periods_with_edges;
        ++out.by_count[std::min<std::uint32_t>(cur_count, 7)];
        if (cur_count == 1) {
            ++out.accepted;
            ++hist[cur_bin - 1];
            if (cur_bin < p.lo || cur_bin > p.hi) {
                ++out.truncation_dropped;
            } else if (const std::uint32_t symbol = cur_bin - p.lo; symbol >= p.width_limit) {
                ++out.width_dropped;
            } else {
                ++out.kept;
                if (keep_symbols) {
                    out.symbols.push_back(symbol);
                }
            }
        }
    };

    for (std::size_t i = 0; i < ticks.size(); ++i) {
        const bool edge = i == 0 ? (!has_prev || ticks[0] - prev_last >= p.nd_ticks)
                                 : (ticks[i] - ticks[i - 1] >= p.nd_ticks);
        if (!edge) {
            continue;
        }
        ++out.edges;
        const std::uint64_t offset = ticks[i] - first_tick;
        const std::uint64_t period = offset / p.n0;
        if (!in_period || period != cur_period) {
            finalize();
            in_period = true;
            cur_period = period;
            cur_count = 0;
        }
        ++cur_count;
        if (cur_count == 1) {
            cur_bin = static_cast<std::uint32_t>(offset % p.n0) + 1;
        }
    }
    finalize();
    out.by_count[0] += span_periods - periods_with_edges;
}

}  // namespace

Summary run_from_events(std::span<const std::uint64_t> ticks, const ExperimentConfig& cfg,
                        std::uint64_t periods, const Options& opts) {
    cfg.validate();
    if (periods < 1) {
        throw std::invalid_argument("pipeline: periods must be at least 1");
    }
    if (cfg.symbol_count() < 2) {
        throw std::domain_error("pipeline: retained range must hold at least 2 bins");
    }
    if (opts.block_periods < 1) {
        throw std::invalid_argument("pipeline: block_periods must be at least 1");
    }
    if (periods / opts.block_periods > (1ULL << 28)) {
        throw std::invalid_argument(
            "pipeline: more than 2^28 blocks; raise block_periods or rebase the tick origin");
    }

    const auto n0 = static_cast<std::uint64_t>(cfg.n0);
    const std::uint64_t total_ticks = periods * n0;
    // events at or beyond the simulated span are discarded, never wrapped
    const auto end_it = std::lower_bound(ticks.begin(), ticks.end(), total_ticks);
    const std::span<const std::uint64_t> in_span{ticks.begin(), end_it};

    const std::uint64_t block_count = (periods + opts.block_periods - 1) / opts.block_periods;
    std::vector<std::size_t> boundary(block_count + 1);
    boundary[0] = 0;
    boundary[block_count] = in_span.size();
    for (std::uint64_t b = 1; b < block_count; ++b) {
        const std::uint64_t first_tick = b * opts.block_periods * n0;
        boundary[b] = static_cast<std::size_t>(
            std::lower_bound(in_span.begin(), in_span.end(), first_tick) - in_span.begin());
    }

    PackParams params;
    params.nd_ticks = static_cast<std::uint64_t>(cfg.nd);
    params.n0 = n0;
    params.lo = static_cast<std::uint32_t>(cfg.nd + 1);
    params.hi = static_cast<std::uint32_t>(cfg.n0 - cfg.nd);
    const int bit_width =
        static_cast<int>(std::floor(std::log2(static_cast<double>(cfg.symbol_count()))));
    params.width_limit = 1u << bit_width;

    Summary summary;
    summary.periods = periods;
    summary.events = in_span.size();
    summary.accepted_bin_counts.assign(static_cast<std::size_t>(cfg.n0), 0);
    summary.symbols.bit_width = bit_width;
    summary.symbols.symbol_range = static_cast<std::uint32_t>(cfg.symbol_count());

    std::vector<BlockPartial> partials(block_count);

    const auto process_one = [&](std::uint64_t b, std::vector<std::uint64_t>& hist) {
        const std::size_t begin = boundary[b];
        const std::size_t end = boundary[b + 1];
        const std::uint64_t first_period = b * opts.block_periods;
        const std::uint64_t span_periods = std::min(opts.block_periods, periods - first_period);
        process_block(in_span.subspan(begin, end - begin), begin > 0,
                      begin > 0 ? in_span[begin - 1] : 0, first_period * n0, span_periods, params,
                      opts.keep_symbols, partials[b], hist);
    };

    if (opts.parallel) {
        const auto count = static_cast<std::int64_t>(block_count);
#pragma omp parallel
        {
            std::vector<std::uint64_t> local_hist(static_cast<std::size_t>(cfg.n0), 0);
#pragma omp for schedule(dynamic, 4)
            for (std::int64_t b = 0; b < count; ++b) {
                process_one(static_cast<std::uint64_t>(b), local_hist);
            }
#pragma omp critical
            {
                for (std::size_t k = 0; k < local_hist.size(); ++k) {
                    summary.accepted_bin_counts[k] += local_hist[k];
                }
            }
        }
    } else {
        std::vector<std::uint64_t> hist(static_cast<std::size_t>(cfg.n0), 0);
        for (std::uint64_t b = 0; b < block_count; ++b) {
            process_one(b, hist);
        }
        for (std::size_t k = 0; k < hist.size(); ++k) {
            summary.accepted_bin_counts[k] += hist[k];
        }
    }

    std::size_t total_symbols = 0;
    for (const auto& p : partials) total_symbols += p.symbols.size();
    summary.symbols.symbols.reserve(total_symbols);
    for (const auto& p : partials) {
        summary.edges += p.edges;
        summary.accepted += p.accepted;
        for (std::size_t m = 0; m < p.by_count.size(); ++m) {
            summary.periods_by_edge_count[m] += p.by_count[m];
        }
        summary.symbols.kept += p.kept;
        summary.symbols.truncation_dropped += p.truncation_dropped;
        summary.symbols.width_dropped += p.width_dropped;
        summary.symbols.symbols.insert(summary.symbols.symbols.end(), p.symbols.begin(),
                                       p.symbols.end());
    }
    summary.symbols.input_count = summary.accepted;
    return summary;
}

Summary run(const ExperimentConfig& cfg, std::uint64_t periods, std::uint64_t seed,
            const Options& opts) {
    const auto stream = opts.parallel
                            ? sim::generate_arrivals_parallel(cfg, periods, seed, opts.block_periods)
                            : sim::generate_arrivals(cfg, periods, seed, opts.block_periods);
    return run_from_events(stream.ticks, cfg, periods, opts);
}

}  // namespace qrng::pipeline
