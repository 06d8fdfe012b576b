// Command-line front end: closed-form evaluation, simulation, extraction, and
// statistical qualification of photon-arrival-time random bitstreams.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrng/extractor.hpp"
#include "qrng/io.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/rng.hpp"
#include "qrng/simulator.hpp"
#include "qrng/stats.hpp"
#include "qrng/theory.hpp"
#include "qrng/types.hpp"
#include "qrng/version.hpp"

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#else
    (void)threads;
#endif
}

std::string truncated_csv_path(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ".truncated";
    }
    return path.substr(0, dot) + ".truncated" + path.substr(dot);
}

// ---------------------------------------------------------------- theory ---

struct TheoryArgs {
    double lambda_t0 = 0.0;
    int n0 = 0;
    int nd = 0;
    bool truncate = false;
    std::string out;
    double t0_seconds = 0.0;  // optional; enables absolute bitrate output
};

int run_theory(const TheoryArgs& a) {
    qrng::ExperimentConfig cfg;
    if (a.t0_seconds > 0.0) {
        cfg.t0_seconds = a.t0_seconds;
        cfg.lambda_per_second = a.lambda_t0 / a.t0_seconds;
    } else {
        cfg = qrng::ExperimentConfig::from_lambda_t0(a.lambda_t0, 1, 0);
    }
    cfg.n0 = a.n0;
    cfg.nd = a.nd;
    cfg.validate();

    const auto dist = qrng::theory::normalized_bin_distribution(cfg);
    const auto truncated = qrng::theory::truncate_distribution(dist, cfg.nd);
    const auto rf = qrng::theory::retained_fraction(dist, cfg.nd);
    const double p_max = dist.max_value();
    const double p_max_trunc = truncated.max_value();

    qrng::io::DistributionTable table;
    table.theory_probability = dist.values;
    qrng::io::write_distribution_csv(a.out, table);
    if (a.truncate) {
        qrng::io::DistributionTable trunc_table;
        trunc_table.first_bin = cfg.nd + 1;
        trunc_table.theory_probability = truncated.values;
        qrng::io::write_distribution_csv(truncated_csv_path(a.out), trunc_table);
    }

    std::cout << "lambda_t0=" << num(cfg.lambda_t0()) << "\n"
              << "n0=" << cfg.n0 << "\n"
              << "nd=" << cfg.nd << "\n"
              << "mu=" << num(cfg.mean_per_period()) << "\n"
              << "p_single_pulse="
              << num(qrng::theory::prob_single_pulse(cfg.mean_per_period(), cfg.dead_time_ratio()))
              << "\n"
              << "p_max=" << num(p_max) << "\n"
              << "h_inf=" << num(qrng::theory::min_entropy_per_bit(p_max, cfg.n0)) << "\n"
              << "p_max_truncated=" << num(p_max_trunc) << "\n"
              << "h_inf_truncated="
              << num(qrng::theory::min_entropy_per_bit(p_max_trunc, cfg.symbol_count())) << "\n"
              << "retained_fraction=" << num(rf.exact) << "\n"
              << "retained_fraction_approx=" << num(rf.approximate) << "\n";
    if (a.t0_seconds > 0.0) {
        const auto rate = qrng::theory::predicted_bitrate(cfg);
        std::cout << "bits_per_symbol=" << num(rate.bits_per_symbol) << "\n"
                  << "bitrate_bps=" << num(rate.exact_bps) << "\n"
                  << "bitrate_bps_approx=" << num(rate.approximate_bps) << "\n";
    }
    return 0;
}

// -------------------------------------------------------------- simulate ---

struct SimulateArgs {
    double lambda_per_s = 0.0;
    double t0_seconds = 0.0;
    int n0 = 0;
    int nd = 0;
    std::uint64_t periods = 0;
    std::uint64_t seed = 0;
    std::string out;
    double dark_per_s = 0.0;
    std::uint64_t block_periods = qrng::sim::kDefaultBlockPeriods;
    int threads = 0;
};

int run_simulate(const SimulateArgs& a) {
    set_threads(a.threads);
    qrng::ExperimentConfig cfg;
    cfg.t0_seconds = a.t0_seconds;
    cfg.n0 = a.n0;
    cfg.nd = a.nd;
    cfg.lambda_per_second = a.lambda_per_s;
    cfg.dark_rate_per_second = a.dark_per_s;
    cfg.seed = a.seed;
    cfg.validate();
    if (a.periods < 1) {
        throw std::invalid_argument("--periods must be at least 1");
    }

    const auto stream =
        qrng::sim::generate_arrivals_parallel(cfg, a.periods, a.seed, a.block_periods);
    qrng::io::write_timestamp_file(a.out, stream);

    qrng::io::StreamMetadata meta;
    meta.generator = qrng::kGeneratorId;
    meta.seed = a.seed;
    meta.t0_femtoseconds = stream.t0_femtoseconds;
    meta.n0 = a.n0;
    meta.nd = a.nd;
    meta.lambda_per_second = a.lambda_per_s;
    meta.dark_rate_per_second = a.dark_per_s;
    meta.periods = a.periods;
    meta.block_periods = a.block_periods;
    meta.toolkit_version = qrng::kVersion;
    qrng::io::write_stream_metadata(qrng::io::metadata_path_for(a.out), meta);

    std::cout << "out=" << a.out << "\n"
              << "events=" << stream.ticks.size() << "\n"
              << "periods=" << a.periods << "\n"
              << "seed=" << a.seed << "\n"
              << "generator=" << qrng::kGeneratorId << "\n";
    return 0;
}

// --------------------------------------------------------------- extract ---

struct ExtractArgs {
    std::string in;
    std::string format = "raw";
    std::string out;
    std::string report;
    int n0 = -1;
    int nd = -1;
    std::int64_t periods = -1;
    bool headerless = false;
    std::uint64_t t0_fs = 0;
    std::string emit_sts;
    std::string emit_dieharder;
    int threads = 0;
};

void write_ascii_bits(const std::string& path, const std::vector<std::uint8_t>& bits,
                      std::size_t line_length) {
    std::string text;
    text.reserve(bits.size() + bits.size() / line_length + 2);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        text.push_back(bits[i] ? '1' : '0');
        if ((i + 1) % line_length == 0) {
            text.push_back('\n');
        }
    }
    if (!bits.empty() && bits.size() % line_length != 0) {
        text.push_back('\n');
    }
    qrng::io::write_text_file_atomic(path, text);
}

int run_extract(const ExtractArgs& a) {
    set_threads(a.threads);
    const auto stream = a.headerless ? qrng::io::read_headerless_ticks(a.in, a.t0_fs)
                                     : qrng::io::read_timestamp_file(a.in);
    const auto meta = qrng::io::try_read_stream_metadata(qrng::io::metadata_path_for(a.in));

    qrng::ExperimentConfig cfg;
    cfg.t0_seconds = static_cast<double>(stream.t0_femtoseconds) * 1e-15;
    cfg.n0 = a.n0 > 0 ? a.n0 : (meta ? meta->n0 : 0);
    cfg.nd = a.nd >= 0 ? a.nd : (meta ? meta->nd : -1);
    if (cfg.n0 <= 0 || cfg.nd < 0) {
        throw std::invalid_argument(
            "period geometry unknown: pass --n0/--nd or keep the .meta.json sidecar next to the input");
    }
    cfg.lambda_per_second = meta ? meta->lambda_per_second : 0.0;
    cfg.validate();

    std::uint64_t periods = 0;
    if (a.periods > 0) {
        periods = static_cast<std::uint64_t>(a.periods);
    } else if (meta && meta->periods > 0) {
        periods = meta->periods;
    } else if (!stream.ticks.empty()) {
        periods = stream.ticks.back() / static_cast<std::uint64_t>(cfg.n0) + 1;
    }

    qrng::pipeline::Summary summary;
    if (periods > 0) {
        summary = qrng::pipeline::run_from_events(stream.ticks, cfg, periods);
    } else {
        summary.accepted_bin_counts.assign(static_cast<std::size_t>(cfg.n0), 0);
        summary.symbols.symbol_range = static_cast<std::uint32_t>(cfg.symbol_count());
        summary.symbols.bit_width =
            static_cast<int>(std::floor(std::log2(static_cast<double>(cfg.symbol_count()))));
    }

    const auto& symbols = summary.symbols;
    const auto bits = symbols.symbols.empty() ? std::vector<std::uint8_t>{}
                                              : qrng::extract::symbols_to_bits(symbols);

    if (a.format == "raw") {
        qrng::io::write_bytes_atomic(a.out, qrng::extract::pack_bits(bits));
    } else if (a.format == "ascii-bits") {
        write_ascii_bits(a.out, bits, 64);
    } else if (a.format == "symbols") {
        std::vector<std::uint8_t> bytes;
        if (symbols.bit_width <= 8) {
            bytes.reserve(symbols.symbols.size());
            for (std::uint32_t s : symbols.symbols) {
                bytes.push_back(static_cast<std::uint8_t>(s));
            }
        } else {
            bytes.reserve(symbols.symbols.size() * 2);
            for (std::uint32_t s : symbols.symbols) {
                bytes.push_back(static_cast<std::uint8_t>(s & 0xff));
                bytes.push_back(static_cast<std::uint8_t>((s >> 8) & 0xff));
            }
        }
        qrng::io::write_bytes_atomic(a.out, bytes);
    } else {
        throw std::invalid_argument("unknown --format " + a.format);
    }

    if (!a.emit_sts.empty()) {
        write_ascii_bits(a.emit_sts, bits, 1000000);
    }
    if (!a.emit_dieharder.empty()) {
        qrng::io::write_bytes_atomic(a.emit_dieharder, qrng::extract::pack_bits(bits));
    }

    if (!a.report.empty()) {
        nlohmann::json j;
        j["input"] = a.in;
        j["toolkit_version"] = qrng::kVersion;
        j["generator"] = meta ? meta->generator : "unknown";
        j["t0_femtoseconds"] = stream.t0_femtoseconds;
        j["n0"] = cfg.n0;
        j["nd"] = cfg.nd;
        j["periods"] = periods;
        j["events"] = stream.ticks.size();
        j["edges"] = summary.edges;
        j["accepted"] = summary.accepted;
        j["acceptance_ratio"] = summary.acceptance_ratio();
        j["retained_fraction"] = symbols.retained_fraction();
        j["truncation_dropped"] = symbols.truncation_dropped;
        j["width_dropped"] = symbols.width_dropped;
        j["bit_width"] = symbols.bit_width;
        j["symbols"] = symbols.kept;
        j["periods_by_edge_count"] = summary.periods_by_edge_count;
        j["accepted_bin_counts"] = summary.accepted_bin_counts;
        qrng::io::write_text_file_atomic(a.report, j.dump(2) + "\n");
    }

    std::cout << "periods=" << periods << "\n"
              << "events=" << stream.ticks.size() << "\n"
              << "edges=" << summary.edges << "\n"
              << "accepted=" << summary.accepted << "\n"
              << "acceptance_ratio=" << num(summary.acceptance_ratio()) << "\n"
              << "retained_fraction=" << num(symbols.retained_fraction()) << "\n"
              << "symbols=" << symbols.kept << "\n"
              << "bits=" << bits.size() << "\n";
    return 0;
}

// --------------------------------------------------------------- analyze ---

struct AnalyzeArgs {
    std::string bits_path;
    std::string symbols_path;
    std::string report;
    double alpha = 0.01;
    int block_len = 128;
    int chunks = 64;
    int n_symbols = 256;
};

std::vector<std::uint8_t> read_bits_file(const std::string& path) {
    const std::string text = qrng::io::read_text_file(path);
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c != '\n' && c != '\r' && c != ' ' && c != '\t') {
            throw std::runtime_error(path + ": unexpected character at offset " + std::to_string(i));
        }
    }
    return bits;
}

std::vector<std::uint32_t> read_symbol_file(const std::string& path, int n_symbols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::uint32_t> symbols;
    char c;
    std::size_t i = 0;
    while (in.get(c)) {
        const auto v = static_cast<std::uint32_t>(static_cast<unsigned char>(c));
        if (v >= static_cast<std::uint32_t>(n_symbols)) {
            throw std::runtime_error(path + ": symbol " + std::to_string(v) + " at offset " +
                                     std::to_string(i) + " is out of range 0.." +
                                     std::to_string(n_symbols - 1));
        }
        symbols.push_back(v);
        ++i;
    }
    return symbols;
}

bool is_power_of_two(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

int run_analyze(const AnalyzeArgs& a) {
    std::vector<std::uint8_t> bits;
    std::vector<std::uint32_t> symbols;
    std::string input;
    if (!a.bits_path.empty()) {
        input = a.bits_path;
        bits = read_bits_file(a.bits_path);
    } else {
        input = a.symbols_path;
        symbols = read_symbol_file(a.symbols_path, a.n_symbols);
        if (is_power_of_two(static_cast<unsigned>(a.n_symbols))) {
            const int w = static_cast<int>(std::log2(static_cast<double>(a.n_symbols)));
            bits.reserve(symbols.size() * static_cast<std::size_t>(w));
            for (std::uint32_t s : symbols) {
                for (int b = w - 1; b >= 0; --b) {
                    bits.push_back(static_cast<std::uint8_t>((s >> b) & 1u));
                }
            }
        }
    }
    if (bits.empty() && symbols.empty()) {
        throw std::runtime_error(input + ": input is empty");
    }

    qrng::stats::TestReport report;
    report.alpha = a.alpha;
    report.metadata.input = input;
    report.metadata.n_bits = bits.size();
    report.metadata.n_symbols = symbols.size();
    report.metadata.toolkit_version = qrng::kVersion;
    report.metadata.generator = "external-input";
    report.metadata.seed_provenance = "unspecified";

    std::vector<std::string> skipped;
    const auto try_test = [&](const char* name, auto&& fn) {
        try {
            report.add(fn());
        } catch (const std::domain_error& e) {
            skipped.push_back(std::string(name) + ": " + e.what());
        }
    };

    const std::span<const std::uint8_t> bit_span{bits};
    const std::span<const std::uint32_t> symbol_span{symbols};

    if (!bits.empty()) {
        try_test("monobit_frequency", [&] { return qrng::stats::monobit_frequency(bit_span); });
        try_test("block_frequency",
                 [&] { return qrng::stats::block_frequency(bit_span, a.block_len); });
        try_test("runs", [&] { return qrng::stats::runs_test(bit_span); });
    }
    if (!symbols.empty()) {
        try_test("chi_square_uniformity", [&] {
            return qrng::stats::chi_square_uniformity(qrng::stats::histogram(symbol_span, a.n_symbols));
        });
        try_test("serial_correlation",
                 [&] { return qrng::stats::serial_correlation_test(symbol_span); });
    }

    // per-chunk p-values pooled into the Kuiper aggregation
    std::vector<double> pooled;
    if (!bits.empty() && a.chunks > 1) {
        std::size_t chunk_bits = bits.size() / static_cast<std::size_t>(a.chunks);
        if (chunk_bits >= 2000) {
            for (int c = 0; c < a.chunks; ++c) {
                const auto chunk = bit_span.subspan(static_cast<std::size_t>(c) * chunk_bits, chunk_bits);
                try {
                    pooled.push_back(qrng::stats::monobit_frequency(chunk).p_value);
                    pooled.push_back(qrng::stats::block_frequency(chunk, a.block_len).p_value);
                    pooled.push_back(qrng::stats::runs_test(chunk).p_value);
                } catch (const std::domain_error&) {
                    break;
                }
            }
        }
    }
    if (!symbols.empty() && a.chunks > 1) {
        const std::size_t chunk_syms = symbols.size() / static_cast<std::size_t>(a.chunks);
        if (chunk_syms >= 8 * static_cast<std::size_t>(a.n_symbols)) {
            for (int c = 0; c < a.chunks; ++c) {
                const auto chunk =
                    symbol_span.subspan(static_cast<std::size_t>(c) * chunk_syms, chunk_syms);
                pooled.push_back(
                    qrng::stats::chi_square_uniformity(qrng::stats::histogram(chunk, a.n_symbols))
                        .p_value);
            }
        }
    }
    if (pooled.size() >= 5) {
        try_test("kuiper_aggregate", [&] { return qrng::stats::kuiper_aggregate(pooled); });
    } else {
        skipped.push_back("kuiper_aggregate: fewer than 5 chunk p-values available");
    }

    qrng::io::write_text_file_atomic(a.report, report.to_json() + "\n");

    for (const auto& e : report.entries) {
        std::cout << e.name << " statistic=" << num(e.statistic) << " p=" << num(e.p_value) << " "
                  << (e.pass ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& s : skipped) {
        std::cerr << "skipped: " << s << "\n";
    }
    if (report.entries.empty()) {
        std::cerr << "error: no test could run on this input\n";
        return 2;
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photon-arrival-time QRNG toolkit"};
    app.set_version_flag("--version", std::string("qrng ") + qrng::kVersion);
    app.require_subcommand(1);

    TheoryArgs theory_args;
    auto* theory = app.add_subcommand("theory", "evaluate the closed-form bin distribution");
    theory->add_option("--lambda-t0", theory_args.lambda_t0, "mean detections per bin")
        ->required()
        ->check(CLI::PositiveNumber);
    theory->add_option("--n0", theory_args.n0, "bins per period")->required();
    theory->add_option("--nd", theory_args.nd, "dead-time width in bins")->required();
    theory->add_flag("--truncate", theory_args.truncate, "write the truncated distribution");
    theory->add_option("--out", theory_args.out, "output CSV path")->required();
    theory->add_option("--t0-s", theory_args.t0_seconds, "bin width in seconds (enables bitrate)");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "generate a detector timestamp stream");
    simulate->add_option("--lambda-per-s", sim_args.lambda_per_s, "detection rate, events/s")
        ->required();
    simulate->add_option("--t0-s", sim_args.t0_seconds, "bin width in seconds")->required();
    simulate->add_option("--n0", sim_args.n0, "bins per period")->required();
    simulate->add_option("--nd", sim_args.nd, "dead-time width in bins")->required();
    simulate->add_option("--periods", sim_args.periods, "number of observation periods")->required();
    simulate->add_option("--seed", sim_args.seed, "RNG seed")->required();
    simulate->add_option("--out", sim_args.out, "output timestamp file")->required();
    simulate->add_option("--dark-per-s", sim_args.dark_per_s, "additive dark-count rate, events/s");
    simulate->add_option("--block-periods", sim_args.block_periods,
                         "periods per RNG substream block");
    simulate->add_option("--threads", sim_args.threads, "worker threads (0 = library default)");

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "turn a timestamp stream into random bits");
    extract->add_option("--in", extract_args.in, "input timestamp file")->required();
    extract->add_option("--format", extract_args.format, "raw | ascii-bits | symbols")
        ->check(CLI::IsMember({"raw", "ascii-bits", "symbols"}));
    extract->add_option("--out", extract_args.out, "output path")->required();
    extract->add_option("--report", extract_args.report, "JSON statistics sidecar");
    extract->add_option("--n0", extract_args.n0, "bins per period (overrides sidecar)");
    extract->add_option("--nd", extract_args.nd, "dead-time bins (overrides sidecar)");
    extract->add_option("--periods", extract_args.periods, "period count (overrides sidecar)");
    extract->add_flag("--headerless", extract_args.headerless, "input is plain u64 ticks");
    extract->add_option("--t0-fs", extract_args.t0_fs, "tick size in fs (headerless mode)");
    extract->add_option("--emit-sts", extract_args.emit_sts, "ASCII bit export for external suites");
    extract->add_option("--emit-dieharder", extract_args.emit_dieharder, "raw byte export");
    extract->add_option("--threads", extract_args.threads, "worker threads");

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "run the statistical test battery");
    auto* bits_opt = analyze->add_option("--bits", analyze_args.bits_path, "ASCII '0'/'1' input");
    auto* syms_opt =
        analyze->add_option("--symbols", analyze_args.symbols_path, "raw byte symbol input");
    bits_opt->excludes(syms_opt);
    analyze->add_option("--report", analyze_args.report, "JSON report path")->required();
    analyze->add_option("--alpha", analyze_args.alpha, "significance level");
    analyze->add_option("--block-len", analyze_args.block_len, "block-frequency block length");
    analyze->add_option("--chunks", analyze_args.chunks, "chunk count for p-value pooling");
    analyze->add_option("--n-symbols", analyze_args.n_symbols, "symbol alphabet size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (theory->parsed()) return run_theory(theory_args);
        if (simulate->parsed()) return run_simulate(sim_args);
        if (extract->parsed()) return run_extract(extract_args);
        if (analyze->parsed()) {
            if (analyze_args.bits_path.empty() && analyze_args.symbols_path.empty()) {
                std::cerr << "error: one of --bits or --symbols is required\n";
                return 2;
            }
            return run_analyze(analyze_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
