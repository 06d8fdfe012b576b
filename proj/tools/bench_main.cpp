// Compares the serial reference implementations against the OpenMP kernels
// on the full generate -> merge -> segment -> pack pipeline and verifies that
// the outputs are identical.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "qrng/pipeline.hpp"
#include "qrng/simulator.hpp"
#include "qrng/types.hpp"

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double timed(F&& fn) {
    const double start = now_seconds();
    fn();
    return now_seconds() - start;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP pipeline benchmark"};
    std::uint64_t periods = 20000000;
    double lambda_t0 = 0.00068;
    int n0 = 320;
    int nd = 32;
    std::uint64_t seed = 42;
    app.add_option("--periods", periods, "observation periods to simulate");
    app.add_option("--lambda-t0", lambda_t0, "mean detections per bin");
    app.add_option("--n0", n0, "bins per period");
    app.add_option("--nd", nd, "dead-time bins");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    qrng::ExperimentConfig cfg = qrng::ExperimentConfig::from_lambda_t0(lambda_t0, n0, nd);
    cfg.seed = seed;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("periods: %llu, lambda_t0: %g, n0: %d, nd: %d\n",
                static_cast<unsigned long long>(periods), lambda_t0, n0, nd);

    qrng::sim::TimestampStream serial_stream, parallel_stream;
    const double t_gen_s =
        timed([&] { serial_stream = qrng::sim::generate_arrivals(cfg, periods, seed); });
    const double t_gen_p =
        timed([&] { parallel_stream = qrng::sim::generate_arrivals_parallel(cfg, periods, seed); });
    const bool gen_equal = serial_stream.ticks == parallel_stream.ticks;
    std::printf("generate: serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s  (%zu events)\n",
                t_gen_s, t_gen_p, t_gen_s / t_gen_p, gen_equal ? "yes" : "NO",
                serial_stream.ticks.size());

    qrng::sim::PulseTrain merged_s, merged_p;
    const double t_merge_s =
        timed([&] { merged_s = qrng::sim::merge_dead_time(serial_stream, nd); });
    const double t_merge_p =
        timed([&] { merged_p = qrng::sim::merge_dead_time_parallel(serial_stream, nd); });
    const bool merge_equal = merged_s.edges == merged_p.edges &&
                             merged_s.merged_multiplicities == merged_p.merged_multiplicities;
    std::printf("merge:    serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s  (%zu edges)\n",
                t_merge_s, t_merge_p, t_merge_s / t_merge_p, merge_equal ? "yes" : "NO",
                merged_s.edges.size());

    qrng::pipeline::Summary sum_s, sum_p;
    qrng::pipeline::Options opt_s;
    opt_s.parallel = false;
    qrng::pipeline::Options opt_p;
    opt_p.parallel = true;
    const double t_pipe_s = timed([&] { sum_s = qrng::pipeline::run(cfg, periods, seed, opt_s); });
    const double t_pipe_p = timed([&] { sum_p = qrng::pipeline::run(cfg, periods, seed, opt_p); });
    const bool pipe_equal = sum_s.symbols.symbols == sum_p.symbols.symbols &&
                            sum_s.accepted_bin_counts == sum_p.accepted_bin_counts &&
                            sum_s.periods_by_edge_count == sum_p.periods_by_edge_count;
    std::printf("pipeline: serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s  (%llu symbols)\n",
                t_pipe_s, t_pipe_p, t_pipe_s / t_pipe_p, pipe_equal ? "yes" : "NO",
                static_cast<unsigned long long>(sum_s.symbols.kept));

    return gen_equal && merge_equal && pipe_equal ? 0 : 1;
}
