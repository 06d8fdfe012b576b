#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "qrng/io.hpp"
#include "qrng/simulator.hpp"

using namespace qrng;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
    static const fs::path dir = [] {
        auto p = fs::temp_directory_path() / "qrng_io_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string path_of(const char* name) { return (test_dir() / name).string(); }

std::string file_bytes(const std::string& path) { return io::read_text_file(path); }

}  // namespace

TEST_CASE("timestamp file round-trips bit-exactly") {
    sim::TimestampStream stream;
    stream.t0_femtoseconds = 162000;
    stream.ticks = {0, 1, 5, 41, 1000, 1ULL << 40};
    const auto path = path_of("roundtrip.qts");
    io::write_timestamp_file(path, stream);

    const auto back = io::read_timestamp_file(path);
    CHECK(back.t0_femtoseconds == stream.t0_femtoseconds);
    CHECK(back.ticks == stream.ticks);

    // rewriting produces byte-identical files
    const auto first = file_bytes(path);
    io::write_timestamp_file(path, stream);
    CHECK(file_bytes(path) == first);
}

TEST_CASE("empty stream round-trips") {
    sim::TimestampStream stream;
    stream.t0_femtoseconds = 1000;
    const auto path = path_of("empty.qts");
    io::write_timestamp_file(path, stream);
    CHECK(io::read_timestamp_file(path).ticks.empty());
}

TEST_CASE("malformed timestamp files are rejected with located errors") {
    const auto path = path_of("bad.qts");

    SUBCASE("bad magic") {
        std::string data = "NOTMAGIC";
        data.resize(26, '\0');
        io::write_text_file_atomic(path, data);
        CHECK_THROWS_WITH_AS(io::read_timestamp_file(path), doctest::Contains("bad magic"),
                             std::runtime_error);
    }
    SUBCASE("truncated header") {
        io::write_text_file_atomic(path, "QRNGTS01");
        CHECK_THROWS_WITH_AS(io::read_timestamp_file(path), doctest::Contains("truncated"),
                             std::runtime_error);
    }
    SUBCASE("record count mismatch") {
        sim::TimestampStream stream;
        stream.t0_femtoseconds = 1;
        stream.ticks = {1, 2, 3};
        io::write_timestamp_file(path, stream);
        auto data = file_bytes(path);
        data.resize(data.size() - 8);
        io::write_text_file_atomic(path, data);
        CHECK_THROWS_AS(io::read_timestamp_file(path), std::runtime_error);
    }
    SUBCASE("non-monotone records name the offending index") {
        sim::TimestampStream stream;
        stream.t0_femtoseconds = 1;
        stream.ticks = {1, 2, 3};
        io::write_timestamp_file(path, stream);
        auto data = file_bytes(path);
        data[26 + 8] = '\x01';  // second record := 1, duplicating the first
        for (int i = 1; i < 8; ++i) data[26 + 8 + i] = '\0';
        io::write_text_file_atomic(path, data);
        CHECK_THROWS_WITH_AS(io::read_timestamp_file(path), doctest::Contains("record 1"),
                             std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(io::read_timestamp_file(path_of("nonexistent.qts")), std::runtime_error);
    }
}

TEST_CASE("headerless tick files") {
    const auto path = path_of("plain.u64");
    std::string raw;
    for (std::uint64_t v : {5ULL, 9ULL, 300ULL}) {
        for (int i = 0; i < 8; ++i) raw.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    io::write_text_file_atomic(path, raw);
    const auto s = io::read_headerless_ticks(path, 162000);
    CHECK(s.ticks == std::vector<std::uint64_t>{5, 9, 300});
    CHECK(s.t0_femtoseconds == 162000);

    io::write_text_file_atomic(path, raw.substr(0, 12));
    CHECK_THROWS_WITH_AS(io::read_headerless_ticks(path, 162000),
                         doctest::Contains("multiple of 8"), std::runtime_error);
    CHECK_THROWS_AS(io::read_headerless_ticks(path, 0), std::runtime_error);
}

TEST_CASE("distribution CSV writes the documented header and round-trips") {
    io::DistributionTable table;
    table.theory_probability = {0.25, 0.5, 0.25};
    table.empirical_count = {24, 51, 25};
    table.empirical_frequency = {0.24, 0.51, 0.25};
    const auto path = path_of("dist.csv");
    io::write_distribution_csv(path, table);

    const auto text = file_bytes(path);
    CHECK(text.substr(0, text.find('\n')) ==
          "bin,theory_probability,empirical_count,empirical_frequency");

    const auto back = io::read_distribution_csv(path);
    CHECK(back.first_bin == 1);
    CHECK(back.theory_probability == table.theory_probability);
    CHECK(back.empirical_count == table.empirical_count);
    CHECK(back.empirical_frequency == table.empirical_frequency);
}

TEST_CASE("distribution CSV leaves absent columns empty") {
    io::DistributionTable table;
    table.first_bin = 33;
    table.theory_probability = {0.5, 0.5};
    const auto path = path_of("partial.csv");
    io::write_distribution_csv(path, table);
    const auto back = io::read_distribution_csv(path);
    CHECK(back.first_bin == 33);
    CHECK(back.theory_probability == table.theory_probability);
    CHECK(back.empirical_count.empty());
    CHECK(back.empirical_frequency.empty());
}

TEST_CASE("stream metadata sidecar round-trips") {
    io::StreamMetadata meta;
    meta.generator = "xoshiro256++/splitmix64-block-substreams/v1";
    meta.seed = 987654321;
    meta.t0_femtoseconds = 162000;
    meta.n0 = 320;
    meta.nd = 32;
    meta.lambda_per_second = 4.2e6;
    meta.periods = 1000;
    meta.block_periods = 4096;
    meta.toolkit_version = "0.1.0";
    const auto path = path_of("stream.qts.meta.json");
    io::write_stream_metadata(path, meta);
    const auto back = io::try_read_stream_metadata(path);
    REQUIRE(back.has_value());
    CHECK(back->generator == meta.generator);
    CHECK(back->seed == meta.seed);
    CHECK(back->n0 == meta.n0);
    CHECK(back->nd == meta.nd);
    CHECK(back->periods == meta.periods);
    CHECK(!io::try_read_stream_metadata(path_of("missing.meta.json")).has_value());
}

TEST_CASE("atomic writes do not leave temporaries behind") {
    const auto path = path_of("atomic.bin");
    io::write_bytes_atomic(path, std::vector<std::uint8_t>{1, 2, 3});
    CHECK(fs::exists(path));
    CHECK(!fs::exists(path + ".tmp"));
    CHECK_THROWS_AS(
        io::write_text_file_atomic((test_dir() / "no_dir" / "x.txt").string(), "data"),
        std::runtime_error);
}
