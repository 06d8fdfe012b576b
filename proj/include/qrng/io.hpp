#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrng/simulator.hpp"
#include "qrng/types.hpp"

namespace qrng::io {

inline constexpr char kTimestampMagic[9] = "QRNGTS01";  // 8 bytes on disk
inline constexpr std::uint16_t kTimestampVersion = 1;

/// Binary timestamp file: magic (8 bytes), version (u16 LE), t0 in
/// femtoseconds (u64 LE), record count (u64 LE), then the tick values as
/// little-endian u64, strictly increasing. Written atomically (temp+rename).
void write_timestamp_file(const std::string& path, const sim::TimestampStream& stream);

/// Throws std::runtime_error naming the byte offset (and record index where
/// applicable) for bad magic, version, truncation, or non-monotone records.
sim::TimestampStream read_timestamp_file(const std::string& path);

/// Headerless mode: a plain stream of little-endian u64 ticks. t0 must be
/// supplied by the caller.
sim::TimestampStream read_headerless_ticks(const std::string& path,
                                           std::uint64_t t0_femtoseconds);

/// Per-bin table for plotting. Columns may be empty (absent); rows run over
/// bins first_bin .. first_bin + rows - 1.
struct DistributionTable {
    int first_bin = 1;
    std::vector<double> theory_probability;
    std::vector<double> empirical_count;
    std::vector<double> empirical_frequency;

    std::size_t rows() const;
};

/// CSV with header "bin,theory_probability,empirical_count,empirical_frequency";
/// empty fields where a column is absent. Atomic.
void write_distribution_csv(const std::string& path, const DistributionTable& table);
DistributionTable read_distribution_csv(const std::string& path);

void write_text_file_atomic(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_bytes_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);

/// Sidecar metadata (JSON) describing how a timestamp file was produced.
struct StreamMetadata {
    std::string generator;
    std::uint64_t seed = 0;
    std::uint64_t t0_femtoseconds = 0;
    int n0 = 0;
    int nd = 0;
    double lambda_per_second = 0.0;
    double dark_rate_per_second = 0.0;
    std::uint64_t periods = 0;
    std::uint64_t block_periods = 0;
    std::string toolkit_version;
};

std::string metadata_path_for(const std::string& timestamp_path);
void write_stream_metadata(const std::string& path, const StreamMetadata& meta);
std::optional<StreamMetadata> try_read_stream_metadata(const std::string& path);

}  // namespace qrng::io
