#include "qrng/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qrng::io {

namespace {

constexpr std::size_t kHeaderBytes = 8 + 2 + 8 + 8;

void put_u16le(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u64le(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

std::uint16_t get_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

void atomic_replace(const std::string& tmp, const std::string& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move temporary file onto " + path + ": " + ec.message());
    }
}

void write_file_atomic(const std::string& path, const char* data, std::size_t size) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp + " for writing");
        }
        out.write(data, static_cast<std::streamsize>(size));
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("short write to " + tmp);
        }
    }
    atomic_replace(tmp, path);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

}  // namespace

void write_timestamp_file(const std::string& path, const sim::TimestampStream& stream) {
    std::string buf;
    buf.reserve(kHeaderBytes + stream.ticks.size() * 8);
    buf.append(kTimestampMagic, 8);
    put_u16le(buf, kTimestampVersion);
    put_u64le(buf, stream.t0_femtoseconds);
    put_u64le(buf, static_cast<std::uint64_t>(stream.ticks.size()));
    for (std::uint64_t t : stream.ticks) {
        put_u64le(buf, t);
    }
    write_file_atomic(path, buf.data(), buf.size());
}

sim::TimestampStream read_timestamp_file(const std::string& path) {
    const std::string raw = slurp(path);
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    if (raw.size() < kHeaderBytes) {
        throw std::runtime_error(path + ": truncated header (" + std::to_string(raw.size()) +
                                 " bytes, need " + std::to_string(kHeaderBytes) + ")");
    }
    if (std::memcmp(p, kTimestampMagic, 8) != 0) {
        throw std::runtime_error(path + ": bad magic at offset 0");
    }
    const std::uint16_t version = get_u16le(p + 8);
    if (version != kTimestampVersion) {
        throw std::runtime_error(path + ": unsupported format version " + std::to_string(version) +
                                 " at offset 8");
    }
    sim::TimestampStream stream;
    stream.t0_femtoseconds = get_u64le(p + 10);
    if (stream.t0_femtoseconds == 0) {
        throw std::runtime_error(path + ": zero t0 at offset 10");
    }
    const std::uint64_t count = get_u64le(p + 18);
    if (raw.size() != kHeaderBytes + count * 8) {
        throw std::runtime_error(path + ": expected " + std::to_string(count) + " records (" +
                                 std::to_string(kHeaderBytes + count * 8) + " bytes), file has " +
                                 std::to_string(raw.size()) + " bytes");
    }
    stream.ticks.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        stream.ticks[i] = get_u64le(p + kHeaderBytes + i * 8);
        if (i > 0 && stream.ticks[i] <= stream.ticks[i - 1]) {
            throw std::runtime_error(path + ": non-monotone tick at record " + std::to_string(i) +
                                     " (offset " + std::to_string(kHeaderBytes + i * 8) + ")");
        }
    }
    return stream;
}

sim::TimestampStream read_headerless_ticks(const std::string& path,
                                           std::uint64_t t0_femtoseconds) {
    if (t0_femtoseconds == 0) {
        throw std::runtime_error("headerless mode requires a positive t0");
    }
    const std::string raw = slurp(path);
    if (raw.size() % 8 != 0) {
        throw std::runtime_error(path + ": size " + std::to_string(raw.size()) +
                                 " is not a multiple of 8");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    sim::TimestampStream stream;
    stream.t0_femtoseconds = t0_femtoseconds;
    const std::uint64_t count = raw.size() / 8;
    stream.ticks.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        stream.ticks[i] = get_u64le(p + i * 8);
        if (i > 0 && stream.ticks[i] <= stream.ticks[i - 1]) {
            throw std::runtime_error(path + ": non-monotone tick at record " + std::to_string(i) +
                                     " (offset " + std::to_string(i * 8) + ")");
        }
    }
    return stream;
}

std::size_t DistributionTable::rows() const {
    std::size_t n = theory_probability.size();
    n = std::max(n, empirical_count.size());
    n = std::max(n, empirical_frequency.size());
    return n;
}

void write_distribution_csv(const std::string& path, const DistributionTable& table) {
    const std::size_t n = table.rows();
    for (const auto* col : {&table.theory_probability, &table.empirical_count,
                            &table.empirical_frequency}) {
        if (!col->empty() && col->size() != n) {
            throw std::invalid_argument("distribution table columns have mismatched lengths");
        }
    }
    std::string buf = "bin,theory_probability,empirical_count,empirical_frequency\n";
    char line[128];
    for (std::size_t i = 0; i < n; ++i) {
        buf += std::to_string(table.first_bin + static_cast<int>(i));
        if (!table.theory_probability.empty()) {
            std::snprintf(line, sizeof line, ",%.17g", table.theory_probability[i]);
            buf += line;
        } else {
            buf += ',';
        }
        if (!table.empirical_count.empty()) {
            std::snprintf(line, sizeof line, ",%.17g", table.empirical_count[i]);
            buf += line;
        } else {
            buf += ',';
        }
        if (!table.empirical_frequency.empty()) {
            std::snprintf(line, sizeof line, ",%.17g", table.empirical_frequency[i]);
            buf += line;
        } else {
            buf += ',';
        }
        buf += '\n';
    }
    write_file_atomic(path, buf.data(), buf.size());
}

DistributionTable read_distribution_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) ||
        line != "bin,theory_probability,empirical_count,empirical_frequency") {
        throw std::runtime_error(path + ": missing or unexpected CSV header");
    }
    DistributionTable table;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<std::string, 4> fields;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= fields.size()) {
                    throw std::runtime_error(path + ": too many fields in row");
                }
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (first) {
            table.first_bin = std::stoi(fields[0]);
            first = false;
        }
        if (!fields[1].empty()) table.theory_probability.push_back(std::stod(fields[1]));
        if (!fields[2].empty()) table.empirical_count.push_back(std::stod(fields[2]));
        if (!fields[3].empty()) table.empirical_frequency.push_back(std::stod(fields[3]));
    }
    return table;
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    write_file_atomic(path, content.data(), content.size());
}

std::string read_text_file(const std::string& path) { return slurp(path); }

void write_bytes_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    write_file_atomic(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::string metadata_path_for(const std::string& timestamp_path) {
    return timestamp_path + ".meta.json";
}

void write_stream_metadata(const std::string& path, const StreamMetadata& meta) {
    nlohmann::json j;
    j["format"] = "qrng-timestamp-metadata";
    j["generator"] = meta.generator;
    j["seed"] = meta.seed;
    j["t0_femtoseconds"] = meta.t0_femtoseconds;
    j["n0"] = meta.n0;
    j["nd"] = meta.nd;
    j["lambda_per_second"] = meta.lambda_per_second;
    j["dark_rate_per_second"] = meta.dark_rate_per_second;
    j["periods"] = meta.periods;
    j["block_periods"] = meta.block_periods;
    j["toolkit_version"] = meta.toolkit_version;
    write_text_file_atomic(path, j.dump(2) + "\n");
}

std::optional<StreamMetadata> try_read_stream_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    StreamMetadata meta;
    try {
        const auto j = nlohmann::json::parse(ss.str());
        meta.generator = j.value("generator", std::string{});
        meta.seed = j.value("seed", std::uint64_t{0});
        meta.t0_femtoseconds = j.value("t0_femtoseconds", std::uint64_t{0});
        meta.n0 = j.value("n0", 0);
        meta.nd = j.value("nd", 0);
        meta.lambda_per_second = j.value("lambda_per_second", 0.0);
        meta.dark_rate_per_second = j.value("dark_rate_per_second", 0.0);
        meta.periods = j.value("periods", std::uint64_t{0});
        meta.block_periods = j.value("block_periods", std::uint64_t{0});
        meta.toolkit_version = j.value("toolkit_version", std::string{});
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    return meta;
}

}  // namespace qrng::io
