#include "qrng/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qrng/special.hpp"

namespace qrng::stats {

namespace {

std::string fmt_n(std::uint64_t n) { return "n=" + std::to_string(n); }

}  // namespace

BinDistribution histogram(std::span<const std::uint32_t> symbols, int n_symbols) {
    if (n_symbols < 1) {
        throw std::domain_error("histogram: n_symbols must be at least 1");
    }
    BinDistribution out;
    out.n0 = n_symbols;
    out.kind = DistributionKind::EmpiricalCount;
    out.values.assign(static_cast<std::size_t>(n_symbols), 0.0);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] >= static_cast<std::uint32_t>(n_symbols)) {
            throw std::runtime_error("histogram: symbol " + std::to_string(symbols[i]) +
                                     " at index " + std::to_string(i) + " is out of range 0.." +
                                     std::to_string(n_symbols - 1));
        }
        out.values[symbols[i]] += 1.0;
    }
    return out;
}

double empirical_min_entropy(const BinDistribution& hist) {
    const double total = hist.sum();
    if (!(total > 0.0)) {
        throw std::domain_error("empirical_min_entropy: empty histogram");
    }
    if (hist.n0 < 2) {
        throw std::domain_error("empirical_min_entropy: need at least 2 bins");
    }
    const double max_freq = hist.max_value() / total;
    return -std::log2(max_freq) / std::log2(static_cast<double>(hist.n0));
}

TestResult chi_square_uniformity(const BinDistribution& counts) {
    if (counts.kind != DistributionKind::EmpiricalCount) {
        throw std::invalid_argument("chi_square_uniformity: expects an EmpiricalCount histogram");
    }
    if (counts.n0 < 2) {
        throw std::domain_error("chi_square_uniformity: need at least 2 bins");
    }
    const double total = counts.sum();
    if (!(total > 0.0)) {
        throw std::domain_error("chi_square_uniformity: empty histogram");
    }
    const double expected = total / counts.n0;
    TestResult r;
    r.name = "chi_square_uniformity";
    r.parameters = "bins=" + std::to_string(counts.n0) + ",n=" + std::to_string(static_cast<std::uint64_t>(total));
    if (expected < 5.0) {
        r.note = "expected count per bin below 5; p-value approximate";
    }
    double stat = 0.0;
    for (double c : counts.values) {
        const double d = c - expected;
        stat += d * d / expected;
    }
    r.statistic = stat;
    r.p_value = special::chi_square_sf(stat, static_cast<double>(counts.n0 - 1));
    return r;
}

TestResult chi_square_against(const BinDistribution& counts, const BinDistribution& expected) {
    if (counts.kind != DistributionKind::EmpiricalCount) {
        throw std::invalid_argument("chi_square_against: expects an EmpiricalCount histogram");
    }
    if (counts.n0 != expected.n0) {
        throw std::invalid_argument("chi_square_against: bin count mismatch");
    }
    if (counts.n0 < 2) {
        throw std::domain_error("chi_square_against: need at least 2 bins");
    }
    const double total = counts.sum();
    if (!(total > 0.0)) {
        throw std::domain_error("chi_square_against: empty histogram");
    }
    TestResult r;
    r.name = "chi_square_gof";
    r.parameters = "bins=" + std::to_string(counts.n0) + ",n=" + std::to_string(static_cast<std::uint64_t>(total));
    double stat = 0.0;
    double min_expected = total;
    for (int k = 0; k < counts.n0; ++k) {
        const double e = expected.values[static_cast<std::size_t>(k)] * total;
        if (!(e > 0.0)) {
            throw std::domain_error("chi_square_against: expected probability is zero in bin " +
                                    std::to_string(k + 1));
        }
        min_expected = std::min(min_expected, e);
        const double d = counts.values[static_cast<std::size_t>(k)] - e;
        stat += d * d / e;
    }
    if (min_expected < 5.0) {
        r.note = "expected count per bin below 5; p-value approximate";
    }
    r.statistic = stat;
    r.p_value = special::chi_square_sf(stat, static_cast<double>(counts.n0 - 1));
    return r;
}

TestResult monobit_frequency(std::span<const std::uint8_t> bits) {
    const std::uint64_t n = bits.size();
    if (n < 100) {
        throw std::domain_error("monobit_frequency: need at least 100 bits");
    }
    std::int64_t s = 0;
    for (std::uint8_t b : bits) {
        s += b ? 1 : -1;
    }
    TestResult r;
    r.name = "monobit_frequency";
    r.parameters = fmt_n(n);
    r.statistic = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(n));
    r.p_value = std::erfc(r.statistic / std::sqrt(2.0));
    return r;
}

TestResult block_frequency(std::span<const std::uint8_t> bits, int block_len) {
    if (block_len < 1) {
        throw std::domain_error("block_frequency: block length must be positive");
    }
    const std::uint64_t n = bits.size();
    if (n < 20ULL * static_cast<std::uint64_t>(block_len)) {
        throw std::domain_error("block_frequency: need at least 20 blocks of " +
                                std::to_string(block_len) + " bits");
    }
    const std::uint64_t blocks = n / static_cast<std::uint64_t>(block_len);
    double stat = 0.0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        std::uint64_t ones = 0;
        const std::size_t base = static_cast<std::size_t>(b) * static_cast<std::size_t>(block_len);
        for (int i = 0; i < block_len; ++i) {
            ones += bits[base + static_cast<std::size_t>(i)];
        }
        const double pi = static_cast<double>(ones) / block_len;
        stat += (pi - 0.5) * (pi - 0.5);
    }
    stat *= 4.0 * block_len;
    TestResult r;
    r.name = "block_frequency";
    r.parameters = fmt_n(n) + ",M=" + std::to_string(block_len);
    r.statistic = stat;
    r.p_value = special::upper_regularized_gamma(static_cast<double>(blocks) / 2.0, stat / 2.0);
    return r;
}

TestResult runs_test(std::span<const std::uint8_t> bits) {
    const std::uint64_t n = bits.size();
    if (n < 100) {
        throw std::domain_error("runs_test: need at least 100 bits");
    }
    std::uint64_t ones = 0;
    for (std::uint8_t b : bits) ones += b;
    const double pi = static_cast<double>(ones) / static_cast<double>(n);

    TestResult r;
    r.name = "runs";
    r.parameters = fmt_n(n);
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n))) {
        r.statistic = 0.0;
        r.p_value = 0.0;
        r.note = "monobit prerequisite failed; runs test not applicable";
        return r;
    }
    std::uint64_t runs = 1;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        runs += bits[i] != bits[i - 1] ? 1 : 0;
    }
    const double expectation = 2.0 * static_cast<double>(n) * pi * (1.0 - pi);
    r.statistic = static_cast<double>(runs);
    r.p_value = std::erfc(std::abs(static_cast<double>(runs) - expectation) /
                          (2.0 * std::sqrt(2.0 * static_cast<double>(n)) * pi * (1.0 - pi)));
    return r;
}

double serial_correlation(std::span<const std::uint32_t> symbols) {
    const std::size_t n = symbols.size();
    if (n < 2) {
        throw std::domain_error("serial_correlation: need at least 2 symbols");
    }
    const std::size_t m = n - 1;
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_a += symbols[i];
        mean_b += symbols[i + 1];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);
    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double da = symbols[i] - mean_a;
        const double db = symbols[i + 1] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (!(var_a > 0.0) || !(var_b > 0.0)) {
        throw std::domain_error("serial_correlation: zero variance");
    }
    return cov / std::sqrt(var_a * var_b);
}

TestResult serial_correlation_test(std::span<const std::uint32_t> symbols) {
    const double rho = serial_correlation(symbols);
    const double n = static_cast<double>(symbols.size() - 1);
    TestResult r;
    r.name = "serial_correlation";
    r.parameters = fmt_n(symbols.size());
    r.statistic = rho;
    r.p_value = std::erfc(std::abs(rho) * std::sqrt(n) / std::sqrt(2.0));
    return r;
}

TestResult kuiper_aggregate(std::span<const double> p_values) {
    const std::size_t n = p_values.size();
    if (n < 5) {
        throw std::domain_error("kuiper_aggregate: need at least 5 p-values");
    }
    std::vector<double> sorted(p_values.begin(), p_values.end());
    std::sort(sorted.begin(), sorted.end());
    const double dn = static_cast<double>(n);
    double d_plus = 0.0;
    double d_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d_plus = std::max(d_plus, static_cast<double>(i + 1) / dn - sorted[i]);
        d_minus = std::max(d_minus, sorted[i] - static_cast<double>(i) / dn);
    }
    const double v = d_plus + d_minus;
    const double lambda = (std::sqrt(dn) + 0.155 + 0.24 / std::sqrt(dn)) * v;
    TestResult r;
    r.name = "kuiper_aggregate";
    r.parameters = fmt_n(n);
    r.statistic = v;
    r.p_value = special::kuiper_tail(lambda);
    return r;
}

void TestReport::add(TestResult result) {
    result.pass = result.p_value >= alpha;
    entries.push_back(std::move(result));
}

bool TestReport::all_pass() const {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

std::string TestReport::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["metadata"] = {
        {"input", metadata.input},
        {"n_bits", metadata.n_bits},
        {"n_symbols", metadata.n_symbols},
        {"toolkit_version", metadata.toolkit_version},
        {"generator", metadata.generator},
        {"seed_provenance", metadata.seed_provenance},
    };
    j["tests"] = nlohmann::json::array();
    for (const auto& e : entries) {
        j["tests"].push_back({
            {"name", e.name},
            {"parameters", e.parameters},
            {"statistic", e.statistic},
            {"p_value", e.p_value},
            {"pass", e.pass},
            {"note", e.note},
        });
    }
    return j.dump(2);
}

TestReport TestReport::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TestReport report;
    report.alpha = j.at("alpha").get<double>();
    const auto& m = j.at("metadata");
    report.metadata.input = m.at("input").get<std::string>();
    report.metadata.n_bits = m.at("n_bits").get<std::uint64_t>();
    report.metadata.n_symbols = m.at("n_symbols").get<std::uint64_t>();
    report.metadata.toolkit_version = m.at("toolkit_version").get<std::string>();
    report.metadata.generator = m.at("generator").get<std::string>();
    report.metadata.seed_provenance = m.at("seed_provenance").get<std::string>();
    for (const auto& t : j.at("tests")) {
        TestResult e;
        e.name = t.at("name").get<std::string>();
        e.parameters = t.at("parameters").get<std::string>();
        e.statistic = t.at("statistic").get<double>();
        e.p_value = t.at("p_value").get<double>();
        e.pass = t.at("pass").get<bool>();
        e.note = t.at("note").get<std::string>();
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace qrng::stats
