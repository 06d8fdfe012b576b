#include "qrng/theory.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace qrng {

ExperimentConfig ExperimentConfig::from_lambda_t0(double lambda_t0, int n0, int nd) {
    ExperimentConfig cfg;
    cfg.t0_seconds = 1.0;
    cfg.n0 = n0;
    cfg.nd = nd;
    cfg.lambda_per_second = lambda_t0;
    cfg.dark_rate_per_second = 0.0;
    return cfg;
}

void ExperimentConfig::validate() const {
    if (!(t0_seconds > 0.0) || !std::isfinite(t0_seconds)) {
        throw std::invalid_argument("t0_seconds must be positive and finite");
    }
    if (n0 < 1) {
        throw std::invalid_argument("n0 must be at least 1");
    }
    if (nd < 0) {
        throw std::invalid_argument("nd must be non-negative");
    }
    if (n0 <= 2 * nd) {
        throw std::invalid_argument("n0 must exceed 2*nd (truncation would leave no bins)");
    }
    if (lambda_per_second < 0.0 || !std::isfinite(lambda_per_second)) {
        throw std::invalid_argument("lambda_per_second must be non-negative and finite");
    }
    if (dark_rate_per_second < 0.0 || !std::isfinite(dark_rate_per_second)) {
        throw std::invalid_argument("dark_rate_per_second must be non-negative and finite");
    }
    if (!std::isfinite(mean_per_period())) {
        throw std::invalid_argument("mean events per period is not finite");
    }
}

double BinDistribution::value(int k) const {
    if (k < 1 || k > n0) {
        throw std::domain_error("bin index " + std::to_string(k) + " outside 1.." + std::to_string(n0));
    }
    return values[static_cast<std::size_t>(k) - 1];
}

double BinDistribution::sum() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

double BinDistribution::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

int BinDistribution::max_bin() const {
    int best = 1;
    for (int k = 2; k <= n0; ++k) {
        if (values[static_cast<std::size_t>(k) - 1] > values[static_cast<std::size_t>(best) - 1]) best = k;
    }
    return best;
}

BinDistribution to_frequency(const BinDistribution& counts) {
    if (counts.kind != DistributionKind::EmpiricalCount) {
        throw std::invalid_argument("to_frequency expects an EmpiricalCount histogram");
    }
    const double total = counts.sum();
    if (total <= 0.0) {
        throw std::domain_error("empty histogram");
    }
    BinDistribution out = counts;
    out.kind = DistributionKind::EmpiricalFrequency;
    for (double& v : out.values) v /= total;
    return out;
}

}  // namespace qrng

namespace qrng::theory {

namespace {

// Neumaier-compensated accumulator for alternating series.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double term) {
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

// Probability that a clear stretch of n bins yields exactly one pulse with
// rising edge at relative bin k, counting merge chains of up to three
// detections. Zero outside 1 <= k <= n.
double window_prob(int n, int k, std::span<const double> p0_pow, double pe, int nd) {
    if (k <= 0 || k > n || n < 1) {
        return 0.0;
    }
    double v = p0_pow[static_cast<std::size_t>(n) - 1] * pe;
    const std::int64_t gap = n - k;
    if (const auto c2 = merge_choices_two(gap, nd); c2 > 0) {
        v += p0_pow[static_cast<std::size_t>(n) - 2] * pe * pe * static_cast<double>(c2);
    }
    if (const double c3 = merge_choices_three(gap, nd); c3 > 0.0) {
        v += p0_pow[static_cast<std::size_t>(n) - 3] * pe * pe * pe * c3;
    }
    return v;
}

std::vector<double> power_table(double p0, int max_exponent) {
    std::vector<double> pw(static_cast<std::size_t>(max_exponent) + 1);
    pw[0] = 1.0;
    for (std::size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * p0;
    return pw;
}

// Shared by the per-bin and whole-curve evaluations. The three terms cover:
// no detection in the dead window preceding the period; a detection there
// whose pulse shadows the first i bins; and one round of shadow extension by
// detections inside the shadowed bins.
double bin_value(int n0, int nd, int k, std::span<const double> pw, double pe) {
    double v = pw[static_cast<std::size_t>(nd)] * window_prob(n0, k, pw, pe, nd);

    double shadowed = 0.0;
    for (int i = 1; i <= nd; ++i) {
        shadowed += window_prob(n0 - i, k - i, pw, pe, nd);
    }
    v += pw[static_cast<std::size_t>(nd)] * pe * shadowed;

    double extended = 0.0;
    double prefix = 0.0;
    for (int i = 1; i <= nd; ++i) {
        prefix += window_prob(n0 - i - nd, k - i - nd, pw, pe, nd);
        extended += pw[static_cast<std::size_t>(nd - i)] * prefix;
    }
    v += pw[static_cast<std::size_t>(nd)] * pe * pe * extended;
    return v;
}

}  // namespace

double poisson_pmf(double mean, int count) {
    if (mean < 0.0 || !std::isfinite(mean)) {
        throw std::domain_error("poisson_pmf: mean must be non-negative and finite");
    }
    if (count < 0) {
        throw std::domain_error("poisson_pmf: count must be non-negative");
    }
    if (mean == 0.0) {
        return count == 0 ? 1.0 : 0.0;
    }
    return std::exp(count * std::log(mean) - mean - std::lgamma(count + 1.0));
}

double first_arrival_bin_pmf(double lambda_t0, int n0, int k) {
    if (!(lambda_t0 > 0.0) || !std::isfinite(lambda_t0)) {
        throw std::domain_error("first_arrival_bin_pmf: lambda_t0 must be positive");
    }
    if (n0 < 1) {
        throw std::domain_error("first_arrival_bin_pmf: n0 must be at least 1");
    }
    if (k < 1 || k > n0) {
        throw std::domain_error("first_arrival_bin_pmf: k outside 1..n0");
    }
    const double numerator = std::exp(-lambda_t0 * (k - 1)) * (-std::expm1(-lambda_t0));
    const double denominator = -std::expm1(-lambda_t0 * n0);
    return numerator / denominator;
}

double conditional_uniform_pmf(int n0) {
    if (n0 < 1) {
        throw std::domain_error("conditional_uniform_pmf: n0 must be at least 1");
    }
    return 1.0 / static_cast<double>(n0);
}

double deadtime_count_pmf(double mu, double deadtime_ratio, int count) {
    if (mu < 0.0 || !std::isfinite(mu)) {
        throw std::domain_error("deadtime_count_pmf: mu must be non-negative and finite");
    }
    if (count < 0) {
        throw std::domain_error("deadtime_count_pmf: count must be non-negative");
    }
    if (deadtime_ratio < 0.0 || deadtime_ratio >= 1.0) {
        throw std::domain_error("deadtime_count_pmf: dead-time ratio must be in [0, 1)");
    }
    if (deadtime_ratio == 0.0) {
        return poisson_pmf(mu, count);
    }
    const double r = deadtime_ratio;
    const int max_count = static_cast<int>(std::ceil(1.0 / r));
    if (count > max_count) {
        return 0.0;  // physically impossible: the window cannot hold that many pulses
    }
    if (mu == 0.0) {
        return count == 0 ? 1.0 : 0.0;
    }

    const double log_mu_r = std::log(mu) - mu * r;
    CompensatedSum acc;
    for (int i = 0; i <= max_count - count; ++i) {
        const double support = 1.0 - (i + count - 1) * r;
        if (support <= 0.0) {
            continue;
        }
        const double log_mag =
            i * log_mu_r - std::lgamma(i + 1.0) + (count + i) * std::log(support);
        // once past the factorial hump the terms only shrink; stop when they
        // fall below double resolution of the accumulated sum
        if (log_mag < -45.0 && static_cast<double>(i) > mu) {
            break;
        }
        const double term = std::exp(log_mag);
        acc.add((i & 1) != 0 ? -term : term);
    }
    const double prefix = std::exp(count * log_mu_r - std::lgamma(count + 1.0));
    return std::max(0.0, prefix * acc.value());
}

double prob_single_pulse(double mu, double deadtime_ratio) {
    return deadtime_count_pmf(mu, deadtime_ratio, 1);
}

std::int64_t merge_choices_two(std::int64_t gap, int nd) {
    if (nd < 0) {
        throw std::domain_error("merge_choices_two: nd must be non-negative");
    }
    if (gap < 0) {
        return 0;
    }
    return gap <= nd ? gap : nd;
}

double merge_choices_three(std::int64_t gap, int nd) {
    if (nd < 0) {
        throw std::domain_error("merge_choices_three: nd must be non-negative");
    }
    if (gap < 2) {
        return 0.0;
    }
    const double x = static_cast<double>(gap);
    const double d = static_cast<double>(nd);
    if (gap >= 2 * static_cast<std::int64_t>(nd)) {
        return d * d;
    }
    if (gap >= nd + 1) {
        return d * (x - d) + 0.5 * (x - 1.0) * (2.0 * d - x);
    }
    return 0.5 * x * (x - 1.0);
}

double single_pulse_bin_prob(const ExperimentConfig& cfg, int k) {
    cfg.validate();
    if (k < 1 || k > cfg.n0) {
        throw std::domain_error("single_pulse_bin_prob: k outside 1..n0");
    }
    const double lt0 = cfg.lambda_t0();
    const double p0 = std::exp(-lt0);
    const double pe = -std::expm1(-lt0);
    const auto pw = power_table(p0, cfg.n0 + 2 * cfg.nd + 3);
    return bin_value(cfg.n0, cfg.nd, k, pw, pe);
}

std::vector<double> single_pulse_bin_curve(const ExperimentConfig& cfg) {
    cfg.validate();
    const double lt0 = cfg.lambda_t0();
    const double p0 = std::exp(-lt0);
    const double pe = -std::expm1(-lt0);
    const auto pw = power_table(p0, cfg.n0 + 2 * cfg.nd + 3);
    std::vector<double> out(static_cast<std::size_t>(cfg.n0));
    for (int k = 1; k <= cfg.n0; ++k) {
        out[static_cast<std::size_t>(k) - 1] = bin_value(cfg.n0, cfg.nd, k, pw, pe);
    }
    return out;
}

BinDistribution normalized_bin_distribution(const ExperimentConfig& cfg) {
    BinDistribution dist;
    dist.n0 = cfg.n0;
    dist.kind = DistributionKind::TheoreticalProbability;
    dist.values = single_pulse_bin_curve(cfg);
    double total = 0.0;
    for (double v : dist.values) total += v;
    if (!(total > 0.0)) {
        throw std::domain_error("normalized_bin_distribution: no signal (zero rate)");
    }
    for (double& v : dist.values) v /= total;
    return dist;
}

BinDistribution truncate_distribution(const BinDistribution& dist, int nd) {
    if (nd < 0) {
        throw std::domain_error("truncate_distribution: nd must be non-negative");
    }
    if (dist.n0 != static_cast<int>(dist.values.size())) {
        throw std::invalid_argument("truncate_distribution: inconsistent distribution size");
    }
    const int kept = dist.n0 - 2 * nd;
    if (kept < 1) {
        throw std::domain_error("truncate_distribution: empty retained range");
    }
    BinDistribution out;
    out.n0 = kept;
    out.kind = dist.kind == DistributionKind::EmpiricalCount ? DistributionKind::EmpiricalFrequency
                                                             : dist.kind;
    out.values.assign(dist.values.begin() + nd, dist.values.begin() + nd + kept);
    double total = 0.0;
    for (double v : out.values) total += v;
    if (!(total > 0.0)) {
        throw std::domain_error("truncate_distribution: retained range has zero mass");
    }
    for (double& v : out.values) v /= total;
    return out;
}

double min_entropy_per_bit(double p_max, int symbol_count) {
    if (!(p_max > 0.0) || p_max > 1.0) {
        throw std::domain_error("min_entropy_per_bit: p_max must be in (0, 1]");
    }
    if (symbol_count < 2) {
        throw std::domain_error("min_entropy_per_bit: symbol_count must be at least 2");
    }
    return -std::log2(p_max) / std::log2(static_cast<double>(symbol_count));
}

RetainedFraction retained_fraction(const BinDistribution& dist, int nd) {
    if (nd < 0) {
        throw std::domain_error("retained_fraction: nd must be non-negative");
    }
    const int kept = dist.n0 - 2 * nd;
    if (kept < 1) {
        throw std::domain_error("retained_fraction: empty retained range");
    }
    const double total = dist.sum();
    if (!(total > 0.0)) {
        throw std::domain_error("retained_fraction: empty distribution");
    }
    double retained = 0.0;
    for (int k = nd + 1; k <= dist.n0 - nd; ++k) {
        retained += dist.values[static_cast<std::size_t>(k) - 1];
    }
    RetainedFraction out;
    out.exact = retained / total;
    out.approximate = static_cast<double>(kept) / static_cast<double>(dist.n0);
    return out;
}

BitrateEstimate predicted_bitrate(const ExperimentConfig& cfg) {
    cfg.validate();
    BitrateEstimate out;
    out.bits_per_symbol = std::log2(static_cast<double>(cfg.symbol_count()));
    if (cfg.mean_per_period() == 0.0) {
        return out;  // no signal, no bits
    }
    out.p_single = prob_single_pulse(cfg.mean_per_period(), cfg.dead_time_ratio());
    const auto rf = retained_fraction(normalized_bin_distribution(cfg), cfg.nd);
    const double per_period = out.bits_per_symbol * out.p_single / cfg.period_seconds();
    out.exact_bps = per_period * rf.exact;
    out.approximate_bps = per_period * rf.approximate;
    return out;
}

}  // namespace qrng::theory
