#!/usr/bin/env python3
"""Regenerates tests/fixtures/reference_values.hpp.

All values are computed with mpmath at 30 significant digits, independently of
the C++ implementation, and frozen to 17 digits (lossless for IEEE double).

Usage: python3 tests/oracles/gen_reference_values.py > tests/fixtures/reference_values.hpp
"""
from mpmath import mp, mpf, exp, log, ceil, factorial, erfc, gammainc, gamma, sqrt, inf

mp.dps = 30


def fmt(x):
    return mp.nstr(mpf(x), 17, strip_zeros=False)


# ---------------------------------------------------------------------------
# Dead-time-modified counting distribution (paralyzable counter, one window).
# ---------------------------------------------------------------------------
def deadtime_pmf(mu, r, m):
    mu, r = mpf(mu), mpf(r)
    if r == 0:
        return exp(-mu) * mu ** m / factorial(m)
    K = int(ceil(1 / r))
    if m > K:
        return mpf(0)
    mur = mu * exp(-mu * r)
    s = mpf(0)
    for i in range(0, K - m + 1):
        base = 1 - (i + m - 1) * r
        if base <= 0:
            continue
        s += (-mur) ** i / factorial(i) * base ** (m + i)
    return mur ** m / factorial(m) * s


# ---------------------------------------------------------------------------
# Single-pulse bin distribution for a free-running window preceded by a dead
# window, counting merge chains up to three detections and two shadow
# extensions.
# ---------------------------------------------------------------------------
def bin_curve(lambda_t0, n0, nd):
    lt0 = mpf(lambda_t0)
    p0 = exp(-lt0)
    pe = 1 - p0
    pw = [p0 ** t for t in range(n0 + 2 * nd + 4)]

    def choices2(x):
        if x > nd:
            return nd
        return x if x >= 0 else 0

    def choices3(x):
        if x >= 2 * nd:
            return mpf(nd * nd)
        if x >= nd + 1:
            return nd * (x - nd) + mpf((x - 1) * (2 * nd - x)) / 2
        if x >= 2:
            return mpf(x * (x - 1)) / 2
        return mpf(0)

    def window(n, k):
        if k <= 0 or k > n or n < 1:
            return mpf(0)
        v = pw[n - 1] * pe
        c2 = choices2(n - k)
        if c2:
            v += pw[n - 2] * pe ** 2 * c2
        c3 = choices3(n - k)
        if c3:
            v += pw[n - 3] * pe ** 3 * c3
        return v

    out = []
    for k in range(1, n0 + 1):
        v = pw[nd] * window(n0, k)
        v += pw[nd] * pe * sum(window(n0 - i, k - i) for i in range(1, nd + 1))
        t3 = mpf(0)
        for i in range(1, nd + 1):
            t3 += pw[nd - i] * sum(window(n0 - j - nd, k - j - nd) for j in range(1, i + 1))
        v += pw[nd] * pe ** 2 * t3
        out.append(v)
    return out


def curve_stats(lambda_t0, n0, nd):
    vals = bin_curve(lambda_t0, n0, nd)
    total = sum(vals)
    norm = [v / total for v in vals]
    pmax = max(norm)
    retained = sum(norm[nd:n0 - nd])
    trunc = [v / retained for v in norm[nd:n0 - nd]]
    tmax = max(trunc)
    return vals, total, norm, pmax, retained, tmax


# ---------------------------------------------------------------------------
# Regularized incomplete gamma Q(a, x) and erfc reference rows.
# ---------------------------------------------------------------------------
def Q(a, x):
    return gammainc(mpf(a), mpf(x), inf) / gamma(mpf(a))


def kuiper_stat_p(ps):
    n = len(ps)
    s = sorted(mpf(p) for p in ps)
    dplus = max(mpf(i + 1) / n - s[i] for i in range(n))
    dminus = max(s[i] - mpf(i) / n for i in range(n))
    v = dplus + dminus
    lam = (sqrt(n) + mpf('0.155') + mpf('0.24') / sqrt(n)) * v
    if lam < mpf('0.4'):
        return v, mpf(1)
    acc = mpf(0)
    for j in range(1, 200):
        t = (4 * j * j * lam * lam - 1) * exp(-2 * j * j * lam * lam)
        acc += t
        if abs(t) < mpf('1e-40'):
            break
    p = 2 * acc
    return v, min(mpf(1), max(mpf(0), p))


def main():
    out = []
    emit = out.append
    emit("// Generated by tests/oracles/gen_reference_values.py -- do not edit by hand.")
    emit("// Reference values computed with mpmath (30 significant digits).")
    emit("#pragma once")
    emit("")
    emit("#include <array>")
    emit("")
    emit("namespace qrng_ref {")
    emit("")

    # Poisson
    emit("// Poisson pmf values")
    emit(f"inline constexpr double poisson_0p2176_0 = {fmt(exp(mpf('-0.2176')))};")
    emit(f"inline constexpr double poisson_0p2176_1 = {fmt(mpf('0.2176') * exp(mpf('-0.2176')))};")
    emit(f"inline constexpr double poisson_0p2176_2 = {fmt(mpf('0.2176')**2/2 * exp(mpf('-0.2176')))};")
    emit(f"inline constexpr double poisson_3p7_10   = {fmt(mpf('3.7')**10/factorial(10) * exp(mpf('-3.7')))};")
    emit("")

    # First-arrival discretization
    lt0, n0 = mpf('0.00068'), 320
    den = 1 - exp(-lt0 * n0)
    emit("// Discretized first-arrival pmf, lambda*t0 = 0.00068, n0 = 320")

    def fa(k):
        return (exp(-lt0 * (k - 1)) - exp(-lt0 * k)) / den

    for k in (1, 2, 160, 320):
        emit(f"inline constexpr double first_arrival_k{k} = {fmt(fa(k))};")
    emit("")

    # Dead-time counting distribution
    emit("// Dead-time-modified counting pmf, mu = 0.2176, r = 0.1")
    for m in range(0, 5):
        emit(f"inline constexpr double deadtime_mu0p2176_r0p1_m{m} = {fmt(deadtime_pmf('0.2176', '0.1', m))};")
    emit("// Secondary configuration, mu = 0.5, r = 0.25")
    for m in range(0, 4):
        emit(f"inline constexpr double deadtime_mu0p5_r0p25_m{m} = {fmt(deadtime_pmf('0.5', '0.25', m))};")
    emit(f"inline constexpr double deadtime_mu1p0_r0p1_m1 = {fmt(deadtime_pmf('1.0', '0.1', 1))};")
    emit("")

    # Primary bin-distribution configuration
    vals, total, norm, pmax, retained, tmax = curve_stats('0.00068', 320, 32)
    emit("// Single-pulse bin distribution, lambda*t0 = 0.00068, n0 = 320, nd = 32")
    emit(f"inline constexpr double bins320_unnormalized_sum = {fmt(total)};")
    emit(f"inline constexpr double bins320_pmax = {fmt(pmax)};")
    emit(f"inline constexpr double bins320_retained = {fmt(retained)};")
    emit(f"inline constexpr double bins320_truncated_pmax = {fmt(tmax)};")
    ks = (1, 16, 32, 33, 64, 65, 160, 256, 288, 289, 320)
    emit("inline constexpr std::array<int, %d> bins320_probe_k = {%s};" % (len(ks), ", ".join(map(str, ks))))
    emit("inline constexpr std::array<double, %d> bins320_probe_p = {" % len(ks))
    for k in ks:
        emit(f"    {fmt(norm[k-1])},")
    emit("};")
    h_full = -log(pmax, 2) / log(320, 2)
    h_trunc = -log(tmax, 2) / log(256, 2)
    emit(f"inline constexpr double bins320_min_entropy = {fmt(h_full)};")
    emit(f"inline constexpr double bins320_truncated_min_entropy = {fmt(h_trunc)};")
    T0 = 320 * mpf('0.162e-9')
    p1 = deadtime_pmf('0.2176', '0.1', 1)
    emit(f"inline constexpr double bins320_bitrate_exact_bps = {fmt(8 * p1 * (1 / T0) * retained)};")
    emit(f"inline constexpr double bins320_bitrate_approx_bps = {fmt(8 * p1 * (1 / T0) * mpf(256) / 320)};")
    emit("")

    # Secondary bin-distribution configuration
    vals2, total2, norm2, pmax2, retained2, tmax2 = curve_stats('0.002', 128, 12)
    emit("// Secondary bin distribution, lambda*t0 = 0.002, n0 = 128, nd = 12")
    emit(f"inline constexpr double bins128_unnormalized_sum = {fmt(total2)};")
    emit(f"inline constexpr double bins128_pmax = {fmt(pmax2)};")
    emit(f"inline constexpr double bins128_retained = {fmt(retained2)};")
    emit(f"inline constexpr double bins128_truncated_pmax = {fmt(tmax2)};")
    ks2 = (1, 12, 13, 64, 104, 116, 128)
    emit("inline constexpr std::array<int, %d> bins128_probe_k = {%s};" % (len(ks2), ", ".join(map(str, ks2))))
    emit("inline constexpr std::array<double, %d> bins128_probe_p = {" % len(ks2))
    for k in ks2:
        emit(f"    {fmt(norm2[k-1])},")
    emit("};")
    emit("")

    # High-rate projection configuration
    vals3, total3, norm3, pmax3, retained3, tmax3 = curve_stats('0.001', 1000, 100)
    p1_hi = deadtime_pmf('1.0', '0.1', 1)
    bits_hi = log(800, 2)
    T0_hi = 1000 * mpf('1e-11')
    emit("// High-rate projection, lambda*t0 = 0.001 (mu = 1), n0 = 1000, nd = 100, t0 = 10 ps")
    emit(f"inline constexpr double highrate_retained = {fmt(retained3)};")
    emit(f"inline constexpr double highrate_bitrate_bps = {fmt(bits_hi * p1_hi * (1 / T0_hi) * retained3)};")
    emit("")

    # Min-entropy spot values
    emit("// Min-entropy spot values")
    emit(f"inline constexpr double min_entropy_0p003143_320 = {fmt(-log(mpf('0.003143'), 2) / log(320, 2))};")
    emit(f"inline constexpr double min_entropy_0p003918_256 = {fmt(-log(mpf('0.003918'), 2) / log(256, 2))};")
    emit(f"inline constexpr double min_entropy_0p003132_320 = {fmt(-log(mpf('0.003132'), 2) / log(320, 2))};")
    emit(f"inline constexpr double min_entropy_0p00390633_256 = {fmt(-log(mpf('0.00390633'), 2) / log(256, 2))};")
    emit("")

    # Regularized upper incomplete gamma table
    emit("// Regularized upper incomplete gamma Q(a, x)")
    emit("struct GammaQRow { double a; double x; double q; };")
    rows = []
    for a in ('0.5', '1.0', '1.5', '2.5', '5.0', '13.5', '50.0', '127.5', '159.5', '312500.0'):
        am = mpf(a)
        if am <= 200:
            xs = [am / 4, am / 2, am, am + 1, 2 * am, 3 * am, 5 * am]
        else:
            s = sqrt(am)
            xs = [am - 6 * s, am - 2 * s, am, am + 2 * s, am + 6 * s]
        for x in xs:
            if x <= 0:
                continue
            q = Q(am, x)
            if mpf('1e-12') <= q <= 1:
                rows.append((am, x, q))
    emit("inline constexpr std::array<GammaQRow, %d> gamma_q_table = {{" % len(rows))
    for a, x, q in rows:
        emit(f"    {{{fmt(a)}, {fmt(x)}, {fmt(q)}}},")
    emit("}};")
    emit(f"inline constexpr double gamma_q_1p5_10 = {fmt(Q('1.5', 10))};")
    emit("")

    # erfc table
    emit("// erfc reference values")
    emit("struct ErfcRow { double x; double y; };")
    exs = ('0.1', '0.5', '1.0', '2.0', '3.0', '5.0', '7.0710678118654755')
    emit("inline constexpr std::array<ErfcRow, %d> erfc_table = {{" % len(exs))
    for x in exs:
        emit(f"    {{{fmt(mpf(x))}, {fmt(erfc(mpf(x)))}}},")
    emit("}};")
    emit(f"inline constexpr double erfc_10_over_sqrt2 = {fmt(erfc(10 / sqrt(2)))};")
    emit("")

    # Kuiper aggregation fixtures
    emit("// Kuiper statistic and p-value fixtures")
    ps20 = ['0.9501', '0.2311', '0.6068', '0.4860', '0.8913',
            '0.7621', '0.4565', '0.0185', '0.8214', '0.4447',
            '0.6154', '0.7919', '0.9218', '0.7382', '0.1763',
            '0.4057', '0.9355', '0.9169', '0.4103', '0.8936']
    v20, p20 = kuiper_stat_p(ps20)
    emit("inline constexpr std::array<double, 20> kuiper_input20 = {")
    emit("    " + ", ".join(ps20[:10]) + ",")
    emit("    " + ", ".join(ps20[10:]))
    emit("};")
    emit(f"inline constexpr double kuiper_v20 = {fmt(v20)};")
    emit(f"inline constexpr double kuiper_p20 = {fmt(p20)};")
    v99, p99 = kuiper_stat_p(['0.999'] * 100)
    emit(f"inline constexpr double kuiper_v_all999 = {fmt(v99)};")
    emit(f"inline constexpr double kuiper_p_all999 = {fmt(p99)};")
    emit("")
    emit("}  // namespace qrng_ref")
    print("\n".join(out))


if __name__ == "__main__":
    main()
