#!/usr/bin/env python3
"""Generate frozen reference values for the test suites.

Every value is computed in multi-precision arithmetic (mpmath) through routes
that share no code with the library: power series in 50-digit arithmetic where
it converges in reasonable time, and the spectral (Laplace-inversion)
integral representation otherwise. Closed forms (exp, erfc) cross-check both.

Regenerate with:  python3 tests/oracle/gen_oracle.py > tests/oracle/oracle_data.hpp
"""
import math
import sys
import mpmath as mp

mp.mp.dps = 50


def ml_series(a, b, z, max_terms=200000):
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    s = mp.mpf(0)
    small = mp.mpf(10) ** (-(mp.mp.dps + 5))
    for k in range(max_terms):
        t = z ** k / mp.gamma(a * k + b)
        s += t
        if k > 5 and abs(t) < small * max(1, abs(s)):
            return s
    raise RuntimeError("series did not converge")


def series_feasible(a, z):
    # Largest term magnitude of the series, in decimal digits.
    x = abs(float(z))
    if x == 0:
        return True
    best, k = -1e9, 0
    while True:
        lt = (k * math.log(x) - math.lgamma(a * k + 1)) / math.log(10)
        best = max(best, lt)
        if k > 5 and lt < best - 60:
            break
        k += 1
    return best < 25 and k < 4000


def ml_spectral(a, b, z):
    """E_{a,b}(z) for z < 0, 0 < a < 1, b in {1, a+1}, by Laplace inversion."""
    a, b, x = mp.mpf(a), mp.mpf(b), -mp.mpf(z)
    t = x ** (1 / a)

    def kern(r):
        den = r ** (2 * a) + 2 * r ** a * mp.cos(a * mp.pi) + 1
        return mp.exp(-r * t) * r ** (a - b) * (r ** a * mp.sin(b * mp.pi) + mp.sin((b - a) * mp.pi)) / den / mp.pi

    fine = sorted({mp.mpf(0), mp.inf} | {mp.mpf(2) ** j / t for j in range(-10, 14)} | {mp.mpf(2) ** j for j in range(-6, 7)})
    i1, err = mp.quad(kern, fine, error=True)
    assert err < mp.mpf(10) ** -17, (a, b, z, err)
    if b == 1:
        return i1
    if b == a + 1:
        # the small circle around the branch point contributes the residue 1
        return (1 + i1) / t ** a
    raise ValueError("unsupported beta")


def ml_ref(a, b, z, cross_check=False):
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    if z == 0:
        return 1 / mp.gamma(b)
    if a == 1 and b == 1:
        return mp.exp(z)
    if a == 1 and b == 2:
        return mp.expm1(z) / z
    if series_feasible(a, z):
        v = ml_series(a, b, z)
        if cross_check and z < 0 and a < 1 and b in (1, a + 1):
            w = ml_spectral(a, b, z)
            assert abs(v - w) < mp.mpf(10) ** -15 * max(1, abs(v)), (a, b, z, v, w)
        return v
    return ml_spectral(a, b, z)


def fmt(v):
    return repr(float(v))


def emit_array(name, values):
    print(f"inline constexpr double {name}[] = {{")
    for i in range(0, len(values), 4):
        print("    " + ", ".join(fmt(v) for v in values[i:i + 4]) + ",")
    print("};")


def main():
    out = []
    print("// Generated by tests/oracle/gen_oracle.py; do not edit by hand.")
    print("#pragma once")
    print("#include <cstddef>")
    print("namespace oracle {")

    # Mittag-Leffler acceptance grid: alpha x 40 points on [-30, 0].
    alphas = [0.3, 0.5, 0.7, 0.9, 1.0]
    zs = [-30.0 * j / 39 for j in range(40)]
    print(f"inline constexpr std::size_t kGridAlphaCount = {len(alphas)};")
    print(f"inline constexpr std::size_t kGridZCount = {len(zs)};")
    emit_array("kGridAlpha", alphas)
    emit_array("kGridZ", zs)
    e1, e2 = [], []
    for a in alphas:
        for z in zs:
            # Spectral cross-check on every fourth point keeps generation fast.
            check = len(e1) % 4 == 1
            v1 = ml_ref(a, 1, z, cross_check=check)
            v2 = ml_ref(a, mp.mpf(a) + 1, z, cross_check=check)
            if a == 0.5 and z < 0:
                chk = mp.exp(mp.mpf(z) ** 2) * mp.erfc(-mp.mpf(z))
                assert abs(chk - v1) < mp.mpf(10) ** -15 * abs(v1)
            e1.append(v1)
            e2.append(v2)
    print("// E_alpha(z), row-major over (alpha, z)")
    emit_array("kGridMlOne", e1)
    print("// E_{alpha,alpha+1}(z), row-major over (alpha, z)")
    emit_array("kGridMlTwo", e2)

    # Point values used by unit tests.
    half_m1 = ml_ref(0.5, 1, -1.0)
    assert abs(half_m1 - mp.exp(1) * mp.erfc(1)) < mp.mpf(10) ** -40
    print(f"inline constexpr double kMlHalfMinusOne = {fmt(half_m1)};")
    print(f"inline constexpr double kMlTwoHalfThreeHalvesMinusTwo = {fmt(ml_ref(0.5, 1.5, -2.0))};")
    print(f"inline constexpr double kMlTwoHalfThreeHalvesMinusOne = {fmt(ml_ref(0.5, 1.5, -1.0))};")
    print(f"inline constexpr double kGamma7p3 = {fmt(mp.gamma(mp.mpf(7.3)))};")
    print(f"inline constexpr double kMlHalfMinusHundredth = {fmt(ml_ref(0.5, 1, -0.01))};")

    # analytic_branch_response(alpha=0.6, R=2e-3, tau=50, u0=0.05, i0=-40, t=30)
    a, R, tau, u0, i0, t = mp.mpf(0.6), mp.mpf(2e-3), mp.mpf(50.0), mp.mpf(0.05), mp.mpf(-40.0), mp.mpf(30.0)
    e = ml_ref(a, 1, -t ** a / tau)
    print(f"inline constexpr double kBranchResponse = {fmt(u0 * e + i0 * R * (1 - e))};")

    # relax_model(alpha=0.7, R=2e-3, tau=80, i=40, t=20) without the OCV term
    a, R, tau, i, t = mp.mpf(0.7), mp.mpf(2e-3), mp.mpf(80.0), mp.mpf(40.0), mp.mpf(20.0)
    print(f"inline constexpr double kRelaxPolarization = {fmt(i * R * ml_ref(a, 1, -t ** a / tau))};")

    # Grunwald-Letnikov weights (-1)^j binom(alpha, j), alpha=0.7, N=64.
    a = mp.mpf(0.7)
    w = [(-1) ** j * mp.binomial(a, j) for j in range(65)]
    emit_array("kGlWeights07", w)

    # Two-branch recursion, 10 steps of 50 A at T=1 s, from rest.
    br = [(mp.mpf(1.0e-3), mp.mpf(20.0), mp.mpf(0.7)), (mp.mpf(2.0e-3), mp.mpf(400.0), mp.mpf(0.9))]
    coeffs = []
    for R, tau, a in br:
        ai = ml_ref(a, 1, -1 / tau)
        coeffs.append((ai, R * (1 - ai)))
    u = [mp.mpf(0), mp.mpf(0)]
    traj = []
    for _ in range(10):
        u = [ai * ui + bi * 50 for (ai, bi), ui in zip(coeffs, u)]
        traj.extend(u)
    print("// u_1, u_2 after each of 10 steps; branches (1 mOhm, 20, 0.7), (2 mOhm, 400, 0.9)")
    emit_array("kTwoBranchTrajectory", traj)

    # GL recurrence, alpha=0.8, tau=120, R=1 mOhm, T=1, 50 steps of 30 A from rest.
    a, tau, R, T, I = mp.mpf(0.8), mp.mpf(120.0), mp.mpf(1e-3), mp.mpf(1.0), mp.mpf(30.0)
    C = tau / R
    w = [(-1) ** j * mp.binomial(a, j) for j in range(65)]
    hist = [mp.mpf(0)]
    for k in range(50):
        acc = T ** a * (-hist[-1] / tau + I / C)
        for j in range(1, min(k + 1, 64) + 1):
            acc -= w[j] * hist[-j]
        hist.append(acc)
    print("// U_1..U_50 of the GL recurrence (alpha 0.8, tau 120, R 1 mOhm, 30 A, N 64)")
    emit_array("kGlTrajectory", hist[1:])

    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
