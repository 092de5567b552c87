"""Independent high-precision evaluation of the frozen constants used in the C++ tests.

Run with `python3 tests/oracles/derive_constants.py`. Everything here is computed
with mpmath at 50 digits and exact integer arithmetic, without touching the C++
implementation.
"""
from fractions import Fraction
from itertools import product
from math import comb, factorial

import mpmath as mp

mp.mp.dps = 50
log = mp.log

MIXED = dict(m=2, n=3, digits=[(0, 0), (1, 0), (1, 2)])


def profile(c):
    cols = sorted({a for a, _ in c["digits"]})
    counts = [sum(1 for a, _ in c["digits"] if a == col) for col in cols]
    return len(cols), counts, len(c["digits"])


def dims(c):
    m, n = c["m"], c["n"]
    M, Ni, N = profile(c)
    lm, ln = log(m), log(n)
    haus = log(mp.fsum(mp.mpf(x) ** (lm / ln) for x in Ni)) / lm
    box = log(M) / lm + log(mp.mpf(N) / M) / ln
    assouad = log(M) / lm + log(max(Ni)) / ln
    lower = log(M) / lm + log(min(Ni)) / ln
    return dict(lower=lower, hausdorff=haus, box=box, assouad=assouad)


def spectrum(c, kind, theta):
    m, n = c["m"], c["n"]
    M, Ni, N = profile(c)
    Nx = max(Ni) if kind == "assouad" else min(Ni)
    lm, ln = log(m), log(n)
    theta = mp.mpf(theta)
    if theta <= lm / ln:
        return (log(M) - theta * log(mp.mpf(N) / Nx)) / ((1 - theta) * lm) + (
            log(mp.mpf(N) / M) - theta * log(Nx)) / ((1 - theta) * ln)
    return log(M) / lm + log(Nx) / ln


def column_weights(c, p):
    cols = sorted({a for a, _ in c["digits"]})
    return [mp.fsum(p[i] for i, (a, _) in enumerate(c["digits"]) if a == col) for col in cols]


def entropies(c, p):
    q = column_weights(c, p)
    return -mp.fsum(x * log(x) for x in p), -mp.fsum(x * log(x) for x in q)


def ly(c, p):
    h, hp = entropies(c, p)
    return hp / log(c["m"]) + (h - hp) / log(c["n"])


def mcmullen(c):
    m, n = c["m"], c["n"]
    d = dims(c)["hausdorff"]
    out = []
    for a, _ in c["digits"]:
        Ni = sum(1 for x, _ in c["digits"] if x == a)
        out.append(mp.mpf(Ni) ** (log(m) / log(n) - 1) / mp.mpf(m) ** d)
    return out


def l_of_k(m, n, k):
    l = 0
    while m ** l < n ** k:
        l += 1
    return l


def multinomial(total, parts):
    out = factorial(total)
    for x in parts:
        out //= factorial(x)
    return out


def main():
    d = dims(MIXED)
    print("MIXED dims", {k: mp.nstr(v, 17) for k, v in d.items()})
    print("MIXED assouad theta=0.3", mp.nstr(spectrum(MIXED, "assouad", 0.3), 17))
    print("MIXED lower theta=0.3", mp.nstr(spectrum(MIXED, "lower", 0.3), 17))
    uni = [mp.mpf(1) / 3] * 3
    h, hp = entropies(MIXED, uni)
    print("MIXED uniform entropies", mp.nstr(h, 17), mp.nstr(hp, 17))
    print("MIXED uniform ly", mp.nstr(ly(MIXED, uni), 17))
    w = mcmullen(MIXED)
    print("MIXED mcmullen weights", [mp.nstr(x, 17) for x in w], "sum", mp.nstr(mp.fsum(w), 20))
    print("MIXED mcmullen ly", mp.nstr(ly(MIXED, w), 17))
    single = dict(m=2, n=3, digits=[(0, 0), (0, 2)])
    print("single column dim_H", mp.nstr(dims(single)["hausdorff"], 17))

    # Subsystem, k = 10: floors of k * McMullen weights, then exact multinomials.
    counts = [int(mp.floor(10 * x)) for x in w]
    l = sum(counts)
    col_counts = [counts[0], counts[1] + counts[2]]
    Nk, Mk = multinomial(l, counts), multinomial(l, col_counts)
    dimE = log(Mk) / (l * log(2)) + log(mp.mpf(Nk) / Mk) / (l * log(3))
    print("subsystem k=10", counts, l, Nk, Mk, Nk // Mk, mp.nstr(dimE, 17),
          "gap", mp.nstr(d["hausdorff"] - dimE, 17))
    Nk, Mk = factorial(6), multinomial(6, [3, 3])
    dimE = log(Mk) / (6 * log(2)) + log(mp.mpf(Nk) / Mk) / (6 * log(3))
    print("full grid k=6", Nk, Mk, mp.nstr(dimE, 17))

    # Approximate squares by brute-force enumeration of prefixes x column suffixes.
    for k in (1, 2):
        l = l_of_k(2, 3, k)
        squares = set(product(range(3), repeat=k)) and {
            (pre, suf) for pre in product(range(3), repeat=k) for suf in product(range(2), repeat=l - k)}
        print("MIXED approx squares k=%d l=%d count=%d" % (k, l, len(squares)))
    l = l_of_k(2, 3, 1)
    full = {(pre, suf) for pre in product(range(6), repeat=1) for suf in product(range(2), repeat=l - 1)}
    print("full grid approx squares k=1", len(full))

    # Cylinders at depth 2 by composing the affine maps on exact rationals.
    rects = []
    for d1, d2 in product(MIXED["digits"], repeat=2):
        x = Fraction(d1[0], 2) + Fraction(d2[0], 4)
        y = Fraction(d1[1], 3) + Fraction(d2[1], 9)
        rects.append((x, y))
    print("MIXED depth-2 corners", [(str(a), str(b)) for a, b in rects])

    # Moment sums for MIXED uniform, q=2, k=3, by enumeration.
    k = 3
    l = l_of_k(2, 3, k)
    total = mp.mpf(0)
    q = [mp.mpf(1) / 3, mp.mpf(2) / 3]
    for pre in product(range(3), repeat=k):
        for suf in product(range(2), repeat=l - k):
            mu = mp.mpf(1) / 3 ** k
            for s in suf:
                mu *= q[s]
            total += mu ** 2
    print("MIXED uniform log M_3(2)", mp.nstr(log(total), 17), "l", l)

    # Local dimension expectation at k = 1000.
    k = 1000
    l = l_of_k(2, 3, k)
    mean = (k * h + (l - k) * hp) / (k * log(3))
    print("local-dim expectation k=1000 l=%d" % l, mp.nstr(mean, 17))

    # lq spectrum at k=1000 (closed form of moment sums).
    box_k = (k * log(3) + (l - k) * log(2)) / (k * log(3))
    print("tau_1000(0)", mp.nstr(box_k, 17))


if __name__ == "__main__":
    main()
