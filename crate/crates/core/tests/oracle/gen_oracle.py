"""Regenerate the frozen oracle table used by tests/acceptance.rs.

Evaluates the constants and a few composed bounds directly from their
printed closed forms with mpmath at 200 decimal digits, independently of the
Rust implementation. Run: python3 gen_oracle.py > values.txt
"""
from mpmath import mp, mpf, log, e, sqrt, factorial

mp.dps = 200


def log_star(x):
    return max(mpf(1), log(x))


def c1(d, s): return (16 * d * s) ** (2 * (s + 3))
def c2(d, r): return (4 * d) ** (4 * (r + 4))


def c3(d, r, lemma3=False):
    if r == 0:
        return mpf(0)
    if r == 1:
        return mpf(1) if lemma3 else mpf(1) / d
    L = log_star(d) if lemma3 else log(d)
    return 29 * e * factorial(r) * r * sqrt(r - 1) * L


def c4(d, r, t): return mpf(16) ** (3 * r + 4 * t + 12) * mpf(d) ** (5 * r + t + 20)
def c5(d, r, s, t): return mpf(s) ** 5 * (16 * e) ** (3 * r + 4 * t + 7) * mpf(d) ** (4 * r + 2 * t + 7)


def c6(d, m, lam=1):
    return 2 * lam * (m + 1) * log_star(d * m) * log_star(d) ** 2 * (16 * e * d) ** (3 * m + 5)


def c11(d, m): return c6(d, m, 12 if m == 1 else 1)
def c10(d, s): return factorial(s - 1) ** 2 / (mpf(2) ** (s - 2) * mpf(d) ** (s - 1))


def constants(d, r, s, t, m):
    return [
        ("c1", log(c1(d, s))),
        ("c2", log(c2(d, r))),
        ("c3", log(c3(d, r)) if r else None),
        ("c3_lemma3", log(c3(d, r, True)) if r else None),
        ("c4", log(c4(d, r, t))),
        ("c5", log(c5(d, r, s, t))),
        ("c6", log(c6(d, m))),
        ("c10", log(c10(d, s))),
        ("c11", log(c11(d, m))),
    ]


VECTORS = [(4, 2, 5, 3, 2), (6, 5, 8, 2, 1), (2, 1, 3, 1, 1), (1, 0, 4, 3, 3)]


def fmt(x):
    return mp.nstr(x, 60, min_fixed=-10**9, max_fixed=10**9)


print("# constants: d r s t m name ln(value)")
for v in VECTORS:
    for name, val in constants(*v):
        if val is not None:
            print("C", *v, name, fmt(val))


def unit_bounds(label, d, r, s, t, h_k, r_k, r_s, p_s, pp_s, H):
    sr = max(mpf(h_k), c3(d, r) * d * r_k) if r else mpf(h_k)
    out = [
        ("thmA", log(c1(d, s) * p_s * (1 + log_star(r_s) / log_star(p_s)) * r_s * H)),
        ("thmC", log(c1(d, s) * pp_s * (1 + log_star(r_s) / log_star(pp_s)) * r_s * H)),
    ]
    if t > 0:
        out.append(("thmB", log(c4(d, r, t) * sr ** (t + 5) * p_s / log(p_s) * r_s * H)))
        fac = pp_s / log_star(pp_s) * (1 + log_star(log(p_s)) / log_star(pp_s))
        out.append(("thm1", log(c5(d, r, s, t) * sr ** (t + 4) * fac * r_s * H)))
    for name, val in out:
        print("B", label, name, fmt(val))


print("# bounds: instance formula ln(value)")
# Q, S = {inf, 2, 3, 5}, alpha = beta = 1
unit_bounds("Q:2,3,5:H=1", 1, 0, 4, 3, 1, mpf(1), log(2) * log(3) * log(5), 5, 2, mpf(1))
# Q, S = {inf, 2, 3}, alpha = 2, beta = 3 (H = log 3)
unit_bounds("Q:2,3:H=log3", 1, 0, 3, 2, 1, mpf(1), log(2) * log(3), 3, 1, log(3))
# Q(sqrt 5), S = {inf1, inf2, (2)}, alpha = beta = 1; 2 is inert, h_K = 1
rk = log((1 + sqrt(5)) / 2)
unit_bounds("Q(sqrt(5)):2:H=1", 2, 1, 3, 1, 1, rk, rk * log(4), 4, 1, mpf(1))


# Quadratic fields with |disc| <= 200: class number from the analytic class
# number formula, regulator from the continued fraction of the fundamental unit.
from mpmath import pi, sin, nint
from sympy import kronecker_symbol, factorint


def squarefree(n):
    return all(k == 1 for k in factorint(abs(n)).values())


def fundamental_unit(D):
    # smallest x + y*sqrt(D) (or half-integral if D = 1 mod 4) with norm +-1
    if D % 4 == 1:
        y = 1
        while True:
            for sign in (-4, 4):
                x2 = D * y * y + sign
                x = int(mp.sqrt(x2)) if x2 > 0 else -1
                for xx in (x - 1, x, x + 1):
                    if xx > 0 and xx * xx == x2:
                        return (xx + y * sqrt(D)) / 2
            y += 1
    y = 1
    while True:
        for sign in (-1, 1):
            x2 = D * y * y + sign
            x = int(mp.sqrt(x2))
            for xx in (x - 1, x, x + 1):
                if xx > 0 and xx * xx == x2:
                    return xx + y * sqrt(D)
        y += 1


print("# quadratic fields: D disc h ln(R_K)")
for D in range(-200, 201):
    if D in (0, 1) or not squarefree(D):
        continue
    disc = D if D % 4 == 1 else 4 * D
    if abs(disc) > 200:
        continue
    N = abs(disc)
    if disc < 0:
        w = {-3: 6, -4: 4}.get(disc, 2)
        h = -mpf(w) / (2 * N) * sum(kronecker_symbol(disc, a) * a for a in range(1, N))
        print("K", D, disc, int(nint(h)), "-")
    else:
        eps = fundamental_unit(D)
        R = log(eps)
        hr = -sum(kronecker_symbol(disc, a) * log(sin(pi * a / N)) for a in range(1, N))
        h = hr / (2 * R)
        assert abs(h - nint(h)) < mpf(10) ** -50
        print("K", D, disc, int(nint(h)), fmt(log(R)))
