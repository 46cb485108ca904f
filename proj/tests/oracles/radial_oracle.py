"""Independent 1-D oracle for quotients of radial test fields.

For phi = f(N) the angular factor |grad N|^2 appears identically in the
numerator and denominator of the Hardy and Rellich quotients, so by polar
coordinates
    hardy   = int f'^2 r^(a+Q-1) dr / int f^2 r^(a+Q-3) dr
    rellich = int (f'' + (Q-1) f'/r)^2 r^(a+Q-1) dr / int f^2 r^(a+Q-5) dr
for every gamma. Profiles are rebuilt here symbolically (sympy) and the
integrals evaluated with mpmath at 30 digits. The printed numbers are frozen
in tests/test_inequalities.cpp.
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 30
r = sp.symbols("r", positive=True)


def smooth(t):
    return 10 * t**3 - 15 * t**4 + 6 * t**5


def pieces(core, a, delta, R, r0):
    """(lo, hi, expr) for the cut-in / core / seam / tail / cut-out shape."""
    half = sp.Rational(1, 2) * r0
    tail = r ** (-a)
    s_in = smooth((r - half) / half)
    s_seam = smooth((r - 1) / delta)
    s_out = smooth((r - R) / R)
    return [
        (half, r0, s_in * core),
        (r0, 1, core),
        (1, 1 + delta, (1 - s_seam) * core + s_seam * tail),
        (1 + delta, R, tail),
        (R, 2 * R, (1 - s_out) * tail),
    ]


def bump_pieces(r0, R):
    t = (r - r0) / (R - r0)
    return [(r0, R, (4 * t * (1 - t)) ** 3)]


def integrate(expr, lo, hi):
    f = sp.lambdify(r, expr, "mpmath")
    lo, hi = mp.mpf(sp.N(lo, 40)), mp.mpf(sp.N(hi, 40))
    # log-substitution keeps power tails over many decades accurate
    g = lambda u: f(mp.e**u) * mp.e**u
    n = max(4, int(mp.log(hi / lo) / mp.log(1.5)))
    nodes = [mp.log(lo) + (mp.log(hi) - mp.log(lo)) * i / n for i in range(n + 1)]
    return mp.quad(g, nodes)


def hardy_quotient(ps, Q, alpha):
    num = den = mp.mpf(0)
    for lo, hi, e in ps:
        num += integrate(sp.diff(e, r) ** 2 * r ** (alpha + Q - 1), lo, hi)
        den += integrate(e**2 * r ** (alpha + Q - 3), lo, hi)
    return num / den


def rellich_quotient(ps, Q, alpha):
    num = den = mp.mpf(0)
    for lo, hi, e in ps:
        lap = sp.diff(e, r, 2) + (Q - 1) * sp.diff(e, r) / r
        num += integrate(lap**2 * r ** (alpha + Q - 1), lo, hi)
        den += integrate(e**2 * r ** (alpha + Q - 5), lo, hi)
    return num / den


def schedule(eps):
    return sp.Rational(eps).limit_denominator(1000) / 2, sp.exp(2 / sp.Rational(eps).limit_denominator(1000)), sp.Rational(1, 1000)


def hardy_family(Q, alpha, eps):
    delta, R, r0 = schedule(eps)
    a = sp.Rational(Q + alpha - 2, 2) + sp.Rational(eps).limit_denominator(1000)
    return pieces(sp.Integer(1), a, delta, R, r0)


def rellich_family(Q, alpha, eps):
    delta, R, r0 = schedule(eps)
    b = sp.Rational(Q + alpha - 4, 2) + sp.Rational(eps).limit_denominator(1000)
    return pieces(1 + b / 2 * (1 - r**2), b, delta, R, r0)


def rational_limit(xs, ys):
    A = mp.matrix([[1, x, -x * y] for x, y in zip(xs, ys)])
    b = mp.matrix(ys)
    c = mp.lu_solve(A.T * A, A.T * b)
    return c[0]


if __name__ == "__main__":
    eps = [0.5, 0.2, 0.1, 0.05]
    for name, Q, fam, quot in [
        ("R3 hardy", 3, hardy_family, hardy_quotient),
        ("H1 hardy", 4, hardy_family, hardy_quotient),
        ("H2 rellich", 6, rellich_family, rellich_quotient),
    ]:
        qs = [quot(fam(Q, 0, e), Q, 0) for e in eps]
        print(name, [mp.nstr(q, 17) for q in qs], "rational limit", mp.nstr(rational_limit(eps, qs), 17))
    print("H1 hardy alpha=1 eps=0.2", mp.nstr(hardy_quotient(hardy_family(4, 1, 0.2), 4, 1), 17))
    bump = bump_pieces(sp.Rational(3, 10), 2)
    for alpha in (0, 1, -1):
        print("H1 bump(0.3,2) hardy alpha=%d" % alpha, mp.nstr(hardy_quotient(bump, 4, alpha), 17))
    print("H2 bump(0.3,2) rellich", mp.nstr(rellich_quotient(bump, 6, 0), 17))
    print("R3 bump(0.3,2) hardy", mp.nstr(hardy_quotient(bump, 3, 0), 17))
