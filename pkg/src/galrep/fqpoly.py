"""Univariate polynomial helpers over F_q = Z_q/p (packed coefficient lists,
ascending degree) for root finding and root counting."""

from .errors import ConfigError


def poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_sub(ring, f, g):
    n = max(len(f), len(g))
    out = [ring.zero] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = ring.sub(out[i], c)
    return poly_trim(out)


def poly_rem(ring, f, m):
    f = list(f)
    dm = len(m) - 1
    inv = ring.inv(m[-1])
    while len(f) - 1 >= dm:
        c = ring.mul(f[-1], inv)
        if c:
            k = len(f) - 1 - dm
            for i in range(dm + 1):
                f[k + i] = ring.sub(f[k + i], ring.mul(c, m[i]))
        f.pop()
        poly_trim(f)
    return f


def poly_mulmod(ring, f, g, m):
    if not f or not g:
        return []
    out = [ring.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = ring.add(out[i + j], ring.mul(a, b))
    return poly_rem(ring, out, m)


def poly_powmod(ring, base, n, m):
    out = [ring.one]
    base = poly_rem(ring, list(base), m)
    while n:
        if n & 1:
            out = poly_mulmod(ring, out, base, m)
        base = poly_mulmod(ring, base, base, m)
        n >>= 1
    return out


def poly_gcd(ring, f, g):
    f, g = poly_trim(list(f)), poly_trim(list(g))
    while g:
        f, g = g, poly_rem(ring, f, g)
    return f


def distinct_root_count(ring, coeffs, q):
    coeffs = poly_trim(list(coeffs))
    if len(coeffs) <= 1:
        return 0
    yq = poly_powmod(ring, [ring.zero, ring.one], q, coeffs)
    g = poly_gcd(ring, coeffs, poly_sub(ring, yq, [ring.zero, ring.one]))
    return len(g) - 1


def fq_roots(ring, coeffs, rng):
    """All distinct roots in F_q of a packed polynomial over an e = 1 ring.

    Odd q only (Cantor-Zassenhaus splitting with the quadratic character).
    Returns packed roots sorted by digit tuple for reproducibility.
    """
    if ring.p == 2:
        raise ConfigError("root extraction requires odd characteristic")
    q = ring.p ** ring.a
    coeffs = poly_trim(list(coeffs))
    if len(coeffs) <= 1:
        return []
    yq = poly_powmod(ring, [ring.zero, ring.one], q, coeffs)
    s = poly_gcd(ring, coeffs, poly_sub(ring, yq, [ring.zero, ring.one]))
    if len(s) <= 1:
        return []
    inv = ring.inv(s[-1])
    s = [ring.mul(inv, c) for c in s]
    roots = []
    _split_linear(ring, s, q, rng, roots)
    roots.sort(key=ring.digits)
    return roots


def _split_linear(ring, s, q, rng, out):
    # s monic, squarefree, splits into distinct linear factors
    d = len(s) - 1
    if d == 0:
        return
    if d == 1:
        out.append(ring.neg(s[0]))
        return
    half = (q - 1) // 2
    while True:
        delta = ring.rand_elem(rng)
        w = poly_powmod(ring, [delta, ring.one], half, s)
        g = poly_gcd(ring, poly_sub(ring, w, [ring.one]), s)
        if 0 < len(g) - 1 < d:
            inv = ring.inv(g[-1])
            g = [ring.mul(inv, c) for c in g]
            h = _poly_quo(ring, s, g)
            _split_linear(ring, g, q, rng, out)
            _split_linear(ring, h, q, rng, out)
            return


def _poly_quo(ring, f, g):
    f = list(f)
    dg = len(g) - 1
    inv = ring.inv(g[-1])
    qout = [ring.zero] * (len(f) - dg)
    while len(f) - 1 >= dg:
        c = ring.mul(f[-1], inv)
        k = len(f) - 1 - dg
        qout[k] = c
        if c:
            for i in range(dg + 1):
                f[k + i] = ring.sub(f[k + i], ring.mul(c, g[i]))
        f.pop()
        poly_trim(f)
    return qout
