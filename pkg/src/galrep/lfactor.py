"""Naive local L-factor computation at small p: point counting over F_{p^k}
for hyperelliptic models y^2 + h(x) y = f(x) (odd p) and plane curves with
small y-degree (e.g. smooth plane quartics), then Newton identities plus the
functional equation.

Convention: L_p(x) is the monic characteristic polynomial of Frobenius, so
the constant term is p^g and Res(L_p, x^a - 1) = #J(F_{p^a}).  Configs
carrying the inverse (constant term 1) convention are normalized on load.
"""

import itertools
import logging

from .curves import RingPoly2
from .fqpoly import distinct_root_count
from .errors import BudgetExceeded, ModelUnsupported
from .zq import make_ring

log = logging.getLogger("galrep.lfactor")

ENUM_BUDGET = 4_000_000


class ZetaData:
    """Counts over F_{p^k} for k = 1..g together with the L-polynomial."""

    def __init__(self, counts, Lp):
        self.counts = counts
        self.Lp = Lp


def count_points(curve, p, k):
    """Exact number of points of the smooth projective model over F_{p^k}."""
    if p ** k > ENUM_BUDGET:
        raise BudgetExceeded("p^k = %d exceeds the enumeration budget" % p ** k)
    if curve.hyperelliptic is not None:
        return _count_hyperelliptic(curve, p, k)
    if curve.plane_quartic or curve.f.deg_total() <= 4:
        return _count_plane(curve, p, k)
    raise ModelUnsupported("no counting scheme for this model")


def _field(p, k):
    # fixed seed: any model of F_{p^k} gives the same counts
    return make_ring(p, k, 1, seed=17)


def _elements(ring):
    p, a = ring.p, ring.a
    for digits in itertools.product(range(p), repeat=a):
        yield ring.pack(digits)


def _count_hyperelliptic(curve, p, k):
    if p == 2:
        raise ModelUnsupported("hyperelliptic counting needs odd characteristic")
    h, f = curve.hyperelliptic
    g = curve.genus
    delta = h * h + curve_const(4) * f
    d = delta.deg_total()
    if d not in (2 * g + 1, 2 * g + 2):
        raise ModelUnsupported("discriminant degree %d not in {2g+1, 2g+2}" % d)
    ring = _field(p, k)
    q = p ** k
    rp = RingPoly2(ring, delta)
    half = (q - 1) // 2
    total = 0
    for x in _elements(ring):
        v = rp.eval(x, ring.zero)
        if v == 0:
            total += 1
        elif ring.powz(v, half) == ring.one:
            total += 2
    if d == 2 * g + 1:
        total += 1
    else:
        lc = _frac_lead(ring, delta, d)
        if ring.powz(lc, half) == ring.one:
            total += 2
    return total


def curve_const(v):
    from .curves import Poly2
    return Poly2.const(v)


def _frac_lead(ring, poly, d):
    from .curves import _frac_to_ring
    for (i, j), c in poly.c.items():
        if i == d and j == 0:
            return _frac_to_ring(ring, c)
    raise ModelUnsupported("missing leading coefficient")


def _count_plane(curve, p, k):
    """Per-x root counting in y plus the points on the line at infinity."""
    ring = _field(p, k)
    q = p ** k
    rp = RingPoly2(ring, curve.f)
    total = 0
    for x in _elements(ring):
        coeffs = rp.eval_coeffs_at_x(x)
        total += _distinct_roots(ring, coeffs, q)
    total += _infinity_points(ring, curve, q)
    return total


def _distinct_roots(ring, coeffs, q):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ModelUnsupported("curve contains a vertical line")
    return distinct_root_count(ring, coeffs, q)


def _infinity_points(ring, curve, q):
    d = curve.f.deg_total()
    # top-degree form F(X, Y, 0): coefficients of x^i y^(d-i)
    phi = [ring.zero] * (d + 1)
    from .curves import _frac_to_ring
    for (i, j), c in curve.f.c.items():
        if i + j == d:
            phi[j] = _frac_to_ring(ring, c)
    # points (1 : y : 0): distinct roots of phi as a polynomial in y
    coeffs = list(phi)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    count = _distinct_roots(ring, coeffs, q) if len(coeffs) > 1 else 0
    # the point (0 : 1 : 0) lies on the curve iff the y^d coefficient vanishes
    if phi[d] == 0:
        count += 1
    return count


def zeta_numerator(curve, p, g=None):
    """Monic Frobenius characteristic polynomial (ascending coefficients)."""
    g = curve.genus if g is None else g
    counts = [count_points(curve, p, k) for k in range(1, g + 1)]
    s = [p ** k + 1 - counts[k - 1] for k in range(1, g + 1)]
    # Newton identities for the top coefficients of the monic char poly
    c = {2 * g: 1}
    for k in range(1, g + 1):
        acc = s[k - 1]
        for i in range(1, k):
            acc += c[2 * g - i] * s[k - i - 1]
        if acc % k != 0:
            raise ModelUnsupported("inconsistent point counts")
        c[2 * g - k] = -acc // k
    for i in range(g):
        c[i] = p ** (g - i) * c[2 * g - i]
    Lp = [c[i] for i in range(2 * g + 1)]
    return ZetaData(counts, Lp)


def counts_from_lpoly(Lp, p, kmax):
    """Recompute N_k from a monic L-polynomial via Newton's identities."""
    n = len(Lp) - 1
    # power sums of the roots of the monic polynomial
    s = []
    for k in range(1, kmax + 1):
        acc = -k * Lp[n - k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            if k - i >= 1 and n - i >= 0:
                acc -= Lp[n - i] * s[k - i - 1]
        s.append(acc)
    return [p ** k + 1 - s[k - 1] for k in range(1, kmax + 1)]


def normalize_lpoly(coeffs, p, g):
    """Accept either coefficient convention and return the monic one."""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != 2 * g + 1:
        raise ModelUnsupported("L-polynomial must have degree 2g")
    if coeffs[-1] == 1 and coeffs[0] == p ** g:
        return coeffs
    if coeffs[0] == 1 and coeffs[-1] == p ** g:
        log.info("normalizing L_p from the zeta-numerator convention to the "
                 "monic Frobenius convention")
        return list(reversed(coeffs))
    raise ModelUnsupported("L-polynomial matches neither coefficient convention")
