"""Function evaluation at divisors (the two-determinant scheme) and the
Frey-Rueck pairing with its linearized Z/m form.  All pairing work runs at
accuracy e = 1, i.e. over F_q."""

from .errors import EvalFail, GenerationStalled, PairingFailure
from .jacobian import (add_flip, div_add, naf_chain, rand_unit_combo, zero_point)
from .linalg import MatZq, ModPSieve, det, howell_kernel
from .zq import dlog_mu, ZqElem

PAIRING_RETRIES = 8


class PairingContext:
    """Context reduced to e = 1 plus a generator of mu_m in F_q."""

    def __init__(self, ctx, m, rng):
        self.ctx = ctx.at(1)
        self.m = m
        q = ctx.ring.p ** ctx.ring.a
        if (q - 1) % m != 0:
            raise PairingFailure("mu_%d is not contained in F_q" % m)
        self.cofactor = (q - 1) // m
        self.zeta = _find_zeta(self.ctx.ring, m, self.cofactor, rng)
        self._d0prime = None   # cached (c, W) from add_flip(0, 0)

    def d0_prime(self, rng, refresh=False):
        if self._d0prime is None or refresh:
            z = zero_point(self.ctx)
            w, _ = add_flip(z, z, rng)
            self._d0prime = w
        return self._d0prime


def _find_zeta(ring1, m, cofactor, rng):
    from .polyring import prime_factors
    primes = list(prime_factors(m))
    while True:
        z = ring1.rand_elem(rng)
        if not ring1.is_unit(z):
            continue
        zeta = ring1.powz(z, cofactor)
        if zeta == ring1.one:
            continue
        if all(ring1.powz(zeta, m // r) != ring1.one for r in primes):
            return zeta


def eval_at_divisor(ctx, c, W_D, rng):
    """f(D) for the function f in V3 represented by the column c, where W_D
    represents L(2D0 - D); raises EvalFail when supp D meets supp D0.

    Two-determinant scheme: supplement L(2D0-D) inside V by columns of M_V,
    supplement L(5D0-D) inside V5 by products of M_V3 and M_V columns, read
    off the relation kernels, and return det-ratio(f) / det-ratio(1).
    """
    assert ctx.ring.e == 1, "pairings run over F_q"
    for attempt in range(2):
        try:
            return _eval_at_divisor_once(ctx, c, W_D, rng, shuffle=attempt > 0)
        except GenerationStalled:
            continue
    raise EvalFail("two-determinant scheme degenerated")


def _eval_at_divisor_once(ctx, c, W_D, rng, shuffle=False):
    ring = ctx.ring
    d0 = ctx.d0
    n = ctx.n_z
    s_candidates = ctx.M_V.cols()
    if shuffle:
        rng.shuffle(s_candidates)
    s_cols = _greedy_supplement(ring, W_D.cols(), iter(s_candidates), d0, n)
    # L(5D0-D) and its supplement in V5 by odot-products
    WP = div_add(ctx, W_D, ctx.M_V3, 4 * d0 + 1 - ctx.g, rng)

    def products():
        ucols = ctx.M_V3.cols()
        vcols = ctx.M_V.cols()
        if shuffle:
            rng.shuffle(ucols)
            rng.shuffle(vcols)
        for u in ucols:
            for v in vcols:
                yield [ring.mul(a, b) for a, b in zip(u, v)]

    t_cols = _greedy_supplement(ring, WP.cols(), products(), d0, n)
    base = t_cols + WP.cols()
    A1 = MatZq.from_cols(ring, s_cols + base, nrows=n)
    delta1 = _det_ratio(ring, A1, d0)
    if delta1 is None:
        raise GenerationStalled("relation kernel was singular")
    if delta1 == ring.zero:
        raise EvalFail("supports of D and D0 intersect")
    cs_cols = [[ring.mul(cv, x) for cv, x in zip(c, col)] for col in s_cols]
    A2 = MatZq.from_cols(ring, cs_cols + base, nrows=n)
    deltaf = _det_ratio(ring, A2, d0)
    if deltaf is None:
        raise GenerationStalled("relation kernel was singular")
    return ring.mul(deltaf, ring.inv(delta1))


def _greedy_supplement(ring, fixed_cols, candidates, count, n):
    """First `count` candidate columns independent of the fixed block mod p."""
    sieve = ModPSieve(ring, n)
    for col in fixed_cols:
        sieve.add(col)
    out = []
    for col in candidates:
        if sieve.add(col):
            out.append(col)
            if len(out) == count:
                return out
    raise GenerationStalled("could not complete the supplement")


def _det_ratio(ring, A, d0):
    """det(K_t) / det(K_s) from the kernel of A, or None when K_s is singular."""
    K = howell_kernel(A).good
    if K.ncols != d0:
        return None
    Ks = K.take_rows(range(d0))
    Kt = K.take_rows(range(d0, 2 * d0))
    ds = det(Ks)
    if ds == ring.zero:
        return None
    return ring.mul(det(Kt), ring.inv(ds))


def frey_ruck(pc, W_T, W_D, rng):
    """A representative of {[T-D0], [D-D0]}_m in F_q^x (Frey-Rueck pairing).

    Miller-style accumulation along an add-flip chain for m, with the final
    correction by the lone function of L(D0 - T_n); retries re-randomize both
    the auxiliary divisor D0' and the representative of D.
    """
    from .jacobian import JacPoint
    ctx = pc.ctx
    WD = W_D
    for attempt in range(PAIRING_RETRIES):
        try:
            return _frey_ruck_once(pc, W_T, WD, rng)
        except (EvalFail, GenerationStalled, ZeroDivisionError):
            pc.d0_prime(rng, refresh=True)
            # replace D by an equivalent divisor, same strategy as D0'
            z = zero_point(ctx)
            pt = add_flip(add_flip(JacPoint(ctx, WD), z, rng)[0], z, rng)[0]
            WD = pt.W
    raise PairingFailure("pairing failed after %d retries" % PAIRING_RETRIES)


def _frey_ruck_once(pc, W_T, W_D, rng):
    ctx = pc.ctx
    ring = ctx.ring
    from .jacobian import JacPoint, div_sub
    chain = naf_chain(pc.m)
    WD0p = pc.d0_prime(rng)
    pts = [zero_point(ctx), JacPoint(ctx, W_T)]
    H = [ring.one, ring.one]
    for s in range(2, len(chain)):
        _, i, j = chain[s]
        zs, cs = add_flip(pts[i], pts[j], rng)
        pts.append(zs)
        num = eval_at_divisor(ctx, cs, WD0p.W, rng)
        den = ring.mul(eval_at_divisor(ctx, cs, W_D, rng),
                       ring.mul(H[i], H[j]))
        if den == ring.zero:
            raise EvalFail("zero denominator in the Miller accumulation")
        H.append(ring.mul(num, ring.inv(den)))
    # f_inf spans the 1-dimensional L(D0 - T_n)
    c_inf = div_sub(ctx, pts[-1].W, ctx.W0, 1, rng).col(0)
    num = eval_at_divisor(ctx, c_inf, W_D, rng)
    den = eval_at_divisor(ctx, c_inf, WD0p.W, rng)
    if num == ring.zero or den == ring.zero:
        raise EvalFail("zero value at the final correction")
    return ring.mul(H[-1], ring.mul(num, ring.inv(den)))


def frey_ruck_linearized(pc, W_T, W_D, rng):
    """log_zeta of the pairing raised to (q-1)/m: a residue mod m."""
    ring = pc.ctx.ring
    z = frey_ruck(pc, W_T, W_D, rng)
    zm = ring.powz(z, pc.cofactor)
    return dlog_mu(ZqElem(ring, zm), ZqElem(ring, pc.zeta), pc.m)
