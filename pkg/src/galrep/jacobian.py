"""Makdisi divisor-class arithmetic: product and quotient Riemann-Roch
spaces, the add-flip primitive, the membership test, add-flip chains from
non-adjacent form, and the Frobenius action on points."""

from .errors import DimensionOverflow, GenerationStalled
from .linalg import MatZq, ModPSieve, eqn_matrix, howell_kernel

RETRY_BUDGET = 32


class JacPoint:
    """A point [D - D0] of J stored as an n_Z x d_W matrix for L(2D0 - D)."""

    __slots__ = ("ctx", "W", "acc")

    def __init__(self, ctx, W):
        self.ctx = ctx
        self.W = W
        self.acc = ctx.ring.e

    def reduce(self, acc):
        if acc == self.acc:
            return self
        view = self.ctx.at(acc)
        return JacPoint(view, self.W.reduce_to(view.ring))

    def to_json(self):
        return {"acc": self.acc, "W": self.W.to_json()}

    @classmethod
    def from_json(cls, ctx, data):
        view = ctx.at(int(data["acc"]))
        return cls(view, MatZq.from_json(view.ring, data["W"]))

    def __repr__(self):
        return f"JacPoint(acc={self.acc}, {self.W.nrows}x{self.W.ncols})"


def zero_point(ctx):
    return JacPoint(ctx, ctx.W0)


def rand_combo(ring, cols, rng):
    """Random small-window combination of columns."""
    coeffs = [ring.rand_small(rng) for _ in cols]
    n = len(cols[0])
    red = ring.red
    return [red(sum(c * col[i] for c, col in zip(coeffs, cols))) for i in range(n)]


def rand_unit_combo(ring, cols, rng, tries=64):
    """Random combination that is nonzero mod p (represents f != 0)."""
    for _ in range(tries):
        c = rand_combo(ring, cols, rng)
        if any(ring.is_unit(x) for x in c):
            return c
    raise GenerationStalled("could not draw a combination nonzero mod p")


def product_space(ring, M_A, M_B, dim_out, rng, rounds=RETRY_BUDGET):
    """Matrix for L(A+B) from random products of column combinations (DivAdd).

    Rank extraction runs mod p only; the selected columns keep full accuracy.
    """
    n = M_A.nrows
    acols = M_A.cols()
    bcols = M_B.cols()
    sieve = ModPSieve(ring, n)
    out = []
    mul = ring.mul
    for _ in range(rounds):
        for _ in range(dim_out - len(out)):
            a = rand_combo(ring, acols, rng)
            b = rand_combo(ring, bcols, rng)
            prod = [mul(x, y) for x, y in zip(a, b)]
            if sieve.add(prod):
                out.append(prod)
        if len(out) == dim_out:
            return MatZq.from_cols(ring, out, nrows=n)
    raise GenerationStalled("DivAdd failed to reach dimension %d" % dim_out)


def div_add(ctx, M_A, M_B, dim_out=None, rng=None):
    """Matrix for L(A+B); dim defaults to dim L(A) + dim L(B) + g - 1."""
    if dim_out is None:
        dim_out = M_A.ncols + M_B.ncols + ctx.g - 1
    return product_space(ctx.ring, M_A, M_B, dim_out, rng)


def div_sub(ctx, M_A, M_B, dim_out=None, rng=None, rounds=RETRY_BUDGET):
    """Matrix for L(A-B) (DivSub).

    With known dim_out, uses two random elements of span(M_B) and retries
    while the kernel is too big; raises DimensionOverflow when the oversize
    is stable (the true space is bigger: used as a dimension gate upstream).
    With dim_out None, uses every column of M_B (slower, exact).
    """
    ring = M_A.ring
    KA = eqn_matrix(M_A)
    MV3 = ctx.M_V3
    bcols = M_B.cols()

    def kernel_for(bs):
        blocks = [KA.scale_cols(b).mul(MV3) for b in bs]
        stack = blocks[0]
        for bl in blocks[1:]:
            stack = stack.vstack(bl)
        U = howell_kernel(stack).good
        return MV3.mul(U)

    if dim_out is None:
        return kernel_for(bcols)
    last = None
    for _ in range(rounds):
        S = kernel_for([rand_unit_combo(ring, bcols, rng) for _ in range(2)])
        if S.ncols == dim_out:
            return S
        if S.ncols > dim_out:
            if last is not None and last == S.ncols:
                raise DimensionOverflow("space has dimension %d > %d" % (S.ncols, dim_out))
            last = S.ncols
    raise GenerationStalled("DivSub failed to reach dimension %d" % dim_out)


def add_flip(x, y, rng):
    """(z, c) with z = -(x + y) and c the function column used (Add-flip).

    c is chosen uniformly at random from the nonzero span, as the pairing
    algorithm requires.
    """
    ctx = x.ctx
    assert y.ctx is ctx, "points live on different context views"
    ring = ctx.ring
    W12 = div_add(ctx, x.W, y.W, 2 * ctx.d0 + 1 - ctx.g, rng)
    W12p = div_sub(ctx, W12, ctx.W0, ctx.d_w, rng)
    c = rand_unit_combo(ring, W12p.cols(), rng)
    W123 = ctx.M_V.scale_rows(c)
    W3 = div_sub(ctx, W123, W12p, ctx.d_w, rng)
    return JacPoint(ctx, W3), c


def membership(ctx, W, rng):
    """True iff W represents a subspace of the form L(2D0 - D)."""
    w = rand_unit_combo(ctx.ring, W.cols(), rng)
    S = div_sub(ctx, ctx.M_V.scale_rows(w), W, None, rng)
    return S.ncols == ctx.d_w


def is_zero_point(x, rng=None):
    """Exact zero test: dim {v in V3 : v L(D0) in L(2D0-D)} = dim L(D0-D),
    which is 1 iff D ~ D0 and 0 else."""
    S = div_sub(x.ctx, x.W, x.ctx.W0, None)
    return S.ncols == 1


def equal_points(x, y, rng):
    """Class equality through the zero test on the difference.

    The detecting function for D ~ D' has poles at D', which leaves V3, so
    the one-sided DivSub count cannot see it; flipping the difference against
    D0 keeps the poles inside the precomputed spaces and stays exact.
    """
    if x.W is y.W:
        return True
    flipped, _ = add_flip(x, add_flip(y, zero_point(y.ctx), rng)[0], rng)
    return is_zero_point(flipped)


def neg_point(x, rng):
    return add_flip(x, zero_point(x.ctx), rng)[0]


def add_points(x, y, rng):
    z, _ = add_flip(x, y, rng)
    return add_flip(z, zero_point(x.ctx), rng)[0]


# ---------------------------------------------------------------------------
# add-flip chains

def naf_digits(n):
    """Non-adjacent form of n > 0, most significant digit first."""
    digits = []
    while n:
        if n & 1:
            d = 2 - (n % 4)
            n -= d
        else:
            d = 0
        digits.append(d)
        n >>= 1
    return digits[::-1]


def naf_chain(m):
    """Add-flip chain for m: triples (m_s, i_s, j_s) with m_s = -m_i - m_j."""
    chain = [(0, 0, 0)]
    if m == 0:
        return chain
    chain.append((1, 0, 0))
    if m == 1:
        return chain

    idx_neg = None

    def ensure(value):
        # index of an entry holding the value 1 or -1
        nonlocal idx_neg
        if value == 1:
            return 1
        if idx_neg is None:
            chain.append((-1, 1, 0))
            idx_neg = len(chain) - 1
        return idx_neg

    digits = naf_digits(abs(m))
    cur, sigma = 1, 1          # chain[cur] holds sigma * prefix
    for d in digits[1:]:
        pre = chain[cur][0]
        chain.append((-2 * pre, cur, cur))
        cur = len(chain) - 1
        sigma = -sigma          # now holds sigma * (2 * old prefix)
        if d:
            k = ensure(sigma * d)
            chain.append((-chain[cur][0] - chain[k][0], cur, k))
            cur = len(chain) - 1
            sigma = -sigma
    if chain[cur][0] != m:
        chain.append((-chain[cur][0], cur, 0))
        cur = len(chain) - 1
    assert chain[cur][0] == m
    return chain


def scalar_mul(x, m, rng):
    """m * x via an add-flip chain."""
    ctx = x.ctx
    chain = naf_chain(m)
    pts = []
    for s, (_, i, j) in enumerate(chain):
        if s == 0:
            pts.append(zero_point(ctx))
        elif s == 1:
            pts.append(x)
        else:
            pts.append(add_flip(pts[i], pts[j], rng)[0])
    return pts[-1]


def frobenius_point(x):
    """The Galois conjugate x^Phi: entry-wise Frobenius, rows permuted by
    the permutation induced by Phi^(-1) on Z."""
    ctx = x.ctx
    perm = ctx.frob_perm
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    f = ctx.ring.frob
    rows = [[f(v) for v in x.W.rows[inv[i]]] for i in range(x.W.nrows)]
    return JacPoint(ctx, MatZq(ctx.ring, x.W.nrows, x.W.ncols, rows))


def poly_of_frobenius(x, coeffs, rng):
    """Apply sum_k coeffs[k] * Phi^k to a point (coefficients are integers)."""
    ctx = x.ctx
    acc = None
    y = x
    for k, c in enumerate(coeffs):
        if k:
            y = frobenius_point(y)
        if c:
            term = scalar_mul(y, c, rng)
            acc = term if acc is None else add_points(acc, term, rng)
    return acc if acc is not None else zero_point(ctx)
