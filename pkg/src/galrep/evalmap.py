"""The Galois-equivariant evaluation map J --> A^1 (the two-ladder
construction through E1 and E2) and coordinate charts at the origin used by
torsion lifting.

The evaluation map must use Q-rational divisors E1, E2 so that the values
generate F(x) over Q.  A chart, by contrast, only provides local coordinates
near 0 and its divisors need not be rational; building them from random
points of Z avoids the systematic degeneracies that small rational divisors
produce (their residuals E_0 ~ D0-E1 and E'_0 ~ D0-E2 tend to collide on
low-height points, which kills the differential at 0)."""

from .context import random_point, resolve_clusters, vanishing_subspace
from .errors import ChartDegenerate, DimensionOverflow, EvalFail, RankFailure, UnitFailure
from .jacobian import div_add, div_sub, frobenius_point, zero_point


class EvalMapSpec:
    """Evaluation data: W_E1, W_E2 at top accuracy; coordinate indices
    (i1, i2) into the symbolic V-basis for the A^1-valued map; chart base
    data (j0, c0) when used as a coordinate chart."""

    def __init__(self, ctx, W_E1, W_E2, i1=None, i2=None, j0=None, c0=None):
        self.ctx_top = ctx
        self.W_E1 = W_E1
        self.W_E2 = W_E2
        self.i1 = i1
        self.i2 = i2
        self.j0 = j0
        self.c0 = c0              # dehomogenized chart value at 0, top accuracy
        self._views = {}
        self._c0_views = {}

    def at(self, acc):
        if acc not in self._views:
            ring2 = self.ctx_top.ring.with_accuracy(acc)
            self._views[acc] = (self.W_E1.reduce_to(ring2), self.W_E2.reduce_to(ring2))
        W1, W2 = self._views[acc]
        c0 = None
        if self.c0 is not None:
            if acc not in self._c0_views:
                ring2 = self.ctx_top.ring.with_accuracy(acc)
                red = self.ctx_top.ring.reduce_elem
                self._c0_views[acc] = [red(v, ring2) for v in self.c0]
            c0 = self._c0_views[acc]
        return W1, W2, c0


def build_eval_spec(ctx, rng, probe_count=5, skip_pairs=0):
    """The rational evaluation map: resolve the configured E1/E2 and fix the
    coordinate pair (i1, i2).

    i1 < i2 are the lexicographically first symbolic-basis indices whose
    coordinates are units on a probe sample of random points; skip_pairs
    advances to later candidate pairs after a downstream collision.
    """
    pts1 = resolve_clusters(ctx, ctx.curve.E1, rng)
    pts2 = resolve_clusters(ctx, ctx.curve.E2, rng)
    dim = ctx.d0 + 1
    W_E1 = vanishing_subspace(ctx, pts1, dim)
    W_E2 = vanishing_subspace(ctx, pts2, dim)
    spec = EvalMapSpec(ctx, W_E1, W_E2)

    # probe for generically nonzero coordinates at e = 1
    ctx1 = ctx.at(1)
    ring1 = ctx1.ring
    good = [True] * ctx.dimV
    probes = 0
    stalls = 0
    while probes < probe_count:
        x = random_point(ctx1, rng)
        try:
            lam = _lambda_coords(ctx1, spec, x, rng)
        except EvalFail:
            stalls += 1
            if stalls > 8 * probe_count:
                raise RankFailure("evaluation map keeps hitting dimension gates")
            continue
        probes += 1
        for i in range(ctx.dimV):
            if not ring1.is_unit(lam[i]):
                good[i] = False
    candidates = [i for i, ok in enumerate(good) if ok]
    pairs = [(a, b) for ai, a in enumerate(candidates) for b in candidates[ai + 1:]]
    if skip_pairs >= len(pairs):
        raise RankFailure("no usable coordinate pair left")
    spec.i1, spec.i2 = pairs[skip_pairs]
    return spec


def build_chart_spec(ctx, rng, tries=12):
    """A coordinate chart at 0 from two random point-subsets of Z.

    Retries fresh subsets until the dimension gates pass and the chart value
    at 0 has a unit entry; the immersivity test itself happens on first use
    in the chart lifting step.
    """
    ring = ctx.ring
    deg = ctx.d0 - ctx.g
    dim = ctx.d0 + 1
    for _ in range(tries):
        idx = rng.sample(range(ctx.n_z), 2 * deg)
        try:
            W_E1 = vanishing_subspace(ctx, sorted(idx[:deg]), dim)
            W_E2 = vanishing_subspace(ctx, sorted(idx[deg:]), dim)
            spec = EvalMapSpec(ctx, W_E1, W_E2)
            c0p = _s2_column(ctx, spec, zero_point(ctx), rng)
        except (EvalFail, RankFailure):
            continue
        j0 = next((i for i, v in enumerate(c0p) if ring.is_unit(v)), None)
        if j0 is None:
            continue
        inv = ring.inv(c0p[j0])
        spec.j0 = j0
        spec.c0 = [ring.mul(inv, v) for i, v in enumerate(c0p) if i != j0]
        return spec
    raise ChartDegenerate("no usable chart found from random Z-subsets")


def _s2_column(ctx, spec, x, rng):
    """The lone generator of L(2D0 - E1 - E2 - E_x) as a value column."""
    W_E1, W_E2, _ = spec.at(ctx.ring.e)
    try:
        S1p = div_add(ctx, x.W, W_E1, 2 * ctx.d0 + 1, rng)
        S1 = div_sub(ctx, S1p, ctx.M_V, 1, rng)
        s1 = S1.col(0)
        S2p = div_sub(ctx, ctx.M_V.scale_rows(s1), x.W, ctx.d_w, rng)
        S2pp = div_add(ctx, S2p, W_E2, 2 * ctx.d0 + 1, rng)
        S2 = div_sub(ctx, S2pp, ctx.M_V, 1, rng)
    except DimensionOverflow as exc:
        raise EvalFail("dimension gate: %s" % exc) from exc
    return S2.col(0)


def _lambda_coords(ctx, spec, x, rng):
    return ctx.vsym_coords(_s2_column(ctx, spec, x, rng))


def eval_point(ctx, spec, x, rng):
    """alpha(x) = lambda_{i1} / lambda_{i2} in Z_q/p^e; EvalFail on a
    dimension gate, UnitFailure on a non-unit denominator."""
    ring = ctx.ring
    lam = _lambda_coords(ctx, spec, x, rng)
    den = lam[spec.i2]
    if not ring.is_unit(den):
        raise UnitFailure("lambda_i2 is not a unit")
    return ring.mul(lam[spec.i1], ring.inv(den))


def chart_coords(ctx, spec, x, rng):
    """Chart coordinates near 0: the S2 generator scaled to 1 at row j0,
    with that row dropped (length n_Z - 1)."""
    ring = ctx.ring
    s2 = _s2_column(ctx, spec, x, rng)
    t = s2[spec.j0]
    if not ring.is_unit(t):
        raise UnitFailure("chart dehomogenization entry is not a unit")
    inv = ring.inv(t)
    return [ring.mul(inv, v) for i, v in enumerate(s2) if i != spec.j0]


def eval_frobenius_check(ctx, spec, x, rng):
    """Equivariance probe: alpha(x^Phi) == Phi(alpha(x))."""
    a = eval_point(ctx, spec, x, rng)
    b = eval_point(ctx, spec, frobenius_point(x), rng)
    return b == ctx.ring.frob(a)
