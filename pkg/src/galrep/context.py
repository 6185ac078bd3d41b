"""Makdisi context construction: sample the evaluation divisor Z in
Frobenius-coherent orbits over Z_q/p^e and build the structure matrices
W0, M_V, M_V3, K_V, K_V3 together with a symbolic product basis of V."""

from fractions import Fraction

from .curves import RingPoly2, _frac_to_ring
from .errors import ConfigError, PointSearchExhausted, RankFailure
from .fqpoly import fq_roots
from .jacobian import JacPoint, product_space
from .linalg import MatZq, ModPSieve, eqn_complement, howell_kernel, rank_mod_p
from .util import rng_for
from .zq import newton_root_zq


class MakdisiContext:
    """Curve structure constants at a fixed accuracy; immutable after init.

    Use .at(acc) for the reduced view at a lower accuracy; views share the
    underlying family cache, so repeated reductions are free.
    """

    def __init__(self, curve, ring, seed, points, frob_perm, W0, M_V, M_V3,
                 K_V, K_V3, V_sym, V_sym_cols, views=None):
        self.curve = curve
        self.ring = ring
        self.seed = seed
        self.points = points
        self.frob_perm = frob_perm
        self.W0 = W0
        self.M_V = M_V
        self.M_V3 = M_V3
        self.K_V = K_V
        self.K_V3 = K_V3
        self.V_sym = V_sym
        self.V_sym_cols = V_sym_cols
        self.d0 = curve.d0
        self.g = curve.genus
        self.d_w = curve.d_w
        self.n_z = curve.n_z
        self.dimV = 2 * curve.d0 + 1 - curve.genus
        self.dimV3 = 3 * curve.d0 + 1 - curve.genus
        self._views = views if views is not None else {ring.e: self}
        self._basis_cache = None
        self._vsym_solver = None

    def at(self, acc):
        if acc in self._views:
            return self._views[acc]
        top = self._views[max(self._views)]
        if acc > top.ring.e:
            raise ValueError("accuracy %d above the context's %d" % (acc, top.ring.e))
        ring2 = top.ring.with_accuracy(acc)
        red = top.ring.reduce_elem
        view = MakdisiContext(
            top.curve, ring2, top.seed,
            [(red(x, ring2), red(y, ring2)) for (x, y) in top.points],
            top.frob_perm,
            top.W0.reduce_to(ring2), top.M_V.reduce_to(ring2),
            top.M_V3.reduce_to(ring2), top.K_V.reduce_to(ring2),
            top.K_V3.reduce_to(ring2), top.V_sym,
            top.V_sym_cols.reduce_to(ring2), views=self._views)
        self._views[acc] = view
        return view

    # -- value machinery ------------------------------------------------------

    def _basis_polys(self):
        if self._basis_cache is None:
            self._basis_cache = [(RingPoly2(self.ring, num), RingPoly2(self.ring, den))
                                 for (num, den) in self.curve.basis]
        return self._basis_cache

    def basis_values(self, x, y):
        """Values of the designated L(D0) basis at a packed point."""
        ring = self.ring
        out = []
        for num, den in self._basis_polys():
            d = den.eval(x, y)
            if not ring.is_unit(d):
                raise RankFailure("basis function has a pole at the point mod p")
            out.append(ring.mul(num.eval(x, y), ring.inv(d)))
        return out

    def vsym_row(self, x, y):
        """Values of the selected symbolic V-basis products at a packed point."""
        b = self.basis_values(x, y)
        m = self.ring.mul
        return [m(b[i], b[j]) for (i, j) in self.V_sym]

    def vsym_coords(self, col):
        """Coordinates of a V-column in the symbolic product basis."""
        if self._vsym_solver is None:
            from .linalg import invert, unit_pivot_rows
            rows = unit_pivot_rows(self.V_sym_cols)
            self._vsym_solver = (rows, invert(self.V_sym_cols.take_rows(rows)))
        rows, inv = self._vsym_solver
        return inv.mul_vec([col[i] for i in rows])

    def residue_key(self, x, y):
        ring1 = self.ring.with_accuracy(1)
        return (self.ring.reduce_elem(x, ring1), self.ring.reduce_elem(y, ring1))


def init_context(spec, ring, seed):
    """Sample Z and precompute all structure matrices (full accuracy)."""
    rng = rng_for(seed, "context", spec.name)
    points, perm = _sample_points(spec, ring, rng)
    ring1 = ring.with_accuracy(1)

    # W0: values of the designated basis of L(D0)
    basis_polys = [(RingPoly2(ring, num), RingPoly2(ring, den))
                   for (num, den) in spec.basis]
    rows = []
    for (x, y) in points:
        row = []
        for num, den in basis_polys:
            d = den.eval(x, y)
            if not ring.is_unit(d):
                raise RankFailure("pole of a basis function at a sampled point")
            row.append(ring.mul(num.eval(x, y), ring.inv(d)))
        rows.append(row)
    W0 = MatZq(ring, spec.n_z, spec.d_w, rows)
    if rank_mod_p(W0) != spec.d_w:
        raise RankFailure("designated basis is dependent mod p")

    dimV = 2 * spec.d0 + 1 - spec.genus
    dimV3 = 3 * spec.d0 + 1 - spec.genus
    M_V = product_space(ring, W0, W0, dimV, rng)
    M_V3 = product_space(ring, M_V, W0, dimV3, rng)
    K_V = eqn_complement(M_V).E
    K_V3 = eqn_complement(M_V3).E
    assert K_V.mul(M_V).is_zero()
    assert K_V3.mul(M_V3).is_zero()

    # deterministic greedy symbolic basis of V from products of basis pairs
    nb = len(spec.basis)
    w0cols = W0.cols()
    sieve = ModPSieve(ring, spec.n_z)
    V_sym = []
    vcols = []
    for i in range(nb):
        for j in range(i, nb):
            col = [ring.mul(a, b) for a, b in zip(w0cols[i], w0cols[j])]
            if sieve.add(col):
                V_sym.append((i, j))
                vcols.append(col)
            if len(V_sym) == dimV:
                break
        if len(V_sym) == dimV:
            break
    if len(V_sym) != dimV:
        raise RankFailure("basis products do not span V mod p")
    V_sym_cols = MatZq.from_cols(ring, vcols, nrows=spec.n_z)

    ctx = MakdisiContext(spec, ring, seed, points, perm, W0, M_V, M_V3,
                         K_V, K_V3, V_sym, V_sym_cols)
    _check_frob_perm(ctx)
    return ctx


def _check_frob_perm(ctx):
    f = ctx.ring.frob
    for i, (x, y) in enumerate(ctx.points):
        fx, fy = f(x), f(y)
        jx, jy = ctx.points[ctx.frob_perm[i]]
        assert fx == jx and fy == jy, "Frobenius permutation mismatch at %d" % i


def _sample_points(spec, ring, rng):
    if ring.p == 2:
        raise ConfigError("point sampling needs odd p")
    ring1 = ring.with_accuracy(1)
    a = ring.a
    n_z = spec.n_z
    fbar = RingPoly2(ring1, spec.f)
    ffull = RingPoly2(ring, spec.f)
    dfbar = RingPoly2(ring1, spec.f.diff_y())
    dens1 = [RingPoly2(ring1, den) for (_, den) in spec.basis]
    divisors_a = [s for s in range(1, a + 1) if a % s == 0]

    points = []
    perm = []
    seen = set()
    attempts = 0
    while len(points) < n_z:
        attempts += 1
        if attempts > 200 + 80 * n_z:
            raise PointSearchExhausted(
                "only %d of %d evaluation points found; field too small" % (len(points), n_z))
        remaining = n_z - len(points)
        xbar = ring1.rand_elem(rng)
        s_cap = max(s for s in divisors_a if s <= remaining) if remaining < a else a
        if s_cap < a:
            # push into the subfield F_{p^s} by the relative field trace
            t = xbar
            acc = t
            for _ in range(a // s_cap - 1):
                t = ring1.frob_iter(t, s_cap)
                acc = ring1.add(acc, t)
            xbar = acc
        coeffs1 = fbar.eval_coeffs_at_x(xbar)
        for ybar in fq_roots(ring1, coeffs1, rng):
            if len(points) >= n_z:
                break
            if dfbar.eval(xbar, ybar) == 0:
                continue
            orbit = [(xbar, ybar)]
            while True:
                nx, ny = ring1.frob(orbit[-1][0]), ring1.frob(orbit[-1][1])
                if (nx, ny) == orbit[0]:
                    break
                orbit.append((nx, ny))
                assert len(orbit) <= a
            if len(orbit) > n_z - len(points):
                continue
            if any(pt in seen for pt in orbit):
                continue
            if any(d.eval(ox, oy) == 0 for (ox, oy) in orbit for d in dens1):
                continue
            # lift the whole orbit coherently: Teichmuller x, Newton y
            x0 = ring.teichmuller(ring1.lift_elem(xbar, ring))
            y0 = newton_root_zq(ring, ffull.eval_coeffs_at_x(x0),
                                ring1.lift_elem(ybar, ring))
            members = [(x0, y0)]
            for _ in range(len(orbit) - 1):
                px, py = members[-1]
                members.append((ring.frob(px), ring.frob(py)))
            px, py = members[-1]
            assert (ring.frob(px), ring.frob(py)) == members[0], \
                "orbit fails to close at full accuracy"
            base = len(points)
            for k, pt in enumerate(members):
                points.append(pt)
                perm.append(base + (k + 1) % len(members))
                seen.add(orbit[k])
    return points, perm


def vanishing_subspace(ctx, pts, expected_dim):
    """Matrix for the subspace of V vanishing at the given points.

    pts entries are indices into Z or packed (x, y) pairs; the points must be
    pairwise distinct mod p.
    """
    ring = ctx.ring
    keys = set()
    rows = []
    for pt in pts:
        if isinstance(pt, int):
            key = ctx.residue_key(*ctx.points[pt])
            rows.append(list(ctx.V_sym_cols.rows[pt]))
        else:
            x, y = pt
            key = ctx.residue_key(x, y)
            rows.append(ctx.vsym_row(x, y))
        if key in keys:
            raise RankFailure("vanishing points collide mod p")
        keys.add(key)
    R = MatZq(ring, len(rows), ctx.dimV, rows)
    K = howell_kernel(R).good
    if K.ncols != expected_dim:
        raise RankFailure("vanishing subspace has dimension %d, expected %d"
                          % (K.ncols, expected_dim))
    return ctx.V_sym_cols.mul(K)


def divisor_class_from_points(ctx, pts, rng=None):
    """The point [sum(pts) - D0] of J from d0 points with value data."""
    if len(pts) != ctx.d0:
        raise RankFailure("need exactly d0 = %d points" % ctx.d0)
    W = vanishing_subspace(ctx, pts, ctx.d_w)
    return JacPoint(ctx, W)


def random_point(ctx, rng, tries=64):
    """Uniform random d0-subset of Z turned into a divisor class."""
    for _ in range(tries):
        subset = rng.sample(range(ctx.n_z), ctx.d0)
        try:
            return divisor_class_from_points(ctx, sorted(subset))
        except RankFailure:
            continue
    raise PointSearchExhausted("random divisor classes kept degenerating")


def resolve_clusters(ctx, clusters, rng):
    """Packed (x, y) points of an evaluation divisor given by clusters.

    Rational points embed directly; a cluster contributes one point per root
    of its minimal polynomial, each of which must lie in F_q and be simple.
    """
    ring = ctx.ring
    ring1 = ring.with_accuracy(1)
    out = []
    for cl in clusters:
        if cl.point is not None:
            x, y = cl.point
            px = _frac_to_ring(ring, x)
            py = _frac_to_ring(ring, y)
            assert RingPoly2(ring, ctx.curve.f).eval(px, py) == 0
            out.append((px, py))
            continue
        deg = cl.degree
        hfull = [_frac_to_ring(ring, cl.min_poly.c.get((i, 0), Fraction(0)))
                 for i in range(deg + 1)]
        h1 = [ring.reduce_elem(c, ring1) for c in hfull]
        roots = fq_roots(ring1, h1, rng)
        if len(roots) != deg:
            raise ConfigError("cluster polynomial does not split over F_q "
                              "(%d of %d roots)" % (len(roots), deg))
        xe = RingPoly2(ring, cl.x_expr)
        ye = RingPoly2(ring, cl.y_expr)
        fful = RingPoly2(ring, ctx.curve.f)
        for rbar in roots:
            tau = newton_root_zq(ring, hfull, ring1.lift_elem(rbar, ring))
            px = xe.eval(tau, ring.zero)
            py = ye.eval(tau, ring.zero)
            assert fful.eval(px, py) == 0
            out.append((px, py))
    keys = [ctx.residue_key(x, y) for (x, y) in out]
    if len(set(keys)) != len(keys):
        raise ConfigError("evaluation divisor points collide mod p")
    return out
