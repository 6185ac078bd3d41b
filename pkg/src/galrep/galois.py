"""The end-to-end pipeline: Frobenius-order bound, Jacobian order, torsion
basis extraction with pairing-certified independence, the Frobenius matrix,
orbit decomposition, exhaustive evaluation, and assembly of F(x) and G(x)
with rational reconstruction."""

import logging
from fractions import Fraction
from math import gcd, lcm, log

from .context import init_context, random_point
from .errors import (CollisionPersistent, ConfigError, EvalFail, GenerationStalled,
                     NoReconstruction, PairingFailure, RankFailure, ChartDegenerate)
from .evalmap import build_chart_spec, build_eval_spec, eval_point
from .jacobian import (add_flip, add_points, equal_points, frobenius_point,
                       is_zero_point, scalar_mul, zero_point)
from .lfactor import normalize_lpoly, zeta_numerator
from .lift import lift_torsion
from .pairings import PairingContext, frey_ruck_linearized
from .polyring import (charpoly_modp, companion, factor_modp, hensel_factor_lift,
                       mat_identity, mat_inv_modp, mat_kernel_modp, mat_mul_modp,
                       mat_pow_order, mat_vec_modp, order_of_x, pdivmod, pgcd, pmod,
                       resultant_int, squarefree_decomposition)
from .util import rng_for
from .zq import ZqElem, make_ring, rational_reconstruct

log = logging.getLogger("galrep.galois")


class ReprTask:
    """One computation: curve, ell, chi mod ell, p, accuracy target, seed."""

    def __init__(self, curve, ell, p, chi, e0, seed=0, a=None, L_p=None,
                 compute_G=False):
        self.curve = curve
        self.ell = ell
        self.p = p
        self.chi = pmod(list(chi), ell)
        self.e0 = e0
        self.seed = seed
        self.a = a
        self.L_p = L_p
        self.compute_G = compute_G
        if ell == p:
            raise ConfigError("ell must differ from p")

    def lpoly(self):
        if self.L_p is None:
            if self.curve.hyperelliptic is None and not (
                    self.curve.plane_quartic or self.curve.f.deg_total() <= 4):
                raise ConfigError("no L_p given and the model is not countable")
            self.L_p = zeta_numerator(self.curve, self.p).Lp
        else:
            self.L_p = normalize_lpoly(self.L_p, self.p, self.curve.genus)
        Lbar = pmod(self.L_p, self.ell)
        q, r = pdivmod(Lbar, self.chi, self.ell)
        if r:
            raise ConfigError("chi does not divide L_p mod ell")
        if pgcd(self.chi, q, self.ell) != [1]:
            raise ConfigError("chi is not coprime to its cofactor mod ell; "
                              "choose a different p")
        return self.L_p

    @classmethod
    def from_json(cls, data, curve):
        return cls(curve, int(data["l"]), int(data["p"]),
                   [int(c) for c in data["chi"]], int(data["e0"]),
                   seed=int(data.get("seed", 0)),
                   a=int(data["a"]) if "a" in data else None,
                   L_p=[int(c) for c in data["L_p"]] if "L_p" in data else None,
                   compute_G=bool(data.get("compute_G", False)))


def frobenius_order(chi, ell):
    """(order or bound, is_exact) for the matrix with characteristic
    polynomial chi mod ell: lcm of the orders of x modulo the irreducible
    factors, times ell^u with u bounded by the factor multiplicities."""
    rng = rng_for(0, "froborder")
    facs = factor_modp(chi, ell, rng)
    base = 1
    umax = 0
    for g, e in facs:
        base = lcm(base, order_of_x(g, ell))
        u = 0
        while ell ** u < e:
            u += 1
        umax = max(umax, u)
    if umax == 0:
        return base, True
    return base * ell ** umax, False


def jacobian_order(L_p, a, ell):
    """#J(F_{p^a}) = Res(L_p, x^a - 1), split as ell^v * M."""
    xa = [0] * (a + 1)
    xa[0] = -1
    xa[a] = 1
    N = abs(resultant_int(L_p, xa))
    v = 0
    M = N
    while M % ell == 0:
        M //= ell
        v += 1
    return N, v, M


def choose_a_candidates(task, bound, exact):
    """Working-degree candidates, smallest first.

    When Prop 5.1 only gives a bound, the candidates are base * ell^u, probed
    upward; the cheap ell-valuation filter on #J(F_{p^a}) removes degrees that
    cannot contain the torsion, and a budgeted basis search settles the rest.
    mu_ell in F_q is enforced throughout."""
    if task.a is not None:
        return [task.a]
    L_p = task.lpoly()
    d = len(task.chi) - 1
    if exact:
        candidates = [bound]
    else:
        base = bound
        while base % task.ell == 0:
            base //= task.ell
        candidates = []
        c = base
        while c <= bound:
            candidates.append(c)
            c *= task.ell
    out = []
    for a in candidates:
        if (task.p ** a - 1) % task.ell != 0:
            continue
        _, v, _ = jacobian_order(L_p, a, task.ell)
        if v >= d:
            out.append(a)
    if not out:
        raise ConfigError("mu_%d not in F_{p^a} for any admissible a; the "
                          "linearized pairing is unavailable, choose a "
                          "different p" % task.ell)
    return out


# ---------------------------------------------------------------------------
# torsion basis (randomized generation + pairing-certified independence)

class TorsionBasis:
    def __init__(self, points, zs, gram, frob_mat=None, orders=None):
        self.points = points     # d JacPoints at e = 1
        self.zs = zs             # auxiliary random classes used by the forms
        self.gram = gram         # pairing matrix rows: [y_j, z_i]_ell
        self.frob_mat = frob_mat
        self.orders = orders


def torsion_space_basis(ctx1, pc, task, N, v, M, rng, budget=None):
    """d independent points of the chi-isotypic part of J(F_q)[ell] (the
    randomized generation with pairing-based relation detection, relation
    division, and Frobenius acceleration)."""
    ell = task.ell
    d = len(task.chi) - 1
    L_p = task.lpoly()
    Lbar = pmod(L_p, ell)
    psibar = pdivmod(Lbar, task.chi, ell)[0]
    if v == 0:
        raise ConfigError("no ell-torsion over F_q (v = 0)")
    _, psi_t = hensel_factor_lift(L_p, task.chi, psibar, ell, v)
    budget = budget if budget is not None else 40 * d + 60

    xs, ys, orders = [], [], []
    zs = []
    gram = []    # gram[i][j] = [ys[j], zs[i]]_ell
    pending = []
    draws = 0

    def new_z():
        z = random_point(ctx1, rng)
        zs.append(z)
        gram.append([frey_ruck_linearized(pc, y.W, z.W, rng) for y in ys])

    def project():
        nonlocal draws
        while True:
            draws += 1
            if draws > budget:
                raise GenerationStalled("torsion generation budget exceeded")
            x = random_point(ctx1, rng)
            x = poly_frob(x, psi_t, rng)
            x = scalar_mul(x, M, rng)
            if not is_zero_point(x):
                return x

    def order_split(x):
        y = x
        o = 0
        while True:
            z = scalar_mul(y, ell, rng)
            if is_zero_point(z):
                return y, o
            y = z
            o += 1

    def poly_frob(x, coeffs, rng):
        acc = None
        y = x
        for k, c in enumerate(coeffs):
            if k:
                y = frobenius_point(y)
            if c % (ell ** v):
                term = scalar_mul(y, c % (ell ** v), rng)
                acc = term if acc is None else add_points(acc, term, rng)
        return acc if acc is not None else zero_point(ctx1)

    while len(ys) < d:
        if pending:
            x, y, o = pending.pop(0)
        else:
            x = project()
            y, o = order_split(x)
        r = len(ys) + 1
        if r == 1:
            xs.append(x); ys.append(y); orders.append(o)
            pending.append((frobenius_point(x), frobenius_point(y), o))
            continue
        # relation detection through incrementally grown linear forms
        while len(zs) < r:
            new_z()
        col = [frey_ruck_linearized(pc, y.W, z.W, rng) for z in zs]
        accepted = None
        while accepted is None:
            P = [grow + [cv] for grow, cv in zip(gram, col)]
            R = mat_kernel_modp(P, ell)
            if len(R) >= 2:
                new_z()
                col.append(frey_ruck_linearized(pc, y.W, zs[-1].W, rng))
                continue
            if not R:
                accepted = True
                break
            lam = R[0]
            cand = None
            for coeffs, pt in zip(lam, ys + [y]):
                if coeffs % ell:
                    t = scalar_mul(pt, coeffs % ell, rng)
                    cand = t if cand is None else add_points(cand, t, rng)
            if not is_zero_point(cand):
                accepted = True   # false positive; treat as independent
                break
            # genuine relation: divide it by ell if every order allows
            I = [i for i, c in enumerate(lam) if c % ell]
            osel = [orders[i] if i < len(ys) else o for i in I]
            mu = min(osel)
            if mu < 1:
                accepted = False  # give up this point
                break
            acc = None
            for i in I:
                src = xs[i] if i < len(ys) else x
                oi = orders[i] if i < len(ys) else o
                t = scalar_mul(src, (lam[i] % ell) * ell ** (oi - mu), rng)
                acc = t if acc is None else add_points(acc, t, rng)
            if is_zero_point(acc):
                accepted = False
                break
            x = acc
            y, o = order_split(x)
            col = [frey_ruck_linearized(pc, y.W, z.W, rng) for z in zs]
        if accepted:
            xs.append(x); ys.append(y); orders.append(o)
            for i, z in enumerate(zs):
                gram[i].append(col[i])
            pending.append((frobenius_point(x), frobenius_point(y), o))
    # make sure the certificate has full rank d
    while _gram_rank(gram, ell) < d:
        new_z()
    basis = TorsionBasis(ys, zs, [row[:] for row in gram], orders=orders)
    return basis


def _gram_rank(gram, ell):
    if not gram:
        return 0
    from .polyring import mat_rank_modp
    return mat_rank_modp(gram, ell)


def frobenius_matrix(pc, basis, chi, ell, rng):
    """Matrix of Phi on the basis, solved through the pairing forms; its
    characteristic polynomial must be chi mod ell."""
    d = len(basis.points)
    from .polyring import mat_solve_modp
    cols = []
    for y in basis.points:
        w = frobenius_point(y)
        b = [frey_ruck_linearized(pc, w.W, z.W, rng) for z in basis.zs]
        sol = mat_solve_modp([row[:] for row in basis.gram], b, ell)
        if sol is None:
            raise PairingFailure("Frobenius image not expressible in the basis")
        cols.append(sol)
    Mfrob = [[cols[j][i] for j in range(d)] for i in range(d)]
    if charpoly_modp(Mfrob, ell) != pmod(chi, ell):
        raise GenerationStalled("Frobenius matrix has the wrong characteristic "
                                "polynomial; basis certification failed")
    basis.frob_mat = Mfrob
    return Mfrob


def orbit_representatives(frob_mat, ell, d):
    """Partition of F_ell^d minus 0 into orbits of v -> frob_mat v; one
    (lexicographically minimal) representative per orbit."""
    seen = set()
    orbits = []
    def enc(v):
        return tuple(v)
    from itertools import product
    for vec in product(range(ell), repeat=d):
        if not any(vec) or vec in seen:
            continue
        orbit = []
        v = list(vec)
        while tuple(v) not in seen:
            seen.add(tuple(v))
            orbit.append(tuple(v))
            v = mat_vec_modp(frob_mat, v, ell)
        orbits.append((vec, orbit))
    return orbits


def orbit_lengths_from_charpoly(chi_r, ell, d):
    """Orbit-length multiset of any matrix with squarefree characteristic
    polynomial chi_r mod ell, or None when the class is not pinned."""
    chi_r = pmod(list(chi_r), ell)
    parts = squarefree_decomposition(chi_r, ell)
    if any(e > 1 for _, e in parts):
        return None
    M = companion(chi_r, ell)
    return sorted(len(orbit) for _, orbit in orbit_representatives(M, ell, d))


# ---------------------------------------------------------------------------
# the full computation

class ReprResult:
    def __init__(self, F, labels, G=None, metadata=None):
        self.F = F               # Fraction coefficients, ascending, monic
        self.labels = labels     # {vector tuple: ZqElem}
        self.G = G
        self.metadata = metadata or {}

    def to_json(self):
        out = {
            "F": ["%d/%d" % (c.numerator, c.denominator) for c in self.F],
            "labels": [[list(v), val.to_json()] for v, val in sorted(self.labels.items())],
            "metadata": self.metadata,
        }
        if self.G is not None:
            out["G"] = ["%d/%d" % (c.numerator, c.denominator) for c in self.G]
        return out


class Pipeline:
    """Stages of compute_representation, resumable at higher accuracy."""

    def __init__(self, task):
        self.task = task
        self.L_p = task.lpoly()
        bound, exact = frobenius_order(task.chi, task.ell)
        self.a_candidates = choose_a_candidates(task, bound, exact)
        self._set_a(self.a_candidates[0])
        self.d = len(task.chi) - 1
        self.e_top = task.e0 + (task.e0 & 1)
        self.ctx = None
        self.basis = None
        self.frob_mat = None
        self.lift_info = None    # (point at e_top, coordinate vector) pairs

    def _set_a(self, a):
        self.a = a
        self.N, self.v, self.M = jacobian_order(self.L_p, a, self.task.ell)
        if self.v == 0:
            raise ConfigError("no ell-torsion over F_q")

    def build_context(self):
        task = self.task
        ring = make_ring(task.p, self.a, self.e_top, seed=task.seed)
        self.ctx = init_context(task.curve, ring, task.seed)
        return self.ctx

    def find_basis(self):
        """Torsion basis over F_q; when the Frobenius order was only bounded,
        smaller candidate degrees get a budgeted try before moving up."""
        task = self.task
        remaining = self.a_candidates[self.a_candidates.index(self.a):]
        for pos, a in enumerate(remaining):
            last = pos == len(remaining) - 1
            if a != self.a:
                self._set_a(a)
                self.build_context()
            ctx1 = self.ctx.at(1)
            rng = rng_for(task.seed, "basis")
            pc = PairingContext(ctx1, task.ell, rng)
            try:
                basis = torsion_space_basis(ctx1, pc, task, self.N, self.v,
                                            self.M, rng,
                                            budget=None if last else 12 * self.d + 20)
            except GenerationStalled:
                if last:
                    raise
                continue
            self.pc = pc
            self.basis = basis
            self.frob_mat = frobenius_matrix(pc, basis, task.chi, task.ell, rng)
            return basis
        raise GenerationStalled("no candidate degree produced a basis")

    def _translate_plan(self):
        """List of (generator index j, Frobenius power k) whose vectors
        Phi^k e_j form a basis of F_ell^d, preferring deep translates of few
        generators (each extra generator costs a full lifting ladder)."""
        from .polyring import mat_rank_modp
        ell, d = self.task.ell, self.d
        plan = []
        vecs = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            k = 0
            v = e
            while len(plan) < d:
                if mat_rank_modp(vecs + [v], ell) > len(plan):
                    plan.append((j, k))
                    vecs.append(v)
                    v = mat_vec_modp(self.frob_mat, v, ell)
                    k += 1
                else:
                    break
            if len(plan) == d:
                break
        if len(plan) != d:
            raise GenerationStalled("Phi-translates do not span F_ell^d")
        return plan, vecs

    def lift_basis(self):
        """Lift the needed F_ell[Phi]-generators strictly to e_top, complete
        with Frobenius translates, and solve for the change of basis."""
        task = self.task
        rng = rng_for(task.seed, "lift")
        chart_rng = rng_for(task.seed, "chart")
        chart = build_chart_spec(self.ctx, chart_rng)
        ell, d = task.ell, self.d
        plan, vecs = self._translate_plan()
        lifted_gens = {}
        for j in sorted({j for j, _ in plan}):
            for attempt in range(4):
                try:
                    lifted_gens[j] = lift_torsion(self.basis.points[j], ell,
                                                  self.e_top, chart, rng)
                    break
                except ChartDegenerate:
                    chart = build_chart_spec(self.ctx, chart_rng)
            else:
                raise ChartDegenerate("charts kept degenerating")
        family = []
        for (j, k), vec in zip(plan, vecs):
            pt = lifted_gens[j]
            for _ in range(k):
                pt = frobenius_point(pt)
            family.append((pt, vec))
        self.lift_info = family
        cob = [[family[k][1][i] for k in range(d)] for i in range(d)]
        self.cob_inv = mat_inv_modp(cob, ell)
        return family

    def point_for_vector(self, vec, rng):
        """A JacPoint at e_top representing the vector (original basis
        coordinates) via the lifted family."""
        ell = self.task.ell
        coeffs = mat_vec_modp(self.cob_inv, list(vec), ell)
        acc = None
        for c, (pt, _) in zip(coeffs, self.lift_info):
            if c % ell:
                t = scalar_mul(pt, c % ell, rng)
                acc = t if acc is None else add_points(acc, t, rng)
        return acc if acc is not None else zero_point(self.ctx)

    def evaluate_all(self, max_redraws=6):
        """alpha at one representative per orbit, propagated along orbits by
        Phi; collisions redraw the evaluation data only."""
        task = self.task
        ell, d = task.ell, self.d
        ctx = self.ctx
        ring = ctx.ring
        rng = rng_for(task.seed, "eval")
        orbits = orbit_representatives(self.frob_mat, ell, d)
        # representative points are expensive; compute them once and cache any
        # extra orbit members needed after evaluation failures
        rep_pts = {}
        for vec, orbit in orbits:
            rep_pts[vec] = self.point_for_vector(vec, rng)
        for redraw in range(max_redraws):
            espec = build_eval_spec(ctx, rng_for(task.seed, "espec", redraw),
                                    skip_pairs=redraw)
            labels = {}
            failed = False
            for vec, orbit in orbits:
                val = None
                shift = None
                for s, w in enumerate(orbit):
                    if w not in rep_pts:
                        rep_pts[w] = self.point_for_vector(w, rng)
                    try:
                        val = eval_point(ctx, espec, rep_pts[w], rng)
                        shift = s
                        break
                    except EvalFail:
                        continue
                if val is None:
                    failed = True
                    break
                # propagate along the orbit from the successful member
                n = len(orbit)
                for t in range(n):
                    labels[orbit[(shift + t) % n]] = val
                    val = ring.frob(val)
            if failed:
                continue
            if len(set(labels.values())) == ell ** d - 1:
                self.labels_raw = labels
                self.espec = espec
                return labels
        raise CollisionPersistent("evaluated values keep colliding")

    def assemble(self, e_out=None):
        """F(x) = prod (x - alpha(t)) at accuracy e_out, reconstructed over Q."""
        task = self.task
        e_out = e_out or task.e0
        ring = self.ctx.ring.with_accuracy(e_out)
        red = self.ctx.ring.reduce_elem
        vals = {v: red(x, ring) for v, x in self.labels_raw.items()}
        F = _product_poly(ring, list(vals.values()))
        Fq = _reconstruct_poly(ring, F, task.p, e_out)
        from .polyring import is_squarefree_q
        if not is_squarefree_q(list(Fq)):
            raise CollisionPersistent("F is not squarefree over Q")
        G = None
        if task.compute_G:
            lines = {}
            for v, x in vals.items():
                rep = _line_rep(v, task.ell)
                lines.setdefault(rep, []).append(x)
            prods = []
            for rep, xs in sorted(lines.items()):
                acc = ring.one
                for x in xs:
                    acc = ring.mul(acc, x)
                prods.append(acc)
            Gp = _product_poly(ring, prods)
            G = _reconstruct_poly(ring, Gp, task.p, e_out)
        labels = {v: ZqElem(ring, x) for v, x in vals.items()}
        meta = {
            "curve": task.curve.name,
            "l": task.ell,
            "p": task.p,
            "a": self.a,
            "e0": e_out,
            "seed": task.seed,
            "chi": list(task.chi),
            "L_p": list(self.L_p),
            "ring": self.ctx.ring.with_accuracy(e_out).to_json(),
            "frob_mat": self.frob_mat,
            "eval_indices": [self.espec.i1, self.espec.i2],
            "N": str(self.N),
        }
        return ReprResult(list(Fq), labels, G=list(G) if G else None, metadata=meta)


def _product_poly(ring, roots):
    poly = [ring.one]
    for r in roots:
        nxt = [ring.zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = ring.add(nxt[i + 1], c)
            nxt[i] = ring.sub(nxt[i], ring.mul(c, r))
        poly = nxt
    return poly


def _reconstruct_poly(ring, coeffs, p, e_out):
    out = []
    modulus = p ** e_out
    for c in coeffs:
        digs = ring.digits(c)
        if any(d for d in digs[1:]):
            raise NoReconstruction("coefficient not Galois-invariant; "
                                   "the labeling is inconsistent")
        out.append(rational_reconstruct(digs[0], modulus))
    return out


def _line_rep(v, ell):
    """Representative of the F_ell-line through v: first nonzero coord = 1."""
    for c in v:
        if c % ell:
            inv = pow(c, -1, ell)
            return tuple(x * inv % ell for x in v)
    raise ValueError("zero vector has no line")


def compute_representation(task):
    """End-to-end computation of ReprResult for a task."""
    pipe = Pipeline(task)
    pipe.build_context()
    pipe.find_basis()
    pipe.lift_basis()
    pipe.evaluate_all()
    return pipe.assemble()
