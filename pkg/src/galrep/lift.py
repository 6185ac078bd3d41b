"""Quadratic p-adic lifting of Jacobian points and of m-torsion points.

lift_once deforms a point matrix from accuracy e to 2e by solving the
linearized rank criterion on the expanded membership matrix K(W): split
K = (A B; C D) with A unit-invertible, require D - C A^-1 B = 0 mod p^2e,
and express the deformation directions through the rigid equation-matrix
perturbation identity.  Torsion lifts then follow either by killing the
kernel of reduction with a multiplication, or through a coordinate chart
at the origin.
"""

import math

from .errors import ChartDegenerate, LiftFailure
from .evalmap import chart_coords
from .jacobian import JacPoint, is_zero_point, scalar_mul
from .linalg import MatZq, eqn_complement, howell_kernel, invert, kernel_basis

CHART_RETRIES = 4


def _full_pivot(Mp, r):
    """Greedy (rows, cols) so the leading r x r block of the permuted matrix
    is invertible mod p; returns (row_order, col_order) covering all indices."""
    ring1 = Mp.ring
    nrows, ncols = Mp.nrows, Mp.ncols
    sel_rows, sel_cols = [], []
    basis = []   # (pivot_col, echelonized row)
    for i in range(nrows):
        if len(sel_rows) == r:
            break
        row = list(Mp.rows[i])
        for pc, brow in basis:
            c = row[pc]
            if c:
                row = [ring1.sub(x, ring1.mul(c, y)) for x, y in zip(row, brow)]
        pc = next((j for j in range(ncols) if j not in sel_cols and row[j]), None)
        if pc is None:
            continue
        inv = ring1.inv(row[pc])
        basis.append((pc, [ring1.mul(inv, x) for x in row]))
        sel_rows.append(i)
        sel_cols.append(pc)
    if len(sel_rows) < r:
        raise LiftFailure("K matrix has rank < %d mod p; input is not a point" % r)
    row_order = sel_rows + [i for i in range(nrows) if i not in sel_rows]
    col_order = sel_cols + [j for j in range(ncols) if j not in set(sel_cols)]
    return row_order, col_order


def lift_once(x, count, rng):
    """`count` random lifts of x from accuracy e to 2e, all of the form
    W~ + p^e V0 H over the affine solution set of the deformation system."""
    ctx = x.ctx
    e = x.acc
    ctx2 = ctx.at(2 * e)
    ring2 = ctx2.ring
    ringe = ctx.ring
    n = ctx.n_z
    d_w, d0, dimV = ctx.d_w, ctx.d0, ctx.dimV
    r = n - d_w

    # lift W so that it still represents a subspace of V
    K = kernel_basis(x.W.hstack(ctx.M_V))
    if K.ncols != d_w:
        raise LiftFailure("V-membership kernel has %d columns" % K.ncols)
    U = K.take_rows(range(d_w, d_w + dimV)).lift_to(ring2)
    Wt = ctx2.M_V.mul(U)

    # spend only the tangent directions fixing the rows indexed by I
    from .linalg import unit_pivot_rows
    I = unit_pivot_rows(x.W)
    U0 = kernel_basis(ctx2.M_V.take_rows(I))
    if U0.ncols != d0:
        raise LiftFailure("V0 has %d columns, expected d0" % U0.ncols)
    V0 = ctx2.M_V.mul(U0)

    wcols = Wt.cols()
    rig = eqn_complement(ctx2.M_V.scale_rows(wcols[0]))
    E, F = rig.E, rig.F
    blocks = [ctx2.K_V] + [E.scale_cols(wcols[m]) for m in range(1, d_w)]
    Kmat = blocks[0]
    for b in blocks[1:]:
        Kmat = Kmat.vstack(b)
    rk = Kmat.nrows

    row_order, col_order = _full_pivot(Kmat.mod_p(), r)
    Kp = Kmat.take_rows(row_order).take_cols(col_order)
    A = Kp.take_rows(range(r)).take_cols(range(r))
    B = Kp.take_rows(range(r)).take_cols(range(r, n))
    C = Kp.take_rows(range(r, rk)).take_cols(range(r))
    D = Kp.take_rows(range(r, rk)).take_cols(range(r, n))
    Ainv = invert(A)
    X = Ainv.mul(B)                      # r x (n - r)
    Y = C.mul(Ainv)                      # (rk - r) x r
    resid2 = D.sub(C.mul(X))
    R = _exact_shift_down(resid2, ringe, e)
    if R is None:
        raise LiftFailure("D - C A^-1 B is not 0 mod p^e; input is not a point")

    # deformation responses r_{i,j} at accuracy e
    Ee = E.reduce_to(ringe)
    Fe = F.reduce_to(ringe)
    Xe = X.reduce_to(ringe)
    Ye = Y.reduce_to(ringe)
    G = ctx.M_V.mul(Fe)                  # n x n
    Fm = [G.scale_cols([ringe.neg(ring2.reduce_elem(t, ringe)) for t in wcols[m]])
          for m in range(1, d_w)]
    V0e = V0.reduce_to(ringe)
    nblocks = d_w - 1
    blk = Ee.nrows
    zero_block = MatZq.zeros(ringe, ctx2.K_V.nrows, n)

    responses = []
    for i in range(d0):
        vi = V0e.col(i)
        Ei = Ee.scale_cols(vi)
        for j in range(d_w):
            if j == 0:
                sub_blocks = [zero_block] + [Ei.mul(Fm[m]) for m in range(nblocks)]
            else:
                sub_blocks = [zero_block] + \
                    [Ei if m == j - 1 else MatZq.zeros(ringe, blk, n)
                     for m in range(nblocks)]
            k = sub_blocks[0]
            for b in sub_blocks[1:]:
                k = k.vstack(b)
            kp = k.take_rows(row_order).take_cols(col_order)
            a = kp.take_rows(range(r)).take_cols(range(r))
            b_ = kp.take_rows(range(r)).take_cols(range(r, n))
            c = kp.take_rows(range(r, rk)).take_cols(range(r))
            d = kp.take_rows(range(r, rk)).take_cols(range(r, n))
            rij = d.sub(c.mul(Xe)).add(Ye.mul(a.mul(Xe))).sub(Ye.mul(b_))
            responses.append(rij)

    sols = _solve_redundant(ringe, R, responses, count, rng)

    out = []
    for h in sols:
        H = MatZq(ring2, d0, d_w,
                  [[ring2.pmul(ringe.lift_elem(h[i * d_w + j], ring2), e)
                    for j in range(d_w)] for i in range(d0)])
        Wn = Wt.add(V0.mul(H))
        out.append(JacPoint(ctx2, Wn))
    return out


def _exact_shift_down(M, ringe, e):
    """Entries of M divided by p^e, reduced into the accuracy-e ring;
    None when some entry is not divisible."""
    ring2 = M.ring
    pk = ring2.p ** e
    rows = []
    for row in M.rows:
        out = []
        for v in row:
            digs = ring2.digits(v)
            if any(d % pk for d in digs):
                return None
            out.append(ringe.pack([d // pk for d in digs]))
        rows.append(out)
    return MatZq(ringe, M.nrows, M.ncols, rows)


def _flatten(M):
    return [v for row in M.rows for v in row]


def _solve_redundant(ringe, R, responses, count, rng):
    """Solve R + sum h_u r_u = 0 over Z_q/p^e by random equation combining,
    verify on the full system, escalate to the full solve on failure."""
    u = len(responses)
    rvecs = [_flatten(m) for m in responses]
    rhsvec = [ringe.neg(v) for v in _flatten(R)]
    neq = len(rhsvec)

    def combo_system(ncomb):
        grows = []
        rrows = []
        for _ in range(ncomb):
            phi = [ringe.rand_small(rng) for _ in range(neq)]
            grows.append([ringe.dot(phi, rv) for rv in rvecs])
            rrows.append(ringe.dot(phi, rhsvec))
        return MatZq(ringe, ncomb, u, grows), rrows

    def verify(h):
        for t in range(neq):
            acc = ringe.red(sum(h[k] * rvecs[k][t] for k in range(u)))
            if acc != rhsvec[t]:
                return False
        return True

    h0 = None
    for attempt in range(2):
        G, rhs = combo_system(2 * u)
        cand = _solve_affine(ringe, G, rhs)
        if cand is not None and verify(cand):
            h0 = cand
            break
    if h0 is None:
        Gf = MatZq(ringe, neq, u, [[rv[t] for rv in rvecs] for t in range(neq)])
        h0 = _solve_affine(ringe, Gf, rhsvec)
        if h0 is None:
            raise LiftFailure("deformation system is inconsistent")
    if count == 1:
        return [h0]
    # random solutions need the exact homogeneous kernel (reduced-system
    # kernels mix in spurious directions), so solve the full system for it
    Gf = MatZq(ringe, neq, u, [[rv[t] for rv in rvecs] for t in range(neq)])
    kerG = howell_kernel(Gf).all_gens
    dirs = [kerG.col(j) for j in range(kerG.ncols)]
    return _draw_solutions(ringe, h0, dirs, count, rng)


def _draw_solutions(ringe, h0, dirs, count, rng):
    out = [h0]
    for _ in range(count - 1):
        h = list(h0)
        for dvec in dirs:
            c = ringe.rand_elem(rng)
            h = [ringe.add(a, ringe.mul(c, b)) for a, b in zip(h, dvec)]
        out.append(h)
    return out


def _solve_affine(ringe, G, rhs):
    """One solution of G h = rhs over the chain ring, or None."""
    aug = G.hstack(MatZq.from_cols(ringe, [[ringe.neg(v) for v in rhs]],
                                   nrows=G.nrows))
    gens = howell_kernel(aug).all_gens
    u = G.ncols
    for j in range(gens.ncols):
        col = gens.col(j)
        t = col[u]
        if ringe.is_unit(t):
            inv = ringe.inv(t)
            return [ringe.mul(inv, v) for v in col[:u]]
    return None


# ---------------------------------------------------------------------------
# torsion lifting

def lift_torsion_mul(x, m, rng, rescale_ok=False):
    """One doubling step e -> 2e of the m-torsion lift by multiplication:
    one plain lift, then [N] with p^e | N; N = 1 mod m in strict mode."""
    e = x.acc
    lifted = lift_once(x, 1, rng)[0]
    p = x.ctx.ring.p
    pe = p ** e
    if rescale_ok:
        N = pe
    else:
        N = pe * pow(pe, -1, m)
    return scalar_mul(lifted, N, rng)


def lift_torsion_chart(x, m, spec, rng):
    """One doubling step e -> 2e of the m-torsion lift through the chart:
    g+1 random lifts, chart displacements of their [m]-images, and the
    affine combination killing the displacement."""
    ctx = x.ctx
    g = ctx.g
    e = x.acc
    ctx2 = ctx.at(2 * e)
    ring2 = ctx2.ring
    ringe = ctx.ring
    _, _, c0 = spec.at(2 * e)
    for attempt in range(CHART_RETRIES):
        lifts = lift_once(x, g + 1, rng)
        kappas = []
        for L in lifts:
            mx = scalar_mul(L, m, rng)
            ci = chart_coords(ctx2, spec, mx, rng)
            kap = []
            ok = True
            pk = ring2.p ** e
            for a, b in zip(ci, c0):
                digs = ring2.digits(ring2.sub(a, b))
                if any(dd % pk for dd in digs):
                    ok = False
                    break
                kap.append(ringe.pack([dd // pk for dd in digs]))
            if not ok:
                break
            kappas.append(kap)
        if len(kappas) != g + 1:
            continue
        Km = MatZq.from_cols(ringe, kappas, nrows=len(kappas[0]))
        ker = howell_kernel(Km).good
        if ker.ncols != 1:
            # the relation space must be a line; retry with fresh lifts and
            # give the chart up for degenerate if that never happens
            if attempt == CHART_RETRIES - 1:
                raise ChartDegenerate("chart relation space has dimension %d"
                                      % ker.ncols)
            continue
        lam = ker.col(0)
        s = ringe.red(sum(lam))
        if not ringe.is_unit(s):
            continue
        inv = ringe.inv(s)
        lam = [ringe.mul(inv, v) for v in lam]
        lam2 = [ringe.lift_elem(v, ring2) for v in lam]
        total = ring2.red(sum(lam2))
        lam2[0] = ring2.add(lam2[0], ring2.sub(ring2.one, total))
        W = None
        for li, lv in zip(lifts, lam2):
            term = li.W.scale(lv)
            W = term if W is None else W.add(term)
        cand = JacPoint(ctx2, W)
        if is_zero_point(scalar_mul(cand, m, rng)):
            return cand
        raise ChartDegenerate("combined lift is not m-torsion; chart not immersive")
    raise ChartDegenerate("chart lifting failed after %d rounds" % CHART_RETRIES)


def lift_torsion(x, m, e0, spec, rng, rescale_ok=False):
    """Doubling ladder to accuracy e0, multiplication method while
    e <= g log m / log p and the chart method beyond."""
    ctx = x.ctx
    threshold = ctx.g * math.log(m) / math.log(ctx.ring.p)
    cur = x
    while cur.acc < e0:
        t = min(2 * cur.acc, e0)
        s = (t + 1) // 2
        if s < cur.acc:
            cur = cur.reduce(s)
        if cur.acc <= threshold:
            cur = lift_torsion_mul(cur, m, rng, rescale_ok=rescale_ok)
        else:
            cur = lift_torsion_chart(cur, m, spec, rng)
        if cur.acc > t:
            cur = cur.reduce(t)
    if cur.acc > e0:
        cur = cur.reduce(e0)
    return cur
