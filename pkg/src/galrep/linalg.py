"""Exact linear algebra over Z_q/p^e.

Column spans throughout: a module is given by the column span of a matrix
(the classical Howell references use row spans; everything here is the
transpose of that convention).  Kernels are computed by column elimination
with p-power saturation, which preserves accuracy on good-reduction input
per the chain-ring kernel theorem.
"""

from .errors import RankDeficient, ShapeMismatch


class MatZq:
    """Dense matrix over a ZqRing; entries are packed ring values, row-major."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, nrows, ncols, rows):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring, n):
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = ring.one
        return cls(ring, n, n, rows)

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def from_cols(cls, ring, cols, nrows=None):
        if not cols:
            return cls(ring, nrows or 0, 0, [[] for _ in range(nrows or 0)])
        nrows = len(cols[0])
        return cls(ring, nrows, len(cols), [[c[i] for c in cols] for i in range(nrows)])

    def copy(self):
        return MatZq(self.ring, self.nrows, self.ncols, [list(r) for r in self.rows])

    def col(self, j):
        return [r[j] for r in self.rows]

    def cols(self):
        return [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)]

    def transpose(self):
        return MatZq.from_cols(self.ring, [list(r) for r in self.rows], nrows=self.ncols)

    def mul(self, other):
        if self.ncols != other.nrows or self.ring != other.ring:
            raise ShapeMismatch("matmul %dx%d by %dx%d" % (self.nrows, self.ncols,
                                                           other.nrows, other.ncols))
        ring = self.ring
        red = ring.red
        if self.ncols == 0:
            return MatZq.zeros(ring, self.nrows, other.ncols)
        bt = list(zip(*other.rows))
        if self.ncols <= 512:
            out = [[red(sum(map(int.__mul__, row, col))) for col in bt] for row in self.rows]
        else:
            dot = ring.dot
            out = [[dot(row, col) for col in bt] for row in self.rows]
        return MatZq(ring, self.nrows, other.ncols, out)

    __matmul__ = mul

    def mul_vec(self, vec):
        ring = self.ring
        return [ring.dot(row, vec) for row in self.rows]

    def add(self, other):
        a = self.ring.add
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[a(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def sub(self, other):
        s = self.ring.sub
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[s(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c):
        m = self.ring.mul
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[m(c, x) for x in r] for r in self.rows])

    def scale_rows(self, cvec):
        """Delta_c * M: multiply row i by cvec[i]."""
        m = self.ring.mul
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[m(c, x) for x in row] for c, row in zip(cvec, self.rows)])

    def scale_cols(self, cvec):
        """M * Delta_c: multiply column j by cvec[j]."""
        m = self.ring.mul
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[m(c, x) for c, x in zip(cvec, row)] for row in self.rows])

    def hstack(self, other):
        assert self.nrows == other.nrows
        return MatZq(self.ring, self.nrows, self.ncols + other.ncols,
                     [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def vstack(self, other):
        assert self.ncols == other.ncols
        return MatZq(self.ring, self.nrows + other.nrows, self.ncols,
                     [list(r) for r in self.rows] + [list(r) for r in other.rows])

    def take_rows(self, idx):
        return MatZq(self.ring, len(idx), self.ncols, [list(self.rows[i]) for i in idx])

    def take_cols(self, idx):
        return MatZq(self.ring, self.nrows, len(idx),
                     [[r[j] for j in idx] for r in self.rows])

    def reduce_to(self, ring2):
        if ring2 == self.ring:
            return self
        red = self.ring.reduce_elem
        return MatZq(ring2, self.nrows, self.ncols,
                     [[red(x, ring2) for x in r] for r in self.rows])

    def lift_to(self, ring2):
        lift = self.ring.lift_elem
        return MatZq(ring2, self.nrows, self.ncols,
                     [[lift(x, ring2) for x in r] for r in self.rows])

    def mod_p(self):
        return self.reduce_to(self.ring.with_accuracy(1))

    def frob_entries(self):
        f = self.ring.frob
        return MatZq(self.ring, self.nrows, self.ncols,
                     [[f(x) for x in r] for r in self.rows])

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def __eq__(self, other):
        return (isinstance(other, MatZq) and self.ring == other.ring and
                self.rows == other.rows and self.ncols == other.ncols)

    def __repr__(self):
        return f"MatZq({self.nrows}x{self.ncols} over {self.ring!r})"

    def to_json(self):
        dig = self.ring.digits
        return {"shape": [self.nrows, self.ncols],
                "entries": [[[str(d) for d in dig(x)] for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, ring, data):
        nrows, ncols = data["shape"]
        rows = [[ring.pack([int(s) for s in ent]) for ent in row] for row in data["entries"]]
        return cls(ring, nrows, ncols, rows)


class KernelBasis:
    """Howell kernel: canonical generators, the good-reduction subset, a flag."""

    __slots__ = ("good", "all_gens", "discarded")

    def __init__(self, good, all_gens, discarded):
        self.good = good
        self.all_gens = all_gens
        self.discarded = discarded


def _mod_pk(ring, x, k):
    pk = ring.p ** k
    return ring.pack([d % pk for d in ring.digits(x)])


def _col_axpy(ring, dst, q, src):
    # dst -= q * src, entrywise, canonical output
    red = ring.red
    pad = ring._subpad
    out = []
    for d, s in zip(dst, src):
        out.append(red(d + pad - red(q * s)) if s else d)
    return out


def _eliminate(ring, cols, nrows_top, keep_len):
    """Column elimination with saturation on the first nrows_top coordinates.

    cols: list of columns (lists of packed values, length >= nrows_top).
    Returns (pivots, leftovers): pivots are (row, valuation, column) with the
    pivot entry normalized to p^v; leftovers have all top coordinates zero.
    """
    e = ring.e
    work = [list(c) for c in cols]
    pivots = []
    for r in range(nrows_top):
        best = None
        best_v = e
        for c in work:
            t = c[r]
            if t:
                v = ring.val(t)
                if v < best_v:
                    best_v = v
                    best = c
                    if v == 0:
                        break
        if best is None:
            continue
        v = best_v
        work.remove(best)
        u = ring.pdiv_exact(best[r], v)
        ui = ring.inv(u)
        best = [ring.mul(ui, x) for x in best]
        for idx, c in enumerate(work):
            t = c[r]
            if t:
                q = ring.pdiv_exact(t, v)
                work[idx] = _col_axpy(ring, c, q, best)
        pivots.append((r, v, best))
        if 0 < v < e:
            sat = [ring.pmul(x, e - v) for x in best]
            if any(sat):
                work.append(sat)
    leftovers = [c for c in work if any(c)]
    return pivots, leftovers


def howell_canonical_cols(ring, cols, nrows):
    """Canonical Howell basis of the column span (list of columns)."""
    pivots, leftovers = _eliminate(ring, cols, nrows, nrows)
    assert not leftovers, "nonzero column left after full elimination"
    pivots.sort(key=lambda t: t[0])
    # cross-reduce: entries at pivot row r_j of earlier columns mod p^{v_j}
    for j in range(len(pivots)):
        rj, vj, colj = pivots[j]
        pvj = ring.p ** vj
        for i in range(j):
            ri, vi, coli = pivots[i]
            t = coli[rj]
            rem = _mod_pk(ring, t, vj)
            if t != rem:
                q = ring.pdiv_exact(ring.sub(t, rem), vj)
                pivots[i] = (ri, vi, _col_axpy(ring, coli, q, colj))
    return [c for _, _, c in pivots]


def howell_canonical(M):
    """Canonical Howell form of the column span of M (module equality test)."""
    return MatZq.from_cols(M.ring, howell_canonical_cols(M.ring, M.cols(), M.nrows),
                           nrows=M.nrows)


def howell_kernel(A):
    """Howell-form kernel of A: {x : A x = 0 mod p^e}.

    Returns a KernelBasis whose `good` matrix holds the generators that are
    nonzero mod p (the accuracy-preserving basis on good-reduction input) and
    whose flag records whether generators vanishing mod p were discarded.
    """
    ring = A.ring
    m, n = A.nrows, A.ncols
    if n == 0:
        z = MatZq.zeros(ring, n, 0)
        return KernelBasis(z, z, False)
    acols = A.cols() if m else [[] for _ in range(n)]
    aug = []
    for j in range(n):
        bot = [0] * n
        bot[j] = ring.one
        aug.append(acols[j] + bot)
    _, leftovers = _eliminate(ring, aug, m, m)
    gens = [c[m:] for c in leftovers if any(c[m:])]
    gens = howell_canonical_cols(ring, gens, n)
    good = [g for g in gens if _nonzero_mod_p(ring, g)]
    discarded = len(good) < len(gens)
    return KernelBasis(MatZq.from_cols(ring, good, nrows=n),
                       MatZq.from_cols(ring, gens, nrows=n), discarded)


def _nonzero_mod_p(ring, col):
    p = ring.p
    for x in col:
        if x:
            for d in ring.digits(x):
                if d % p:
                    return True
    return False


def kernel_basis(A):
    """Good-reduction kernel columns of A (the usual entry point)."""
    return howell_kernel(A).good


def eqn_matrix(M):
    """Some equation matrix for the column span of M: rows cut out span(M).

    Computed as the transposed kernel of the transpose; rows independent mod p
    when M has good reduction.
    """
    return howell_kernel(M.transpose()).good.transpose()


def unit_pivot_rows(M):
    """Greedy scan of rows in increasing index selecting a row subset that
    makes the corresponding square submatrix invertible mod p.

    Returns the list of selected row indices (length = ncols); depends only
    on M mod p.  Raises RankDeficient when the columns are dependent mod p.
    """
    ring1 = M.ring.with_accuracy(1)
    Mp = M.reduce_to(ring1)
    n, r = M.nrows, M.ncols
    chosen = []
    basis = []   # echelonized chosen rows, with pivot positions
    for i in range(n):
        if len(chosen) == r:
            break
        row = list(Mp.rows[i])
        for pos, brow in basis:
            c = row[pos]
            if c:
                row = [ring1.sub(x, ring1.mul(c, y)) for x, y in zip(row, brow)]
        pos = next((j for j, x in enumerate(row) if ring1.is_unit(x)), None)
        if pos is None:
            continue
        inv = ring1.inv(row[pos])
        row = [ring1.mul(inv, x) for x in row]
        basis.append((pos, row))
        chosen.append(i)
    if len(chosen) < r:
        raise RankDeficient("columns dependent mod p")
    return chosen


def rank_mod_p(M):
    ring1 = M.ring.with_accuracy(1)
    Mp = M.reduce_to(ring1)
    sieve = ModPSieve(M.ring, M.nrows)
    count = 0
    for c in Mp.cols():
        if sieve.add_reduced(c):
            count += 1
    return count


class ModPSieve:
    """Incremental mod-p independence test for full-accuracy columns."""

    def __init__(self, ring, nrows):
        self.ring1 = ring.with_accuracy(1)
        self.ring = ring
        self.nrows = nrows
        self.rows = []   # echelonized columns mod p with pivot index

    def add(self, col):
        red = self.ring.reduce_elem
        return self.add_reduced([red(x, self.ring1) for x in col])

    def add_reduced(self, col):
        r1 = self.ring1
        col = list(col)
        for pos, b in self.rows:
            c = col[pos]
            if c:
                col = [r1.sub(x, r1.mul(c, y)) for x, y in zip(col, b)]
        pos = next((i for i, x in enumerate(col) if x), None)
        if pos is None:
            return False
        inv = r1.inv(col[pos])
        self.rows.append((pos, [r1.mul(inv, x) for x in col]))
        return True


def invert(A):
    """Inverse of a square matrix whose reduction mod p is invertible."""
    ring = A.ring
    n = A.nrows
    if A.ncols != n:
        raise ShapeMismatch("inverse of non-square matrix")
    aug = [list(r1) + list(r2) for r1, r2 in zip(A.rows, MatZq.identity(ring, n).rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if ring.is_unit(aug[i][c])), None)
        if piv is None:
            raise RankDeficient("no unit pivot in column %d" % c)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = ring.inv(aug[c][c])
        aug[c] = [ring.mul(inv, x) for x in aug[c]]
        prow = aug[c]
        for i in range(n):
            if i != c:
                f = aug[i][c]
                if f:
                    red = ring.red
                    pad = ring._subpad
                    aug[i] = [red(x + pad - red(f * y)) for x, y in zip(aug[i], prow)]
    return MatZq(ring, n, n, [row[n:] for row in aug])


def det(A):
    """Determinant over a field (accuracy e = 1 only)."""
    ring = A.ring
    assert ring.e == 1, "determinants are only used over F_q"
    n = A.nrows
    if A.ncols != n:
        raise ShapeMismatch("det of non-square matrix")
    rows = [list(r) for r in A.rows]
    d = ring.one
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ring.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = ring.neg(d)
        d = ring.mul(d, rows[c][c])
        inv = ring.inv(rows[c][c])
        prow = [ring.mul(inv, x) for x in rows[c]]
        rows[c] = prow
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], prow)]
    return d


class RigidEqn:
    """Equation matrix E and F-complement of a full-column-rank matrix A,
    rigidified by the canonical supplement: E A = 0, F A = I, E S = I, F S = 0.
    """

    __slots__ = ("E", "F", "supp_cols")

    def __init__(self, E, F, supp_cols):
        self.E = E
        self.F = F
        self.supp_cols = supp_cols


def eqn_complement(A):
    """RigidEqn of A (n x r, columns independent mod p).

    The supplement takes the first n-r standard vectors e_i whose rows were
    not selected as greedy unit pivots of A mod p, so it depends only on the
    reduction of A mod p.
    """
    ring = A.ring
    n, r = A.nrows, A.ncols
    pivot_rows = set(unit_pivot_rows(A))
    supp = [i for i in range(n) if i not in pivot_rows]
    scols = []
    for i in supp:
        col = [0] * n
        col[i] = ring.one
        scols.append(col)
    aug = A.hstack(MatZq.from_cols(ring, scols, nrows=n))
    B = invert(aug)
    F = B.take_rows(range(r))
    E = B.take_rows(range(r, n))
    return RigidEqn(E, F, supp)


def ker_complement(A):
    """Kernel-side rigidification of A (r x n, rows independent mod p):
    returns (L, K, supp_rows) with (L | K) the inverse of the row-augmented A.
    """
    rig = eqn_complement(A.transpose())
    return rig.F.transpose(), rig.E.transpose(), rig.supp_cols


def _check_half_accuracy(ring, H):
    v = min((ring.val(x) for row in H.rows for x in row), default=ring.e)
    if 2 * v < ring.e:
        raise ShapeMismatch("perturbation entries must vanish mod p^ceil(e/2)")


def perturb_eqn(rig, H):
    """First-order update Eqn(A + H) = E - E H F, exact when H^2 terms die.

    H must have the shape of the source A and entries divisible by p^(e/2)
    relative to the working ring, so the quadratic error vanishes exactly.
    """
    E, F = rig.E, rig.F
    if H.nrows != E.ncols or H.ncols != F.nrows:
        raise ShapeMismatch("H has shape %dx%d, expected %dx%d"
                            % (H.nrows, H.ncols, E.ncols, F.nrows))
    _check_half_accuracy(E.ring, H)
    return E.sub(E.mul(H).mul(F))


def perturb_kernel(A, L, K, H):
    """First-order update Ker(A + H) = K - L H K, exact when H^2 terms die."""
    if H.nrows != A.nrows or H.ncols != A.ncols:
        raise ShapeMismatch("H must have the shape of A")
    if L.nrows != A.ncols or K.nrows != A.ncols:
        raise ShapeMismatch("(L | K) must invert the row-augmented A")
    _check_half_accuracy(K.ring, H)
    return K.sub(L.mul(H).mul(K))
