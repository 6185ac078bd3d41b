"""Shared test utilities: brute-force oracles and validators."""

import itertools


def brute_kernel_count(ring, A):
    """Exact number of solutions of A x = 0 over Z/p^e (a = 1 only),
    by meet-in-the-middle enumeration over the columns."""
    assert ring.a == 1
    pe = ring.pe
    m, n = A.nrows, A.ncols
    cols = A.cols()
    half = n // 2
    left = {}
    for xs in itertools.product(range(pe), repeat=half):
        key = tuple(sum(c[i] * x for c, x in zip(cols[:half], xs)) % pe for i in range(m))
        left[key] = left.get(key, 0) + 1
    total = 0
    for xs in itertools.product(range(pe), repeat=n - half):
        key = tuple((-sum(c[i] * x for c, x in zip(cols[half:], xs))) % pe for i in range(m))
        total += left.get(key, 0)
    return total


def module_size(ring, gens_matrix):
    """Cardinality of the column span over Z/p^e (a = 1), from the Howell form:
    the span has size prod p^(e - v_j) over the pivot valuations."""
    assert ring.a == 1
    from galrep.linalg import howell_canonical
    H = howell_canonical(gens_matrix)
    size = 1
    for j in range(H.ncols):
        col = H.col(j)
        piv = next(x for x in col if x)
        size *= ring.pe // ring.p ** ring.val(piv)
    return size


def matrix_in_span(ring, vec, gens_matrix):
    """Membership of vec in the column span, via Howell-form stability."""
    from galrep.linalg import MatZq, howell_canonical
    H1 = howell_canonical(gens_matrix)
    H2 = howell_canonical(gens_matrix.hstack(MatZq.from_cols(ring, [vec], nrows=len(vec))))
    return H1 == H2


def validate_chain(chain, m):
    """Check the add-flip chain recurrence and endpoint."""
    vals = []
    for s, (ms, i, j) in enumerate(chain):
        if s == 0:
            assert ms == 0
        elif s == 1:
            assert ms == 1
        else:
            assert 0 <= i < s and 0 <= j < s
            assert ms == -vals[i] - vals[j]
        vals.append(ms)
    assert vals[-1] == m or (m == 0 and len(chain) == 1)


def durand_kerner_roots(coeffs, iters=200):
    """Complex roots of an integer polynomial (ascending coeffs, monic-ish)."""
    n = len(coeffs) - 1
    lead = coeffs[-1]
    cs = [complex(c) / lead for c in coeffs]
    roots = [complex(0.4, 0.9) ** k for k in range(1, n + 1)]
    for _ in range(iters):
        new = []
        for i, r in enumerate(roots):
            num = 0j
            for c in reversed(cs):
                num = num * r + c
            den = 1.0 + 0j
            for j, s in enumerate(roots):
                if j != i:
                    den *= (r - s)
            new.append(r - num / den if den != 0 else r + 1e-4)
        roots = new
    return roots


class NaiveEllipticGroup:
    """Chord-tangent arithmetic on y^2 = x^3 + b over a small prime field,
    plus brute-force torsion enumeration (test oracle, independent of the
    Makdisi machinery)."""

    def __init__(self, p, b):
        self.p = p
        self.b = b % p

    def on_curve(self, P):
        if P is None:
            return True
        x, y = P
        return (y * y - x * x * x - self.b) % self.p == 0

    def points(self):
        out = [None]
        for x in range(self.p):
            rhs = (x * x * x + self.b) % self.p
            for y in range(self.p):
                if (y * y) % self.p == rhs:
                    out.append((x, y))
        return out

    def add(self, P, Q):
        p = self.p
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2 and (y1 + y2) % p == 0:
            return None
        if P == Q:
            lam = (3 * x1 * x1) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        y3 = (lam * (x1 - x3) - y1) % p
        return (x3, y3)

    def mul(self, P, n):
        out = None
        add = self.add
        while n:
            if n & 1:
                out = add(out, P)
            P = add(P, P)
            n >>= 1
        return out

    def torsion_points(self, m):
        return [P for P in self.points() if self.mul(P, m) is None]
