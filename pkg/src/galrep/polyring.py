"""Univariate polynomial arithmetic mod m, factorization mod a prime,
integer resultants, Hensel factor lifting, and small F_l matrix helpers.

Polynomials are lists of ints in ascending degree order, always trimmed.
"""

from fractions import Fraction
from math import isqrt

from .errors import NotCoprime


# ---------------------------------------------------------------------------
# basic arithmetic mod m

def ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def pmod(f, m):
    return ptrim([c % m for c in f])


def pdeg(f):
    return len(f) - 1


def padd(f, g, m):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % m
    return ptrim(out)


def psub(f, g, m):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % m
    return ptrim(out)


def pmul(f, g, m):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return ptrim([c % m for c in out])


def pscale(f, c, m):
    return ptrim([(a * c) % m for a in f])


def pdivmod(f, g, m):
    """Division with remainder; lc(g) must be invertible mod m."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    f = list(f)
    dg = pdeg(g)
    inv = pow(g[-1], -1, m)
    q = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        c = (f[-1] * inv) % m
        k = len(f) - 1 - dg
        q[k] = c
        for i in range(dg + 1):
            f[k + i] = (f[k + i] - c * g[i]) % m
        ptrim(f)
    return ptrim(q), f


def pmonic(f, m):
    if not f:
        return f
    return pscale(f, pow(f[-1], -1, m), m)


def pgcd(f, g, m):
    """Monic gcd mod a prime m."""
    f, g = pmod(list(f), m), pmod(list(g), m)
    while g:
        f, g = g, pdivmod(f, g, m)[1]
    return pmonic(f, m)


def pxgcd(f, g, m):
    """Extended gcd mod a prime m: returns (d, s, t) with s*f + t*g = d, d monic."""
    r0, r1 = pmod(list(f), m), pmod(list(g), m)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, m)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, m), m)
        t0, t1 = t1, psub(t0, pmul(q, t1, m), m)
    if not r0:
        return [], s0, t0
    c = pow(r0[-1], -1, m)
    return pscale(r0, c, m), pscale(s0, c, m), pscale(t0, c, m)


def ppowmod(f, n, g, m):
    """f^n mod (g, m)."""
    out = [1]
    f = pdivmod(f, g, m)[1]
    while n:
        if n & 1:
            out = pdivmod(pmul(out, f, m), g, m)[1]
        f = pdivmod(pmul(f, f, m), g, m)[1]
        n >>= 1
    return out


def pdiff(f, m):
    return ptrim([(i * c) % m for i, c in enumerate(f)][1:])


def peval(f, x, m):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


# ---------------------------------------------------------------------------
# irreducibility and factorization over F_p (p prime)

def prime_factors(n):
    """Prime factorization by trial division; n should stay desk-scale."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_irreducible(f, p):
    """Rabin test for a monic polynomial mod p."""
    n = pdeg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xq = x
    for _ in range(n):
        xq = ppowmod(xq, p, f, p)
    if psub(xq, x, p):
        return False
    for r in prime_factors(n):
        h = x
        for _ in range(n // r):
            h = ppowmod(h, p, f, p)
        if pdeg(pgcd(psub(h, x, p), f, p)) != 0:
            return False
    return True


def random_irreducible(p, n, rng):
    """Random monic irreducible of degree n over F_p."""
    if n == 1:
        return [rng.randrange(p) * (p - 1) % p, 1] if p > 1 else [0, 1]
    while True:
        f = [rng.randrange(p) for _ in range(n)] + [1]
        if is_irreducible(f, p):
            return f


def _pth_root(f, p):
    # over the prime field, a^(1/p) = a
    return ptrim([f[i] for i in range(0, len(f), p)])


def squarefree_decomposition(f, p):
    """f monic mod p -> list of (monic squarefree g, multiplicity e) with f = prod g^e."""
    out = []
    f = pmonic(pmod(list(f), p), p)
    if pdeg(f) <= 0:
        return out
    g = pdiff(f, p)
    if g:
        c = pgcd(f, g, p)
        w = pdivmod(f, c, p)[0]
        i = 1
        while pdeg(w) > 0:
            y = pgcd(w, c, p)
            fac = pdivmod(w, y, p)[0]
            if pdeg(fac) > 0:
                out.append((fac, i))
            w = y
            c = pdivmod(c, y, p)[0]
            i += 1
        if pdeg(c) > 0:
            out.extend((h, e * p) for h, e in squarefree_decomposition(_pth_root(c, p), p))
    else:
        out.extend((h, e * p) for h, e in squarefree_decomposition(_pth_root(f, p), p))
    return out


def distinct_degree_factor(f, p):
    """f monic squarefree mod p -> list of (product of degree-d irreducibles, d)."""
    out = []
    fstar = list(f)
    h = [0, 1]
    d = 0
    while pdeg(fstar) >= 2 * (d + 1):
        d += 1
        h = ppowmod(h, p, fstar, p)
        g = pgcd(psub(h, [0, 1], p), fstar, p)
        if pdeg(g) > 0:
            out.append((g, d))
            fstar = pdivmod(fstar, g, p)[0]
            h = pdivmod(h, fstar, p)[1]
    if pdeg(fstar) > 0:
        out.append((fstar, pdeg(fstar)))
    return out


def equal_degree_factor(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles mod p."""
    n = pdeg(f)
    if n == d:
        return [f]
    while True:
        a = ptrim([rng.randrange(p) for _ in range(n)])
        if pdeg(a) < 1:
            continue
        g = pgcd(a, f, p)
        if 0 < pdeg(g) < n:
            break
        if p == 2:
            # trace map over F_2
            t = list(a)
            b = a
            for _ in range(d - 1):
                b = pdivmod(pmul(b, b, 2), f, 2)[1]
                t = padd(t, b, 2)
            g = pgcd(t, f, 2)
        else:
            b = ppowmod(a, (p ** d - 1) // 2, f, p)
            g = pgcd(psub(b, [1], p), f, p)
        if 0 < pdeg(g) < n:
            break
    h = pdivmod(f, g, p)[0]
    return equal_degree_factor(g, d, p, rng) + equal_degree_factor(h, d, p, rng)


def factor_modp(f, p, rng):
    """Full factorization of f mod p: list of (monic irreducible, multiplicity)."""
    out = []
    for g, e in squarefree_decomposition(f, p):
        for h, d in distinct_degree_factor(g, p):
            for irr in equal_degree_factor(h, d, p, rng):
                out.append((irr, e))
    out.sort(key=lambda ge: (pdeg(ge[0]), ge[0]))
    return out


def order_of_x(chi, p):
    """Multiplicative order of x in F_p[x]/chi, chi irreducible, x invertible."""
    n = p ** pdeg(chi) - 1
    order = n
    for r in prime_factors(n):
        while order % r == 0 and ppowmod([0, 1], order // r, chi, p) == [1]:
            order //= r
    return order


# ---------------------------------------------------------------------------
# integer polynomials

def resultant_int(f, g):
    """Exact resultant of two nonzero integer polynomials."""
    f = ptrim([int(c) for c in f])
    g = ptrim([int(c) for c in g])
    if not f or not g:
        raise ValueError("resultant of zero polynomial")
    ff = [Fraction(c) for c in f]
    gg = [Fraction(c) for c in g]
    res = _resultant_frac(ff, gg)
    assert res.denominator == 1
    return int(res)


def _qdivmod(f, g):
    f = list(f)
    dg = len(g) - 1
    inv = 1 / g[-1]
    while f and len(f) - 1 >= dg:
        c = f[-1] * inv
        k = len(f) - 1 - dg
        for i in range(dg + 1):
            f[k + i] -= c * g[i]
        while f and f[-1] == 0:
            f.pop()
    return f


def _resultant_frac(f, g):
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    if m < n:
        return (-1) ** (m * n) * _resultant_frac(g, f)
    r = _qdivmod(f, g)
    if not r:
        return Fraction(0)
    d = len(r) - 1
    return (-1) ** (m * n) * g[-1] ** (m - d) * _resultant_frac(g, r)


def hensel_factor_lift(L, chi0, psi0, ell, v):
    """Lift L = chi0*psi0 (mod ell) to chi*psi = L mod ell^v, chi monic.

    Quadratic lifting with Bezout data; raises NotCoprime when the mod-ell
    factors share a root.
    """
    chi0 = pmod(list(chi0), ell)
    psi0 = pmod(list(psi0), ell)
    d, s, t = pxgcd(chi0, psi0, ell)
    if d != [1]:
        raise NotCoprime("factors share a common divisor mod %d" % ell)
    if psub(pmod(L, ell), pmul(chi0, psi0, ell), ell):
        raise ValueError("chi0*psi0 != L mod ell")
    target = ell ** v
    m = ell
    chi, psi = chi0, psi0
    # invariant: s*chi + t*psi = 1 mod m, chi monic (chi is the division modulus)
    while m < target:
        m2 = min(m * m, target)
        e = psub(pmod(L, m2), pmul(chi, psi, m2), m2)
        q, r = pdivmod(pmul(t, e, m2), chi, m2)
        chi_n = padd(chi, r, m2)
        psi_n = padd(psi, padd(pmul(s, e, m2), pmul(q, psi, m2), m2), m2)
        # refresh Bezout data mod m2
        b = psub(padd(pmul(s, chi_n, m2), pmul(t, psi_n, m2), m2), [1], m2)
        c, dd = pdivmod(pmul(t, b, m2), chi_n, m2)
        t = psub(t, dd, m2)
        s = psub(s, padd(pmul(s, b, m2), pmul(c, psi_n, m2), m2), m2)
        chi, psi = chi_n, psi_n
        m = m2
    chi = pmod(chi, target)
    psi = pmod(psi, target)
    assert chi[-1] == 1
    return chi, psi


# ---------------------------------------------------------------------------
# matrices over F_p (lists of row lists)

def mat_mul_modp(A, B, p):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) % p for j in range(m)] for i in range(n)]


def mat_vec_modp(A, v, p):
    return [sum(a * b for a, b in zip(row, v)) % p for row in A]


def mat_identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_kernel_modp(A, p):
    """Basis of the right kernel of A mod p (list of column vectors)."""
    if not A:
        return []
    rows = [list(r) for r in A]
    n = len(rows[0])
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for c in free:
        v = [0] * n
        v[c] = 1
        for pc, pr in pivots.items():
            v[pc] = (-rows[pr][c]) % p
        basis.append(v)
    return basis


def mat_solve_modp(A, b, p):
    """One solution of A x = b mod p, or None if inconsistent."""
    aug = [list(r) + [bb % p] for r, bb in zip(A, b)]
    n = len(A[0])
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(aug)):
            if aug[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivots[c] = r
        r += 1
    for i in range(len(aug)):
        if i not in pivots.values() and aug[i][n] % p:
            if not any(aug[i][:n]):
                return None
    x = [0] * n
    for c, rr in pivots.items():
        x[c] = aug[rr][n]
    return x


def mat_rank_modp(A, p):
    if not A:
        return 0
    return len(A[0]) - len(mat_kernel_modp(A, p))


def mat_inv_modp(A, p):
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if aug[i][c] % p:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix mod %d" % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, p)
        aug[c] = [(x * inv) % p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def mat_pow_order(A, p, cap=10 ** 6):
    """Multiplicative order of an invertible matrix mod p."""
    n = len(A)
    ident = mat_identity(n)
    M = A
    k = 1
    while M != ident:
        M = mat_mul_modp(M, A, p)
        k += 1
        if k > cap:
            raise ValueError("order exceeds cap")
    return k


def companion(f, p):
    """Companion matrix of a monic polynomial mod p."""
    f = pmod(list(f), p)
    d = pdeg(f)
    M = [[0] * d for _ in range(d)]
    for i in range(1, d):
        M[i][i - 1] = 1
    for i in range(d):
        M[i][d - 1] = (-f[i]) % p
    return M


def charpoly_modp(A, p):
    """Characteristic polynomial of A mod p (monic, ascending coefficients).

    Hessenberg reduction then the standard recurrence; p prime.
    """
    n = len(A)
    H = [[x % p for x in row] for row in A]
    for m in range(1, n):
        # find a nonzero entry below the subdiagonal in column m-1
        piv = None
        for i in range(m, n):
            if H[i][m - 1]:
                piv = i
                break
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            if H[i][m - 1]:
                u = (H[i][m - 1] * inv) % p
                for j in range(n):
                    H[i][j] = (H[i][j] - u * H[m][j]) % p
                for j in range(n):
                    H[j][m] = (H[j][m] + u * H[j][i]) % p
    # p_0 = 1, p_m = charpoly of leading m x m block
    polys = [[1]]
    for m in range(1, n + 1):
        term = pmul(polys[m - 1], [(-H[m - 1][m - 1]) % p, 1], p)
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = (prod * H[i][i - 1]) % p
            coeff = (prod * H[i - 1][m - 1]) % p
            term = psub(term, pscale(polys[i - 1], coeff, p), p)
        polys.append(term)
    out = polys[n]
    out = out + [0] * (n + 1 - len(out))
    return out


# ---------------------------------------------------------------------------
# polynomials with rational coefficients (lists of Fraction, ascending)

def qtrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def qmul(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return qtrim(out)


def qdiff(f):
    return qtrim([i * c for i, c in enumerate(f)][1:])


def qgcd(f, g):
    """Monic gcd over Q."""
    f = qtrim([Fraction(c) for c in f])
    g = qtrim([Fraction(c) for c in g])
    while g:
        f, g = g, _qdivmod(f, g)
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def is_squarefree_q(f):
    g = qgcd(f, qdiff(list(f)))
    return len(g) == 1


def qpoly_modp(f, p):
    """Reduce a rational-coefficient polynomial mod p; None if a denominator dies."""
    out = []
    for c in f:
        c = Fraction(c)
        if c.denominator % p == 0:
            return None
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return ptrim(out)


def ddf_degree_multiset(f, p):
    """Degrees (with multiplicity) of the irreducible factors of a squarefree f mod p."""
    out = []
    for g, d in distinct_degree_factor(pmonic(f, p), p):
        out.extend([d] * (pdeg(g) // d))
    return sorted(out)
