"""Arithmetic in Z_q/p^e for q = p^a unramified, plus Hensel lifting,
discrete logs in mu_m, and rational reconstruction.

An element is a polynomial of degree < a in theta with coefficients in
[0, p^e).  Internally the a coefficients are packed into a single Python
integer in base 2^K (K sized so that schoolbook products and dot-product
accumulations of up to CHUNK terms never overflow a digit).  This keeps the
hot linear-algebra loops down to one bigint multiply-add per entry, with a
single digit-fold reduction per accumulated result.
"""

from fractions import Fraction
from math import gcd, isqrt

from .errors import NonSimpleRoot, NoReconstruction, NotInSubgroup
from .polyring import pmod, random_irreducible

# maximum number of deferred products accumulated before a reduction
CHUNK = 512


class ZqRing:
    """The ring Z_q/p^e with q = p^a, presented as Z[theta]/(T(theta), p^e)."""

    def __init__(self, p, a, e, T, _family=None):
        self.p = p
        self.a = a
        self.e = e
        self.T = tuple(int(c) for c in T)
        assert len(self.T) == a + 1 and self.T[-1] == 1
        self.pe = p ** e
        self.K = 2 * self.pe.bit_length() + (a * CHUNK).bit_length() + 2
        self.mask = (1 << self.K) - 1
        self.Ka = self.K * a
        self.maskA = (1 << self.Ka) - 1
        self.zero = 0
        self.one = 1
        self._subpad = sum(self.pe << (self.K * i) for i in range(a))
        self._build_fold()
        self._family = _family if _family is not None else {e: self}
        self._Tmodp = pmod(list(self.T), p)
        self.frob_root = None   # packed; set after construction
        self._frobpow = None

    # -- construction helpers ------------------------------------------------

    def _build_fold(self):
        # fold[i] = packed representation of theta^(a+i) reduced mod (T, p^e)
        a, pe = self.a, self.pe
        tha = [(-c) % pe for c in self.T[:a]]   # theta^a
        fold = []
        cur = tha
        for _ in range(a - 1):
            fold.append(self.pack(cur))
            # multiply by theta: shift, then fold the overflowing top digit
            top = cur[a - 1]
            cur = [0] + cur[: a - 1]
            if top:
                cur = [(c + top * t) % pe for c, t in zip(cur, tha)]
        self.fold = fold

    def _set_frobenius(self):
        a = self.a
        if a == 1:
            self.frob_root = self.pack([(-self.T[0]) % self.pe])
        else:
            theta = self.pack([0, 1] + [0] * (a - 2))
            x = self.powz(theta, self.p)
            # Newton for T(x) = 0 starting from theta^p
            tprime = [(i * c) for i, c in enumerate(self.T)][1:]
            for _ in range(self.e.bit_length() + 1):
                fx = self._eval_intpoly(self.T, x)
                if fx == 0:
                    break
                dfx = self._eval_intpoly(tprime, x)
                x = self.sub(x, self.mul(fx, self.inv(dfx)))
            assert self._eval_intpoly(self.T, x) == 0
            self.frob_root = x
        pw = [self.one]
        for _ in range(self.a - 1):
            pw.append(self.mul(pw[-1], self.frob_root))
        self._frobpow = pw

    def _eval_intpoly(self, coeffs, x):
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc

    def with_accuracy(self, e2):
        """Ring with the same (p, a, T) at accuracy e2; cached per family."""
        if e2 in self._family:
            return self._family[e2]
        r = ZqRing(self.p, self.a, e2, self.T, _family=self._family)
        r._set_frobenius()
        self._family[e2] = r
        return r

    # -- packing -------------------------------------------------------------

    def pack(self, digits):
        x = 0
        shift = 0
        for d in digits:
            x += (d % self.pe) << shift
            shift += self.K
        return x

    def digits(self, x):
        return [(x >> (self.K * i)) & self.mask for i in range(self.a)]

    def from_int(self, c):
        return c % self.pe

    # -- core arithmetic on packed values -------------------------------------

    def canon(self, x):
        K, mask, pe = self.K, self.mask, self.pe
        out = 0
        shift = 0
        for _ in range(self.a):
            out += ((x >> shift) & mask) % pe << shift
            shift += K
        return out

    def red(self, x):
        """Reduce an accumulated product (up to 2a-1 digits) to canonical form."""
        K, mask, pe = self.K, self.mask, self.pe
        lo = x & self.maskA
        hi = x >> self.Ka
        if hi:
            fold = self.fold
            i = 0
            while hi:
                d = (hi & mask) % pe
                if d:
                    lo += d * fold[i]
                hi >>= K
                i += 1
        out = 0
        shift = 0
        for _ in range(self.a):
            out += ((lo >> shift) & mask) % pe << shift
            shift += K
        return out

    def add(self, x, y):
        return self.canon(x + y)

    def sub(self, x, y):
        return self.canon(x + self._subpad - y)

    def neg(self, x):
        return self.canon(self._subpad - x)

    def mul(self, x, y):
        return self.red(x * y)

    def dot(self, xs, ys):
        """Sum of products; inputs canonical, length arbitrary."""
        acc = 0
        n = 0
        out = 0
        for x, y in zip(xs, ys):
            acc += x * y
            n += 1
            if n == CHUNK:
                out = self.red(out + self.red(acc))
                acc = 0
                n = 0
        return self.red(out + self.red(acc)) if out else self.red(acc)

    def powz(self, x, n):
        out = self.one
        while n:
            if n & 1:
                out = self.red(out * x)
            x = self.red(x * x)
            n >>= 1
        return out

    def is_unit(self, x):
        p, K, mask = self.p, self.K, self.mask
        for i in range(self.a):
            if ((x >> (K * i)) & mask) % p:
                return True
        return False

    def val(self, x):
        """p-adic valuation: largest v with x in p^v * R (v = e for x = 0)."""
        if x == 0:
            return self.e
        p = self.p
        best = self.e
        for d in self.digits(x):
            if d:
                v = 0
                while d % p == 0:
                    d //= p
                    v += 1
                if v < best:
                    best = v
                    if best == 0:
                        return 0
        return best

    def pdiv_exact(self, x, k):
        """Divide by p^k; every digit must be divisible."""
        pk = self.p ** k
        out = []
        for d in self.digits(x):
            assert d % pk == 0
            out.append(d // pk)
        return self.pack(out)

    def pmul(self, x, k):
        """Multiply by p^k."""
        return self.canon(x * self.p ** k)

    def inv(self, x):
        """Inverse of a unit: mod-p polynomial xgcd then Newton lifting."""
        p, a = self.p, self.a
        xm = [d % p for d in self.digits(x)]
        from .polyring import pxgcd, ptrim
        d, s, _ = pxgcd(ptrim(xm), self._Tmodp, p)
        if d != [1]:
            raise ZeroDivisionError("not a unit")
        y = self.pack(s + [0] * (a - len(s)))
        if self.e > 1:
            two = self.from_int(2)
            k = 1
            while k < self.e:
                y = self.mul(y, self.sub(two, self.mul(x, y)))
                k *= 2
        return y

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def frob(self, x):
        """The Frobenius automorphism theta -> theta' applied to x."""
        if self.a == 1:
            return x
        acc = 0
        K, mask = self.K, self.mask
        pw = self._frobpow
        for i in range(self.a):
            d = (x >> (K * i)) & mask
            if d:
                acc += d * pw[i]
        return self.red(acc)

    def frob_iter(self, x, k):
        for _ in range(k % self.a if self.a > 1 else 0):
            x = self.frob(x)
        return x

    def teichmuller(self, x):
        """Teichmuller-style lift: the unique y = x mod p with y^(p^a) = y."""
        q = self.p ** self.a
        steps = (self.e + self.a - 1) // self.a + 1
        for _ in range(steps):
            x = self.powz(x, q)
        return x

    # -- cross-accuracy ------------------------------------------------------

    def reduce_elem(self, x, ring2):
        assert ring2.p == self.p and ring2.a == self.a and ring2.e <= self.e
        return ring2.pack([d % ring2.pe for d in self.digits(x)])

    def lift_elem(self, x, ring2):
        """Canonical digit lift to a higher-accuracy ring of the same family."""
        assert ring2.p == self.p and ring2.a == self.a and ring2.e >= self.e
        return ring2.pack(self.digits(x))

    # -- randomness ----------------------------------------------------------

    def rand_elem(self, rng):
        return self.pack([rng.randrange(self.pe) for _ in range(self.a)])

    def rand_small(self, rng, window=64):
        """Random element with digits in a small window lifted to Z_q."""
        w = min(self.p, window)
        return self.pack([rng.randrange(w) for _ in range(self.a)])

    def rand_unit(self, rng):
        while True:
            x = self.rand_small(rng)
            if self.is_unit(x):
                return x

    # -- misc ----------------------------------------------------------------

    def elem(self, x):
        return ZqElem(self, x)

    def __eq__(self, other):
        return (isinstance(other, ZqRing) and self.p == other.p and
                self.a == other.a and self.e == other.e and self.T == other.T)

    def __hash__(self):
        return hash((self.p, self.a, self.e, self.T))

    def __repr__(self):
        return f"ZqRing(p={self.p}, a={self.a}, e={self.e})"

    def to_json(self):
        return {"p": self.p, "a": self.a, "e": self.e, "T": [str(c) for c in self.T]}

    @classmethod
    def from_json(cls, data):
        r = cls(int(data["p"]), int(data["a"]), int(data["e"]),
                [int(c) for c in data["T"]])
        r._set_frobenius()
        return r


class ZqElem:
    """Immutable element of a ZqRing (thin wrapper over the packed value)."""

    __slots__ = ("ring", "v")

    def __init__(self, ring, v):
        self.ring = ring
        self.v = v

    def _coerce(self, other):
        if isinstance(other, ZqElem):
            assert other.ring == self.ring
            return other.v
        return self.ring.from_int(int(other))

    def __add__(self, other):
        return ZqElem(self.ring, self.ring.add(self.v, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return ZqElem(self.ring, self.ring.sub(self.v, self._coerce(other)))

    def __rsub__(self, other):
        return ZqElem(self.ring, self.ring.sub(self._coerce(other), self.v))

    def __mul__(self, other):
        return ZqElem(self.ring, self.ring.mul(self.v, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ZqElem(self.ring, self.ring.div(self.v, self._coerce(other)))

    def __neg__(self):
        return ZqElem(self.ring, self.ring.neg(self.v))

    def __pow__(self, n):
        return ZqElem(self.ring, self.ring.powz(self.v, n))

    def __eq__(self, other):
        if isinstance(other, ZqElem):
            return self.ring == other.ring and self.v == other.v
        return self.v == self.ring.from_int(int(other))

    def __hash__(self):
        return hash((self.ring.pe, self.v))

    def __bool__(self):
        return self.v != 0

    def is_unit(self):
        return self.ring.is_unit(self.v)

    def valuation(self):
        return self.ring.val(self.v)

    def coeffs(self):
        return tuple(self.ring.digits(self.v))

    def reduce_to(self, e2):
        r2 = self.ring.with_accuracy(e2)
        return ZqElem(r2, self.ring.reduce_elem(self.v, r2))

    def __repr__(self):
        return f"Zq{list(self.coeffs())}"

    def to_json(self):
        return [str(d) for d in self.coeffs()]

    @classmethod
    def from_json(cls, ring, data):
        return cls(ring, ring.pack([int(s) for s in data]))


# ---------------------------------------------------------------------------
# module operations

def make_ring(p, a, e, seed=0):
    """Construct Z_q/p^e with a random defining polynomial irreducible mod p."""
    assert a >= 1 and e >= 1
    from .util import rng_for
    rng = rng_for(seed, "ring", p, a)
    T = random_irreducible(p, a, rng)
    ring = ZqRing(p, a, e, T)
    ring._set_frobenius()
    return ring


def frobenius_auto(x):
    """The Frobenius automorphism of Z_q/p^e applied to an element."""
    return ZqElem(x.ring, x.ring.frob(x.v))


def hensel_root(f, r0, ring):
    """Lift a simple root r0 of the integer polynomial f from mod p to mod p^e."""
    p, pe = ring.p, ring.pe
    f = [int(c) for c in f]
    df = [i * c for i, c in enumerate(f)][1:]

    def ev(poly, x, m):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % m
        return acc

    r = r0 % p
    if ev(df, r, p) == 0:
        raise NonSimpleRoot("derivative vanishes at r0 mod p")
    k = 1
    while k < ring.e:
        k = min(2 * k, ring.e)
        m = p ** k
        r = (r - ev(f, r, m) * pow(ev(df, r, m), -1, m)) % m
    assert ev(f, r, pe) == 0
    return ZqElem(ring, ring.from_int(r))


def newton_root_zq(ring, coeffs, r0):
    """Root of a Zq[y]-polynomial (packed coefficients) near a simple mod-p root.

    r0 is packed at full ring accuracy (any lift of the residue root).
    """
    dcoeffs = [ring.mul(c, ring.from_int(i)) for i, c in enumerate(coeffs)][1:]

    def ev(cs, x):
        acc = ring.zero
        for c in reversed(cs):
            acc = ring.add(ring.red(acc * x), c)
        return acc

    r = r0
    for _ in range(ring.e.bit_length() + 1):
        fr = ev(coeffs, r)
        if fr == 0:
            break
        r = ring.sub(r, ring.mul(fr, ring.inv(ev(dcoeffs, r))))
    if ev(coeffs, r) != 0:
        raise NonSimpleRoot("Newton iteration failed to converge")
    return r


def dlog_mu(z, zeta, m):
    """k with zeta^k = z in F_q; brute-force scan (m is small)."""
    ring1 = z.ring.with_accuracy(1)
    zv = z.ring.reduce_elem(z.v, ring1)
    zetav = zeta.ring.reduce_elem(zeta.v, ring1) if zeta.ring.e != 1 else zeta.v
    acc = ring1.one
    for k in range(m):
        if acc == zv:
            return k
        acc = ring1.mul(acc, zetav)
    raise NotInSubgroup("element is not a power of zeta")


def rational_reconstruct(c, modulus):
    """Recover a/b from c mod modulus with |a|, b <= sqrt(modulus/2)."""
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, c % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1 or gcd(abs(t1), modulus) != 1:
        raise NoReconstruction("no a/b with the required bounds; raise the accuracy")
    return Fraction(r1, t1)


# re-exported here because they belong to this module's contract surface
from .polyring import resultant_int, hensel_factor_lift  # noqa: E402,F401
