"""Plane-curve models: a small infix polynomial parser over Q, curve
specifications with their designated Riemann-Roch bases, and the evaluation
divisors E1/E2 (rational points or Galois-stable conjugate clusters)."""

from fractions import Fraction

from .errors import ConfigError


class Poly2:
    """Bivariate polynomial over Q: {(i, j): coefficient} on x^i y^j."""

    __slots__ = ("c",)

    def __init__(self, c=None):
        self.c = {k: Fraction(v) for k, v in (c or {}).items() if v != 0}

    @classmethod
    def const(cls, v):
        return cls({(0, 0): Fraction(v)})

    @classmethod
    def var(cls, name):
        if name == "x" or name == "t":
            return cls({(1, 0): Fraction(1)})
        if name == "y":
            return cls({(0, 1): Fraction(1)})
        raise ConfigError("unknown variable %r" % name)

    def __add__(self, o):
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Poly2(out)

    def __sub__(self, o):
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, Fraction(0)) - v
        return Poly2(out)

    def __neg__(self):
        return Poly2({k: -v for k, v in self.c.items()})

    def __mul__(self, o):
        out = {}
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in o.c.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return Poly2(out)

    def __pow__(self, n):
        out = Poly2.const(1)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def divide_const(self, o):
        if not o.is_const():
            raise ConfigError("division only by constants in polynomial strings")
        d = o.c.get((0, 0), Fraction(0))
        if d == 0:
            raise ConfigError("division by zero")
        return Poly2({k: v / d for k, v in self.c.items()})

    def is_const(self):
        return all(k == (0, 0) for k in self.c)

    def is_zero(self):
        return not self.c

    def deg_y(self):
        return max((j for (_, j) in self.c), default=-1)

    def deg_total(self):
        return max((i + j for (i, j) in self.c), default=-1)

    def diff_y(self):
        out = {}
        for (i, j), v in self.c.items():
            if j:
                out[(i, j - 1)] = v * j
        return Poly2(out)

    def eval_q(self, x, y):
        acc = Fraction(0)
        for (i, j), v in self.c.items():
            acc += v * Fraction(x) ** i * Fraction(y) ** j
        return acc

    def y_coeffs(self):
        """List (ascending j) of {i: coeff} maps."""
        dy = self.deg_y()
        out = [{} for _ in range(dy + 1)]
        for (i, j), v in self.c.items():
            out[j][i] = v
        return out

    def subst(self, px, py):
        """Substitute Poly2 values for x and y."""
        out = Poly2()
        for (i, j), v in self.c.items():
            out = out + Poly2.const(v) * px ** i * py ** j
        return out

    def denominators_lcm(self):
        from math import lcm
        return lcm(*(v.denominator for v in self.c.values())) if self.c else 1

    def __repr__(self):
        return "Poly2(%r)" % self.c


def parse_poly(s, allowed=("x", "y", "t")):
    """Parse an infix polynomial string over Q in the given variables."""
    tokens = _tokenize(s)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_unary()
        while peek() in ("*", "/"):
            op = take()
            rhs = parse_unary()
            node = node * rhs if op == "*" else node.divide_const(rhs)
        return node

    def parse_unary():
        if peek() == "-":
            take()
            return -parse_unary()
        if peek() == "+":
            take()
            return parse_unary()
        return parse_factor()

    def parse_factor():
        node = parse_atom()
        while peek() == "^":
            take()
            exp = take()
            if not isinstance(exp, int) or exp < 0:
                raise ConfigError("exponent must be a nonnegative integer")
            node = node ** exp
        return node

    def parse_atom():
        t = take()
        if t == "(":
            node = parse_expr()
            if take() != ")":
                raise ConfigError("unbalanced parentheses in %r" % s)
            return node
        if isinstance(t, int):
            return Poly2.const(t)
        if isinstance(t, str) and t in allowed:
            return Poly2.var("x" if t == "t" else t)
        raise ConfigError("unexpected token %r in %r" % (t, s))

    node = parse_expr()
    if pos[0] != len(tokens):
        raise ConfigError("trailing input in %r" % s)
    return node


def _tokenize(s):
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            out.append(int(s[i:j]))
            i = j
        elif ch.isalpha():
            out.append(ch)
            i += 1
        elif ch in "+-*/^()":
            out.append(ch)
            i += 1
        else:
            raise ConfigError("bad character %r" % ch)
    return out


class ECluster:
    """One Galois-stable chunk of an evaluation divisor: either a rational
    point or the set of points (X(t), Y(t)) over the roots of a minimal
    polynomial h(t) in Q[t]."""

    def __init__(self, min_poly=None, x_expr=None, y_expr=None, point=None):
        self.min_poly = min_poly     # Poly2 in t (stored on the x slot) or None
        self.x_expr = x_expr
        self.y_expr = y_expr
        self.point = point           # (Fraction, Fraction) or None

    @property
    def degree(self):
        if self.point is not None:
            return 1
        return max(i for (i, _) in self.min_poly.c)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (list, tuple)):
            x, y = (Fraction(str(v)) for v in data)
            return cls(point=(x, y))
        h = parse_poly(data["min_poly"], allowed=("t",))
        xe = parse_poly(data["x"], allowed=("t",))
        ye = parse_poly(data["y"], allowed=("t",))
        return cls(min_poly=h, x_expr=xe, y_expr=ye)

    def to_json(self):
        if self.point is not None:
            return [str(self.point[0]), str(self.point[1])]
        return {"min_poly": _poly_str(self.min_poly), "x": _poly_str(self.x_expr),
                "y": _poly_str(self.y_expr)}


def _poly_str(p):
    terms = []
    for (i, j), v in sorted(p.c.items()):
        t = str(v)
        if i:
            t += "*t^%d" % i if i > 1 else "*t"
        if j:
            raise ConfigError("cluster expressions are univariate in t")
        terms.append(t)
    return " + ".join(terms) if terms else "0"


class CurveSpec:
    """Affine plane model f(x, y) = 0 with its designated L(D0) basis."""

    def __init__(self, f, genus, d0, basis, E1, E2, hyperelliptic=None,
                 plane_quartic=False, name=""):
        self.f = f
        self.genus = genus
        self.d0 = d0
        self.basis = basis           # list of (num Poly2, den Poly2)
        self.E1 = E1                 # list of ECluster
        self.E2 = E2
        self.hyperelliptic = hyperelliptic   # (h Poly2 in x, f Poly2 in x) or None
        self.plane_quartic = plane_quartic
        self.name = name
        self._validate()

    @property
    def d_w(self):
        return self.d0 + 1 - self.genus

    @property
    def n_z(self):
        return 5 * self.d0 + 1

    def _validate(self):
        g, d0 = self.genus, self.d0
        if d0 < 2 * g + 1:
            raise ConfigError("d0 = %d below 2g+1 = %d" % (d0, 2 * g + 1))
        if len(self.basis) != d0 + 1 - g:
            raise ConfigError("basis has %d functions, expected d0+1-g = %d"
                              % (len(self.basis), d0 + 1 - g))
        for E, nm in ((self.E1, "E1"), (self.E2, "E2")):
            deg = sum(c.degree for c in E)
            if deg != d0 - g:
                raise ConfigError("%s has degree %d, expected d0-g = %d" % (nm, deg, d0 - g))
            for cl in E:
                self._check_cluster(cl, nm)
        if [c.to_json() for c in self.E1] == [c.to_json() for c in self.E2]:
            raise ConfigError("E1 and E2 must differ")

    def _check_cluster(self, cl, nm):
        if cl.point is not None:
            x, y = cl.point
            if self.f.eval_q(x, y) != 0:
                raise ConfigError("%s point (%s, %s) is not on the curve" % (nm, x, y))
            return
        # f(X(t), Y(t)) must vanish mod h(t) over Q
        comp = self.f.subst(cl.x_expr, cl.y_expr)
        h = [cl.min_poly.c.get((i, 0), Fraction(0)) for i in range(cl.degree + 1)]
        rem = _qreduce([comp.c.get((i, 0), Fraction(0)) for i in range(comp.deg_total() + 1)], h)
        if any(rem):
            raise ConfigError("%s cluster points are not on the curve" % nm)
        if _quni_gcd_deg(h, [cl.min_poly.c.get((i + 1, 0), Fraction(0)) * (i + 1)
                             for i in range(cl.degree)]) != 0:
            raise ConfigError("%s cluster minimal polynomial is not separable" % nm)

    @classmethod
    def from_json(cls, data):
        f = parse_poly(data["f"], allowed=("x", "y"))
        basis = []
        for b in data["basis"]:
            num = parse_poly(b["num"], allowed=("x", "y"))
            den = parse_poly(b.get("den", "1"), allowed=("x", "y"))
            basis.append((num, den))
        E1 = [ECluster.from_json(c) for c in data["E1"]]
        E2 = [ECluster.from_json(c) for c in data["E2"]]
        hyp = None
        if "hyperelliptic" in data:
            hyp = (parse_poly(data["hyperelliptic"]["h"], allowed=("x",)),
                   parse_poly(data["hyperelliptic"]["f"], allowed=("x",)))
        return cls(f, int(data["genus"]), int(data["d0"]), basis, E1, E2,
                   hyperelliptic=hyp, plane_quartic=bool(data.get("plane_quartic", False)),
                   name=data.get("name", ""))


def _qreduce(f, h):
    """Remainder of f by monic-normalized h over Q (lists of Fractions)."""
    f = [Fraction(c) for c in f]
    h = [Fraction(c) for c in h]
    while h and h[-1] == 0:
        h.pop()
    lead = h[-1]
    dh = len(h) - 1
    while len(f) - 1 >= dh and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 < dh:
            break
        c = f[-1] / lead
        k = len(f) - 1 - dh
        for i in range(dh + 1):
            f[k + i] -= c * h[i]
        while f and f[-1] == 0:
            f.pop()
    return f


def _quni_gcd_deg(f, g):
    """Degree of gcd over Q of two Fraction coefficient lists."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while g and any(g):
        f, g = g, _qreduce(f, g)
    while f and f[-1] == 0:
        f.pop()
    return len(f) - 1


class RingPoly2:
    """A Poly2 prepared for repeated evaluation over a fixed ZqRing."""

    __slots__ = ("ring", "ycoeffs")

    def __init__(self, ring, poly):
        self.ring = ring
        self.ycoeffs = []
        for cmap in poly.y_coeffs():
            deg = max(cmap, default=-1)
            row = [ring.zero] * (deg + 1)
            for i, v in cmap.items():
                row[i] = _frac_to_ring(ring, v)
            self.ycoeffs.append(row)

    def eval(self, xv, yv):
        ring = self.ring
        acc = ring.zero
        for row in reversed(self.ycoeffs):
            cx = ring.zero
            for c in reversed(row):
                cx = ring.add(ring.red(cx * xv), c)
            acc = ring.add(ring.red(acc * yv), cx)
        return acc

    def eval_coeffs_at_x(self, xv):
        """Coefficients in y after substituting x = xv (packed, ascending)."""
        ring = self.ring
        out = []
        for row in self.ycoeffs:
            cx = ring.zero
            for c in reversed(row):
                cx = ring.add(ring.red(cx * xv), c)
            out.append(cx)
        return out


def _frac_to_ring(ring, v):
    v = Fraction(v)
    if v.denominator % ring.p == 0:
        raise ConfigError("coefficient denominator divisible by p = %d" % ring.p)
    n = ring.from_int(v.numerator)
    if v.denominator == 1:
        return n
    return ring.mul(n, ring.inv(ring.from_int(v.denominator)))
