import random

import pytest
from fractions import Fraction

from galrep.errors import NonSimpleRoot, NoReconstruction, NotInSubgroup, NotCoprime
from galrep.zq import (ZqElem, dlog_mu, frobenius_auto, hensel_factor_lift, hensel_root,
                       make_ring, rational_reconstruct, resultant_int)


def test_make_ring_examples():
    r = make_ring(17, 6, 32)
    assert r.pe == 17 ** 32
    r2 = make_ring(5, 6, 64)
    assert r2.pe == 5 ** 64
    r3 = make_ring(7, 1, 1)
    assert r3.a == 1 and len(r3.T) == 2
    # frobenius on a prime field is the identity
    x = ZqElem(r3, r3.from_int(5))
    assert frobenius_auto(x) == x


def test_ring_axioms_random():
    rng = random.Random(7)
    for (p, a, e) in [(17, 6, 8), (5, 3, 5), (2, 4, 6), (7, 1, 3)]:
        r = make_ring(p, a, e, seed=3)
        for _ in range(40):
            x = ZqElem(r, r.rand_elem(rng))
            y = ZqElem(r, r.rand_elem(rng))
            z = ZqElem(r, r.rand_elem(rng))
            assert (x + y) + z == x + (y + z)
            assert x * (y + z) == x * y + x * z
            assert (x * y) * z == x * (y * z)
            assert x - x == 0
            if x.is_unit():
                assert x * (ZqElem(r, r.inv(x.v))) == 1


def test_frobenius_is_ring_automorphism():
    rng = random.Random(1)
    r = make_ring(17, 6, 8, seed=5)
    for _ in range(10):
        x = ZqElem(r, r.rand_elem(rng))
        y = ZqElem(r, r.rand_elem(rng))
        assert frobenius_auto(x + y) == frobenius_auto(x) + frobenius_auto(y)
        assert frobenius_auto(x * y) == frobenius_auto(x) * frobenius_auto(y)
        # a-fold iterate is the identity
        z = x
        for _ in range(r.a):
            z = frobenius_auto(z)
        assert z == x
        # reduces to the p-power map mod p
        assert frobenius_auto(x).reduce_to(1) == x.reduce_to(1) ** r.p
    # fixes the prime subring
    c = ZqElem(r, r.from_int(12345))
    assert frobenius_auto(c) == c


def test_hensel_root_examples():
    r7 = make_ring(7, 1, 4)
    assert hensel_root([-4, 1], 4, r7).coeffs()[0] == 4
    r = make_ring(7, 1, 3)
    root = hensel_root([-2, 0, 1], 3, r)
    assert root.coeffs()[0] == 108
    r2 = make_ring(2, 1, 4)
    with pytest.raises(NonSimpleRoot):
        hensel_root([-2, 0, 1], 0, r2)


def test_hensel_root_accuracy():
    r = make_ring(17, 1, 32)
    root = hensel_root([-2, 0, 1], 6, r)   # sqrt(2): 6^2 = 36 = 2·17 + 2
    c = root.coeffs()[0]
    assert (c * c - 2) % 17 ** 32 == 0
    assert c % 17 == 6


def test_dlog_mu():
    r = make_ring(29, 1, 1)
    zeta = ZqElem(r, r.from_int(16))
    assert dlog_mu(ZqElem(r, r.from_int(1)), zeta, 7) == 0
    assert dlog_mu(ZqElem(r, r.from_int(24)), zeta, 7) == 2
    assert dlog_mu(zeta, zeta, 7) == 1
    with pytest.raises(NotInSubgroup):
        dlog_mu(ZqElem(r, r.from_int(2)), zeta, 7)


def test_rational_reconstruct_examples():
    m = 17 ** 4
    assert rational_reconstruct(5, m) == Fraction(5)
    assert rational_reconstruct(55681, m) == Fraction(1, 3)
    assert rational_reconstruct(83519, m) == Fraction(-2)


def test_rational_reconstruct_roundtrip():
    rng = random.Random(3)
    for p, e in [(17, 8), (5, 12), (2, 30)]:
        m = p ** e
        from math import isqrt
        bound = isqrt(m // 2)
        for _ in range(60):
            a = rng.randrange(-bound, bound + 1)
            b = rng.randrange(1, bound + 1)
            from math import gcd
            if gcd(b, p) != 1 or gcd(abs(a), b) != 1:
                continue
            c = a * pow(b, -1, m) % m
            assert rational_reconstruct(c, m) == Fraction(a, b)


def test_rational_reconstruct_failure():
    # generic residues have no small representation; every success must verify
    m = 17 ** 4
    failures = 0
    for c in range(2000, 2100):
        try:
            q = rational_reconstruct(c, m)
            assert (q.numerator - q.denominator * c) % m == 0
        except NoReconstruction:
            failures += 1
    assert failures > 20


def test_resultant_examples():
    # elliptic group order: Res(x^2 - a x + p, x - 1) = 1 - a + p
    for ap, p in [(3, 11), (-2, 7), (0, 5)]:
        assert resultant_int([p, -ap, 1], [-1, 1]) == 1 - ap + p
    # L_19 of the Klein quartic against x^2 - 1
    L19 = [0] * 7
    # (x^2 + 19)(x^4 - 19 x^2 + 361)
    a = [19, 0, 1]
    b = [361, 0, -19, 0, 1]
    L = [0] * 7
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            L[i + j] += x * y
    assert resultant_int(L, [-1, 0, 1]) == 47059600
    # constant convention
    assert resultant_int([1, 0, 1], [2]) == 4
    assert resultant_int([2], [1, 0, 1]) == 4


def test_resultant_swap_sign():
    rng = random.Random(11)
    for _ in range(25):
        f = [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 5))] + [rng.randrange(1, 5)]
        g = [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 5))] + [rng.randrange(1, 5)]
        df, dg = len(f) - 1, len(g) - 1
        assert resultant_int(f, g) == (-1) ** (df * dg) * resultant_int(g, f)


def test_hensel_factor_lift():
    chi, psi = hensel_factor_lift([8, 6, 1], [-1, 1], [1, 1], 3, 2)
    assert chi == [2, 1] and psi == [4, 1]
    # v = 1 returns the inputs mod ell
    chi, psi = hensel_factor_lift([8, 6, 1], [-1, 1], [1, 1], 3, 1)
    assert chi == [2, 1] and psi == [1, 1]
    with pytest.raises(NotCoprime):
        hensel_factor_lift([1, 2, 1], [1, 1], [1, 1], 3, 2)


def test_hensel_factor_lift_big():
    # lift a factorization of a sextic mod 2 to high accuracy:
    # x^6 + 1 = (x+1)^2 (x^2+x+1)^2 mod 2 and the two squares are coprime
    L = [125, 0, 0, 0, 0, 0, 1]    # x^6 + 125
    chi0, psi0 = [1, 0, 1], [1, 0, 1, 0, 1]
    chi, psi = hensel_factor_lift(L, chi0, psi0, 2, 20)
    m = 2 ** 20
    prod = [0] * 7
    for i, x in enumerate(chi):
        for j, y in enumerate(psi):
            prod[i + j] = (prod[i + j] + x * y) % m
    assert prod == [c % m for c in L]


def test_elem_serialization():
    r = make_ring(5, 3, 4)
    rng = random.Random(2)
    x = ZqElem(r, r.rand_elem(rng))
    assert ZqElem.from_json(r, x.to_json()) == x
    import galrep.zq as zq
    r2 = zq.ZqRing.from_json(r.to_json())
    assert r2 == r


def test_reduce_to_downward():
    r = make_ring(17, 2, 8)
    rng = random.Random(4)
    x = ZqElem(r, r.rand_elem(rng))
    y = x.reduce_to(3)
    assert y.ring.e == 3
    assert all(c % 17 ** 3 == cc for c, cc in zip(x.coeffs(), y.coeffs()))


def test_teichmuller():
    r = make_ring(17, 3, 10, seed=1)
    rng = random.Random(9)
    x = r.rand_elem(rng)
    t = r.teichmuller(x)
    assert r.powz(t, 17 ** 3) == t
    assert [d % 17 for d in r.digits(t)] == [d % 17 for d in r.digits(x)]
