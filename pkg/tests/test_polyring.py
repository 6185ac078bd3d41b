import random

from galrep.polyring import (charpoly_modp, companion, ddf_degree_multiset,
                             distinct_degree_factor, factor_modp, is_irreducible,
                             mat_inv_modp, mat_kernel_modp, mat_mul_modp, mat_pow_order,
                             order_of_x, pmul, pmod, prime_factors,qgcd,
                             random_irreducible, squarefree_decomposition)


def test_prime_factors():
    assert prime_factors(47059600) == {2: 4, 5: 2, 7: 6}
    assert prime_factors(1) == {}
    assert prime_factors(63) == {3: 2, 7: 1}


def test_irreducible():
    assert is_irreducible([1, 1, 1], 2)          # x^2+x+1
    assert not is_irreducible([1, 0, 1], 2)      # (x+1)^2
    assert is_irreducible([1, 2, 0, 1], 5)
    rng = random.Random(0)
    for p, n in [(2, 6), (17, 6), (5, 3)]:
        f = random_irreducible(p, n, rng)
        assert len(f) == n + 1 and f[-1] == 1
        assert is_irreducible(f, p)


def test_factor_modp_roundtrip():
    rng = random.Random(5)
    for p in (2, 3, 7):
        for _ in range(15):
            f = [rng.randrange(p) for _ in range(rng.randrange(2, 7))] + [1]
            facs = factor_modp(f, p, rng)
            prod = [1]
            for g, e in facs:
                assert is_irreducible(g, p)
                for _ in range(e):
                    prod = pmul(prod, g, p)
            assert prod == pmod(f, p)


def test_squarefree_decomposition():
    # x^6+1 = (x^3+1)^2 mod 2 with x^3+1 = (x+1)(x^2+x+1) squarefree
    parts = squarefree_decomposition([1, 0, 0, 0, 0, 0, 1], 2)
    assert sorted((tuple(g), e) for g, e in parts) == [((1, 0, 0, 1), 2)]
    # x^6 + 125 mod 2 is the same polynomial
    parts2 = squarefree_decomposition(pmod([125, 0, 0, 0, 0, 0, 1], 2), 2)
    assert parts == parts2


def test_distinct_degree():
    # x^2 - 2x - 1 mod 7 has roots 5 and 4
    out = distinct_degree_factor([6, 5, 1], 7)
    assert len(out) == 1 and out[0][1] == 1
    facs = factor_modp([6, 5, 1], 7, random.Random(0))
    roots = sorted((-g[0]) % 7 for g, _ in facs)
    assert roots == [4, 5]


def test_order_of_x():
    assert order_of_x([(-5) % 7, 1], 7) == 6     # x - 5 mod 7
    assert order_of_x([(-4) % 7, 1], 7) == 3
    assert order_of_x([1, 0, 1], 5) == 4         # x^2 + 1 mod 5
    assert order_of_x([1, 1, 1], 2) == 3


def test_charpoly_and_companion():
    rng = random.Random(1)
    for p, d in [(7, 2), (2, 6), (5, 4)]:
        f = [rng.randrange(p) for _ in range(d)] + [1]
        M = companion(f, p)
        assert charpoly_modp(M, p) == pmod(f, p)
    # random matrices: charpoly(M) vanishes at eigenvector-free sanity level
    for p in (3, 7):
        for _ in range(10):
            n = rng.randrange(1, 5)
            M = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            cp = charpoly_modp(M, p)
            assert len(cp) == n + 1 and cp[-1] == 1
            # Cayley-Hamilton
            acc = [[0] * n for _ in range(n)]
            Mk = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            for c in cp:
                for i in range(n):
                    for j in range(n):
                        acc[i][j] = (acc[i][j] + c * Mk[i][j]) % p
                Mk = mat_mul_modp(Mk, M, p)
            assert all(x == 0 for row in acc for x in row)


def test_mat_modp_helpers():
    p = 5
    M = [[1, 2], [3, 4]]
    Mi = mat_inv_modp(M, p)
    assert mat_mul_modp(M, Mi, p) == [[1, 0], [0, 1]]
    K = mat_kernel_modp([[1, 2, 3]], p)
    assert len(K) == 2
    for v in K:
        assert (v[0] + 2 * v[1] + 3 * v[2]) % p == 0
    # order of the companion matrix of x^2-2x-1 mod 7 is 6
    assert mat_pow_order(companion([6, 5, 1], 7), 7) == 6


def test_ddf_degree_multiset():
    # (x-1)(x+1)(x^2+1) mod 3: x^2+1 irreducible mod 3
    f = pmul(pmul([-1, 1], [1, 1], 3), [1, 0, 1], 3)
    assert ddf_degree_multiset(f, 3) == [1, 1, 2]


def test_qgcd():
    from fractions import Fraction
    f = [Fraction(-1), Fraction(0), Fraction(1)]          # x^2 - 1
    g = [Fraction(1), Fraction(1)]                        # x + 1
    assert qgcd(f, g) == [Fraction(1), Fraction(1)]
    assert qgcd(f, [Fraction(2), Fraction(2)]) == [Fraction(1), Fraction(1)]
