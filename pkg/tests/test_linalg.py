import random

import pytest

from galrep.errors import RankDeficient, ShapeMismatch
from galrep.linalg import (MatZq, det, eqn_complement, eqn_matrix, howell_canonical,
                           howell_kernel, invert, ker_complement, kernel_basis,
                           perturb_eqn, perturb_kernel, rank_mod_p, unit_pivot_rows)
from galrep.zq import make_ring

from helpers import brute_kernel_count, matrix_in_span, module_size


def rand_mat(ring, rng, m, n):
    return MatZq(ring, m, n, [[ring.rand_elem(rng) for _ in range(n)] for _ in range(m)])


def test_kernel_identity():
    ring = make_ring(3, 1, 2)
    K = howell_kernel(MatZq.identity(ring, 4))
    assert K.good.ncols == 0 and not K.discarded


def test_kernel_paper_example():
    # A = (1  p), e = 2: one good generator, a unit multiple of (-p, 1),
    # plus a discarded generator that is 0 mod p
    ring = make_ring(3, 1, 2)
    A = MatZq(ring, 1, 2, [[ring.from_int(1), ring.from_int(3)]])
    K = howell_kernel(A)
    assert K.discarded
    assert K.good.ncols == 1
    col = K.good.col(0)
    u = col[1]
    assert ring.is_unit(u)
    assert col[0] == ring.mul(u, ring.from_int(-3))
    assert K.all_gens.ncols == 2
    # the discarded generator is 0 mod p
    other = K.all_gens.col(1)
    assert all(d % 3 == 0 for x in other for d in ring.digits(x))


def test_kernel_empty_matrix():
    ring = make_ring(5, 1, 2)
    A = MatZq(ring, 0, 3, [])
    K = howell_kernel(A)
    assert K.good.ncols == 3
    assert howell_canonical(K.good) == howell_canonical(MatZq.identity(ring, 3))


def test_kernel_matches_brute_force():
    # the acceptance-grade sweep lives in test_acceptance; this is a quick version
    rng = random.Random(0)
    for trial in range(40):
        p = rng.choice([2, 3])
        e = rng.randrange(1, 4)
        n = rng.randrange(1, 5)
        if p ** (e * n) > 3 ** 9:
            continue
        m = rng.randrange(1, 5)
        ring = make_ring(p, 1, e)
        A = rand_mat(ring, rng, m, n)
        K = howell_kernel(A)
        # every generator is in the kernel
        for j in range(K.all_gens.ncols):
            col = K.all_gens.col(j)
            assert all(x == 0 for x in A.mul_vec(col))
        # and the generators span the whole kernel
        assert module_size(ring, K.all_gens) == brute_kernel_count(ring, A) \
            if K.all_gens.ncols else brute_kernel_count(ring, A) == 1


def test_howell_canonical_is_canonical():
    rng = random.Random(2)
    for _ in range(20):
        p = rng.choice([2, 3])
        ring = make_ring(p, 1, 3)
        n = rng.randrange(1, 4)
        k = rng.randrange(1, 4)
        M = rand_mat(ring, rng, n, k)
        # shuffle the generating set with random column operations
        cols = M.cols()
        for _ in range(6):
            i, j = rng.randrange(k), rng.randrange(k)
            if i != j:
                c = ring.rand_elem(rng)
                cols[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(cols[i], cols[j])]
            u = ring.rand_elem(rng)
            if ring.is_unit(u):
                cols[j] = [ring.mul(u, x) for x in cols[j]]
        M2 = MatZq.from_cols(ring, cols, nrows=n)
        assert howell_canonical(M) == howell_canonical(M2)


def test_good_reduction_count():
    rng = random.Random(3)
    ring = make_ring(5, 2, 4, seed=2)
    for _ in range(10):
        m, n = 4, 6
        A = rand_mat(ring, rng, m, n)   # random: full rank mod p almost surely
        r = rank_mod_p(A)
        K = howell_kernel(A)
        assert K.good.ncols == n - r
        assert not K.discarded
        for j in range(K.good.ncols):
            assert all(x == 0 for x in A.mul_vec(K.good.col(j)))


def test_tower_consistency():
    # integer matrices of full rank mod p have good reduction, so the kernel
    # over p^4 reduces to the kernel over p^2 as a module
    rng = random.Random(4)
    for p in (2, 3):
        hi = make_ring(p, 1, 4)
        lo = hi.with_accuracy(2)
        done = 0
        while done < 10:
            rows = [[rng.randrange(100) for _ in range(4)] for _ in range(2)]
            Ahi = MatZq(hi, 2, 4, [[hi.from_int(c) for c in r] for r in rows])
            if rank_mod_p(Ahi) < 2:
                continue
            done += 1
            Alo = Ahi.reduce_to(lo)
            Khi = howell_kernel(Ahi).good
            Klo = howell_kernel(Alo).good
            red = Khi.reduce_to(lo)
            assert red.ncols == Klo.ncols == 2
            assert howell_canonical(red) == howell_canonical(Klo)


def test_eqn_complement_identity_case():
    ring = make_ring(7, 1, 3)
    n, r = 5, 2
    A = MatZq.from_cols(ring, [[ring.one if i == j else 0 for i in range(n)] for j in range(r)],
                        nrows=n)
    rig = eqn_complement(A)
    assert rig.supp_cols == [2, 3, 4]
    ident = MatZq.identity(ring, n)
    assert rig.F.rows == ident.take_rows([0, 1]).rows
    assert rig.E.rows == ident.take_rows([2, 3, 4]).rows


def test_eqn_complement_identities():
    rng = random.Random(5)
    for (p, a, e) in [(5, 1, 3), (3, 2, 2), (17, 2, 4)]:
        ring = make_ring(p, a, e, seed=1)
        for _ in range(8):
            n, r = 6, 3
            A = rand_mat(ring, rng, n, r)
            try:
                rig = eqn_complement(A)
            except RankDeficient:
                continue
            assert rig.E.mul(A).is_zero()
            FA = rig.F.mul(A)
            assert FA == MatZq.identity(ring, r)
            # build S explicitly and check E S = I, F S = 0
            scols = []
            for i in rig.supp_cols:
                col = [0] * n
                col[i] = ring.one
                scols.append(col)
            S = MatZq.from_cols(ring, scols, nrows=n)
            assert rig.E.mul(S) == MatZq.identity(ring, n - r)
            assert rig.F.mul(S).is_zero()


def test_supp_depends_only_on_mod_p():
    rng = random.Random(6)
    ring = make_ring(7, 1, 2)
    for _ in range(20):
        A = rand_mat(ring, rng, 5, 2)
        try:
            rig = eqn_complement(A)
        except RankDeficient:
            continue
        # perturb by a multiple of p
        B = MatZq(ring, 5, 2,
                  [[ring.add(x, ring.pmul(ring.rand_elem(rng), 1)) for x in row]
                   for row in A.rows])
        assert eqn_complement(B).supp_cols == rig.supp_cols


def test_perturb_eqn_matches_recompute():
    rng = random.Random(7)
    for (p, a) in [(3, 1), (5, 2)]:
        e_half = 2
        ring = make_ring(p, a, 2 * e_half, seed=3)
        for _ in range(8):
            n, r = 5, 2
            A = rand_mat(ring, rng, n, r)
            try:
                rig = eqn_complement(A)
            except RankDeficient:
                continue
            H = MatZq(ring, n, r,
                      [[ring.pmul(ring.rand_elem(rng), e_half) for _ in range(r)]
                       for _ in range(n)])
            E2 = perturb_eqn(rig, H)
            rig2 = eqn_complement(A.add(H))
            assert rig2.supp_cols == rig.supp_cols
            assert E2 == rig2.E
            # H = 0 keeps E unchanged
            assert perturb_eqn(rig, MatZq.zeros(ring, n, r)) == rig.E


def test_perturb_eqn_square_degenerate():
    ring = make_ring(5, 1, 4)
    rng = random.Random(8)
    A = rand_mat(ring, rng, 3, 3)
    try:
        rig = eqn_complement(A)
    except RankDeficient:
        return
    assert rig.E.nrows == 0
    H = MatZq(ring, 3, 3, [[ring.pmul(ring.rand_elem(rng), 2) for _ in range(3)]
                           for _ in range(3)])
    assert perturb_eqn(rig, H).nrows == 0


def test_perturb_kernel_matches_recompute_and_duality():
    rng = random.Random(9)
    ring = make_ring(3, 1, 4, seed=4)
    for _ in range(8):
        r, n = 2, 5
        A = rand_mat(ring, rng, r, n)
        try:
            L, K, supp = ker_complement(A)
        except RankDeficient:
            continue
        assert A.mul(K).is_zero()
        assert A.mul(L) == MatZq.identity(ring, r)
        H = MatZq(ring, r, n, [[ring.pmul(ring.rand_elem(rng), 2) for _ in range(n)]
                               for _ in range(r)])
        K2 = perturb_kernel(A, L, K, H)
        _, K2ref, _ = ker_complement(A.add(H))
        assert K2 == K2ref
        # transpose duality against perturb_eqn
        rig = eqn_complement(A.transpose())
        E2 = perturb_eqn(rig, H.transpose())
        assert E2.transpose() == K2


def test_perturbation_requires_half_accuracy():
    ring = make_ring(3, 1, 4)
    rng = random.Random(10)
    A = rand_mat(ring, rng, 4, 2)
    rig = eqn_complement(A)
    H = MatZq(ring, 4, 2, [[ring.pmul(ring.rand_elem(rng), 1) for _ in range(2)]
                           for _ in range(4)])
    with pytest.raises(ShapeMismatch):
        perturb_eqn(rig, H)


def test_invert_and_det():
    ring = make_ring(7, 2, 3, seed=5)
    rng = random.Random(11)
    for _ in range(5):
        A = rand_mat(ring, rng, 4, 4)
        try:
            Ai = invert(A)
        except RankDeficient:
            continue
        assert A.mul(Ai) == MatZq.identity(ring, 4)
    ring1 = make_ring(7, 1, 1)
    M = MatZq(ring1, 2, 2, [[1, 2], [3, 4]])
    assert det(M) == (1 * 4 - 2 * 3) % 7


def test_eqn_matrix_cuts_out_span():
    rng = random.Random(12)
    ring = make_ring(5, 2, 3, seed=6)
    M = rand_mat(ring, rng, 6, 2)
    K = eqn_matrix(M)
    assert K.nrows == 4
    assert K.mul(M).is_zero()


def test_unit_pivot_rows_deficient():
    ring = make_ring(5, 1, 2)
    A = MatZq(ring, 3, 2, [[ring.from_int(5), 0], [ring.from_int(10), 0], [0, ring.from_int(5)]])
    with pytest.raises(RankDeficient):
        unit_pivot_rows(A)


def test_kernel_in_span_membership_helper():
    ring = make_ring(3, 1, 3)
    rng = random.Random(13)
    A = rand_mat(ring, rng, 3, 4)
    K = howell_kernel(A)
    for j in range(K.good.ncols):
        assert matrix_in_span(ring, K.good.col(j), K.all_gens)
