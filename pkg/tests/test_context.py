import pytest

from galrep.context import divisor_class_from_points, init_context, random_point
from galrep.errors import PointSearchExhausted, RankFailure
from galrep.jacobian import membership
from galrep.util import rng_for
from galrep.zq import make_ring


def test_x1_context_dimensions(x1_ctx8):
    ctx = x1_ctx8
    assert ctx.n_z == 26 and ctx.d_w == 4
    assert ctx.M_V.ncols == 9 and ctx.M_V3.ncols == 14
    assert ctx.K_V.mul(ctx.M_V).is_zero()
    assert ctx.K_V3.mul(ctx.M_V3).is_zero()


def test_klein_context_dimensions(klein_ctx4):
    ctx = klein_ctx4
    assert ctx.n_z == 36 and ctx.d_w == 5
    assert ctx.M_V.ncols == 12 and ctx.M_V3.ncols == 19


def test_frobenius_permutation_exact(x1_ctx8):
    ctx = x1_ctx8
    f = ctx.ring.frob
    for i, (x, y) in enumerate(ctx.points):
        jx, jy = ctx.points[ctx.frob_perm[i]]
        assert f(x) == jx and f(y) == jy


def test_points_distinct_and_on_curve(x1_ctx8):
    from galrep.curves import RingPoly2
    ctx = x1_ctx8
    ring = ctx.ring
    fp = RingPoly2(ring, ctx.curve.f)
    keys = set()
    for (x, y) in ctx.points:
        assert fp.eval(x, y) == 0
        keys.add(ctx.residue_key(x, y))
    assert len(keys) == ctx.n_z


def test_reduction_views_share_family(x1_ctx8):
    v1 = x1_ctx8.at(1)
    v2 = x1_ctx8.at(2)
    assert v1 is x1_ctx8.at(1)
    assert v2.ring.e == 2
    assert v1.M_V == x1_ctx8.M_V.reduce_to(v1.ring)


def test_random_point_passes_membership(x1_ctx1):
    rng = rng_for(0, "ctxtest")
    for _ in range(3):
        x = random_point(x1_ctx1, rng)
        assert x.W.ncols == x1_ctx1.d_w
        assert membership(x1_ctx1, x.W, rng)


def test_random_point_deterministic(x1_ctx1):
    a = random_point(x1_ctx1, rng_for(7, "det"))
    b = random_point(x1_ctx1, rng_for(7, "det"))
    assert a.W == b.W


def test_divisor_class_collision_rejected(x1_ctx1):
    pts = [0, 0, 1, 2, 3]
    with pytest.raises(RankFailure):
        divisor_class_from_points(x1_ctx1, pts)


def test_point_search_exhausted(x1_curve):
    # F_3 is far too small to host 26 suitable points
    ring = make_ring(3, 1, 2, seed=0)
    with pytest.raises(PointSearchExhausted):
        init_context(x1_curve, ring, seed=0)


def test_rebuild_at_higher_accuracy_is_consistent(x1_curve, x1_ctx8):
    # the accuracy-16 context reduces to the accuracy-8 one entry-wise
    ring16 = make_ring(17, 6, 16, seed=1)
    ctx16 = init_context(x1_curve, ring16, seed=1)
    red = ctx16.ring.reduce_elem
    r8 = x1_ctx8.ring
    assert [(red(x, r8), red(y, r8)) for (x, y) in ctx16.points] == x1_ctx8.points
    assert ctx16.frob_perm == x1_ctx8.frob_perm
    assert ctx16.M_V.reduce_to(r8) == x1_ctx8.M_V
    assert ctx16.K_V3.reduce_to(r8) == x1_ctx8.K_V3
