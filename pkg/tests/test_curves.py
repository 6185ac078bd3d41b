from fractions import Fraction

import pytest

from galrep.curves import CurveSpec, ECluster, parse_poly
from galrep.errors import ConfigError


def test_parser_basics():
    p = parse_poly("y^2 + (x^3+x+1)*y - (x^5+x^4)")
    assert p.c[(0, 2)] == 1
    assert p.c[(3, 1)] == 1
    assert p.c[(5, 0)] == -1
    assert p.eval_q(0, 0) == 0
    q = parse_poly("1/2 - 3*x^2")
    assert q.c[(0, 0)] == Fraction(1, 2)
    assert q.c[(2, 0)] == -3


def test_parser_rejects():
    with pytest.raises(ConfigError):
        parse_poly("x +")
    with pytest.raises(ConfigError):
        parse_poly("z + 1", allowed=("x", "y"))
    with pytest.raises(ConfigError):
        parse_poly("1/(x+1)")
    with pytest.raises(ConfigError):
        parse_poly("x ^ -2")


def test_cluster_on_curve_validation(x1_curve):
    # a cluster whose points are off the curve must be rejected
    bad = {
        "f": "y^2 - (x^3+1)", "genus": 1, "d0": 3,
        "basis": [{"num": "1"}, {"num": "x"}, {"num": "y"}],
        "E1": [["0", "1"], ["2", "3"]],
        "E2": [["0", "-1"], ["2", "2"]],
    }
    with pytest.raises(ConfigError):
        CurveSpec.from_json(bad)


def test_cluster_degree_and_membership():
    cl = ECluster.from_json({"min_poly": "t^3 + t^2 + 1", "x": "t", "y": "t"})
    assert cl.degree == 3
    rt = ECluster.from_json(["1", "-2"])
    assert rt.degree == 1 and rt.point == (1, -2)


def test_curve_spec_invariants(x1_curve, klein_curve, elliptic_curve):
    assert x1_curve.n_z == 26 and x1_curve.d_w == 4
    assert klein_curve.n_z == 36 and klein_curve.d_w == 5
    assert elliptic_curve.n_z == 16 and elliptic_curve.d_w == 3


def test_bad_degrees():
    with pytest.raises(ConfigError):
        CurveSpec.from_json({
            "f": "y^2 - (x^3+1)", "genus": 1, "d0": 2,
            "basis": [{"num": "1"}, {"num": "x"}],
            "E1": [["0", "1"]], "E2": [["0", "-1"]],
        })
