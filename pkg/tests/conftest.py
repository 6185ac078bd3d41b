import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from galrep.curves import CurveSpec
from galrep.context import init_context
from galrep.zq import make_ring

CONFIG_DIR = Path(__file__).parent.parent / "configs"


def load_config(name):
    return json.loads((CONFIG_DIR / name).read_text())


@pytest.fixture(scope="session")
def x1_curve():
    return CurveSpec.from_json(load_config("x1_13_mod7.json")["curve"])


@pytest.fixture(scope="session")
def klein_curve():
    return CurveSpec.from_json(load_config("klein_mod2.json")["curve"])


@pytest.fixture(scope="session")
def elliptic_curve():
    return CurveSpec.from_json(load_config("elliptic_j0_mod5.json")["curve"])


@pytest.fixture(scope="session")
def x1_ctx8(x1_curve):
    """X1(13) context over Z_{17^6}/17^8: enough accuracy for lifting tests."""
    ring = make_ring(17, 6, 8, seed=1)
    return init_context(x1_curve, ring, seed=1)


@pytest.fixture(scope="session")
def x1_ctx1(x1_ctx8):
    return x1_ctx8.at(1)


@pytest.fixture(scope="session")
def klein_ctx4(klein_curve):
    ring = make_ring(5, 6, 4, seed=1)
    return init_context(klein_curve, ring, seed=1)


@pytest.fixture(scope="session")
def klein_ctx1(klein_ctx4):
    return klein_ctx4.at(1)


@pytest.fixture(scope="session")
def ell_ctx8(elliptic_curve):
    ring = make_ring(11, 4, 8, seed=1)
    return init_context(elliptic_curve, ring, seed=1)


@pytest.fixture(scope="session")
def x1_lpoly(x1_curve):
    from galrep.lfactor import zeta_numerator
    return zeta_numerator(x1_curve, 17).Lp
