"""galrep: mod-l Galois representations occurring in the l-torsion of
Jacobians of curves over Q, computed through divisor-subspace Jacobian
arithmetic over p-adic chain rings."""

from .curves import CurveSpec, ECluster, Poly2, parse_poly
from .context import (MakdisiContext, divisor_class_from_points, init_context,
                      random_point)
from .errors import GalrepError
from .galois import (ReprResult, ReprTask, compute_representation, frobenius_matrix,
                     frobenius_order, jacobian_order, orbit_lengths_from_charpoly,
                     orbit_representatives, torsion_space_basis)
from .jacobian import (JacPoint, add_flip, add_points, div_add, div_sub,
                       equal_points, frobenius_point, is_zero_point, membership,
                       naf_chain, neg_point, scalar_mul, zero_point)
from .evalmap import (EvalMapSpec, build_chart_spec, build_eval_spec, chart_coords,
                      eval_point)
from .lfactor import ZetaData, count_points, zeta_numerator
from .lift import lift_once, lift_torsion, lift_torsion_chart, lift_torsion_mul
from .linalg import (MatZq, RigidEqn, eqn_complement, howell_canonical, howell_kernel,
                     ker_complement, kernel_basis, perturb_eqn, perturb_kernel)
from .pairings import (PairingContext, eval_at_divisor, frey_ruck,
                       frey_ruck_linearized)
from .zq import (ZqElem, ZqRing, dlog_mu, frobenius_auto, hensel_factor_lift,
                 hensel_root, make_ring, rational_reconstruct, resultant_int)

__version__ = "0.1.0"
