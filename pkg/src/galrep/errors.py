"""Exception hierarchy shared by all modules."""


class GalrepError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(GalrepError):
    """Invalid or unsupported configuration data."""


class NonSimpleRoot(GalrepError):
    """Hensel lifting attempted at a root where the derivative vanishes mod p."""


class NotInSubgroup(GalrepError):
    """Discrete log target is not a power of the given root of unity."""


class NoReconstruction(GalrepError):
    """Rational reconstruction failed; the working accuracy is too low."""


class NotCoprime(GalrepError):
    """Hensel factor lifting requires coprime factors mod l."""


class RankDeficient(GalrepError):
    """Matrix does not have the mod-p rank required by the operation."""


class ShapeMismatch(GalrepError):
    """Matrix dimensions incompatible with the requested operation."""


class RankFailure(GalrepError):
    """A structure matrix or vanishing subspace has the wrong dimension."""


class PointSearchExhausted(GalrepError):
    """Could not collect enough suitable evaluation points over this field."""


class GenerationStalled(GalrepError):
    """Randomized generation loop exceeded its retry budget."""


class DimensionOverflow(GalrepError):
    """A subspace came out larger than its Riemann-Roch dimension."""


class EvalFail(GalrepError):
    """Evaluation map hit a dimension gate or non-unit denominator."""


class UnitFailure(EvalFail):
    """Dehomogenization entry is not a unit."""


class PairingFailure(GalrepError):
    """Frey-Rueck pairing failed repeatedly despite re-randomization."""


class LiftFailure(GalrepError):
    """p-adic lifting could not solve the deformation system."""


class ChartDegenerate(GalrepError):
    """Coordinate chart is not an immersion at the origin; redraw E1/E2."""


class ModelUnsupported(GalrepError):
    """Curve model not covered by the naive point-counting helper."""


class BudgetExceeded(GalrepError):
    """Enumeration budget exceeded."""


class CollisionPersistent(GalrepError):
    """Evaluated torsion values kept colliding after all evaluation redraws."""
