"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the command line
front end copies into its reports.
"""


class CompactKitError(Exception):
    code = "error"


class InvalidExponent(CompactKitError, ValueError):
    code = "invalid-exponent"


class GridMismatch(CompactKitError, ValueError):
    code = "grid-mismatch"


class EmptyFamily(CompactKitError, ValueError):
    code = "empty-family"


class ShapeError(CompactKitError, ValueError):
    code = "shape-error"


class DimensionError(CompactKitError, ValueError):
    code = "dimension-error"


class TilingMisaligned(CompactKitError, ValueError):
    code = "tiling-misaligned"


class ExponentUndefined(CompactKitError, ValueError):
    code = "exponent-undefined"


class ExponentError(CompactKitError, ValueError):
    code = "exponent-error"


class ContractViolation(CompactKitError):
    """The claimed (delta, radius) contract failed on the actual members."""

    code = "contract-violation"


class LandmarksInsufficient(CompactKitError, ValueError):
    code = "landmarks-insufficient"

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class BoundsViolated(CompactKitError, ValueError):
    code = "bounds-violated"

    def __init__(self, message, member=None):
        super().__init__(message)
        self.member = member


class NotCertified(CompactKitError):
    """No certificate at the tabulated resolution.

    This is a resolution verdict, never a disproof of total boundedness.
    ``modulus`` names the quantity that could not be controlled
    (``"tail"``, ``"translation"``, ``"spectral-tail"`` ...).
    """

    code = "not-certified"

    def __init__(self, message, modulus=None):
        super().__init__(message)
        self.modulus = modulus


class NotCertifiableAtResolution(NotCertified):
    code = "not-certifiable-at-resolution"


class PrerequisitesUnmet(NotCertified):
    code = "prerequisites-unmet"


class ManifestError(CompactKitError, ValueError):
    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class ParseError(ManifestError):
    code = "parse-error"


class SizeMismatch(ManifestError):
    code = "size-mismatch"


class NonFiniteValue(ManifestError):
    code = "non-finite-value"
