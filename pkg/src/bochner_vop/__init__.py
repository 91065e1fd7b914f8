"""Exact construction of vector orthogonal polynomial families.

A family is ``P_n = exp(q(G)) psi_n`` with ``G = R(H) Z`` in either the
differential realization (``psi_n = x^n``, ``Z = d/dx``) or the shift
realization (``psi_n = (x)_n``, ``Z = Delta``).  Everything is computed
over the rationals.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BandwidthExceeded,
    CorrespondenceMismatch,
    FitMismatch,
    IdentityViolation,
    InsufficientSamples,
    SpecError,
    VOPError,
)
from .exact import BasisTag, Poly, newton_interpolate, stirling_table, to_basis  # noqa: E402
from .family import Family, FamilySpec, Kind, generate, verify_family  # noqa: E402
from .mellin import MellinMap, intertwine_check, map_family, mellin_star  # noqa: E402
from .opalg import OperatorExpr, Realization  # noqa: E402
from .recurrence import (  # noqa: E402
    RecurrenceForm,
    RecurrenceTable,
    closed_form_qG,
    extract,
    fit,
    infer_d,
)

__all__ = [
    "__version__",
    "VOPError",
    "SpecError",
    "IdentityViolation",
    "FitMismatch",
    "BandwidthExceeded",
    "CorrespondenceMismatch",
    "InsufficientSamples",
    "Poly",
    "BasisTag",
    "stirling_table",
    "to_basis",
    "newton_interpolate",
    "OperatorExpr",
    "Realization",
    "Kind",
    "FamilySpec",
    "Family",
    "generate",
    "verify_family",
    "RecurrenceTable",
    "RecurrenceForm",
    "extract",
    "fit",
    "infer_d",
    "closed_form_qG",
    "MellinMap",
    "mellin_star",
    "map_family",
    "intertwine_check",
]
