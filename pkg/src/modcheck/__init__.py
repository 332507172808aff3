"""Desk-scale verification of modular-curve, q-expansion and elliptic-curve identities."""

__version__ = "0.1.0"

from .elliptic import (  # noqa: E402
    WeierstrassCurve,
    count_points,
    discriminant,
    from_legendre,
    reduce_mod_p,
    trace_ap,
)
from .lfunctions import eichler_shimura_check, verify_rationality  # noqa: E402
from .qseries import QSeries, j_invariant, newform_level11  # noqa: E402

__all__ = [
    "QSeries",
    "WeierstrassCurve",
    "count_points",
    "discriminant",
    "eichler_shimura_check",
    "from_legendre",
    "j_invariant",
    "newform_level11",
    "reduce_mod_p",
    "trace_ap",
    "verify_rationality",
]
