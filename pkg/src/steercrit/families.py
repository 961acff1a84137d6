"""The two built-in isotropic test families.

"qubit-xz": d = 2 isotropic states probed with the spin pair (Sx, Sz).
"qutrit-b1b2": d = 3 isotropic states probed with the qutrit pair (B1, B2).
Both use the default transpose pairing.
"""

from __future__ import annotations

from .observables import Observable, qutrit_triplet, spin_half
from .states import DensityMatrix, IsotropicParams, isotropic

__all__ = [
    "FAMILY_QUBIT_XZ",
    "FAMILY_QUTRIT_B1B2",
    "FAMILIES",
    "family_for_dimension",
    "family_dimension",
    "family_observables",
    "family_state",
    "family_descriptor",
]

FAMILY_QUBIT_XZ = "qubit-xz"
FAMILY_QUTRIT_B1B2 = "qutrit-b1b2"
FAMILIES = (FAMILY_QUBIT_XZ, FAMILY_QUTRIT_B1B2)

_DIMS = {FAMILY_QUBIT_XZ: 2, FAMILY_QUTRIT_B1B2: 3}


class FamilyError(ValueError):
    """Unknown family name or unsupported dimension."""


def family_for_dimension(d: int) -> str:
    for name, dim in _DIMS.items():
        if dim == int(d):
            return name
    raise FamilyError(f"no built-in family for local dimension {d}")


def family_dimension(family: str) -> int:
    if family not in _DIMS:
        raise FamilyError(f"unknown family {family!r} (expected one of {FAMILIES})")
    return _DIMS[family]


def family_observables(family: str) -> tuple[Observable, Observable]:
    family_dimension(family)
    if family == FAMILY_QUBIT_XZ:
        return spin_half("x"), spin_half("z")
    b1, b2, _ = qutrit_triplet()
    return b1, b2


def family_state(family: str, p: float) -> DensityMatrix:
    return isotropic(IsotropicParams(d=family_dimension(family), p=float(p)))


def family_descriptor(family: str, p: float) -> str:
    d = family_dimension(family)
    b1, b2 = family_observables(family)
    return f"isotropic(d={d}, p={p:.12g}); observables=({b1.label},{b2.label})"
