"""Validated density matrices and the isotropic state family.

The isotropic family mixes white noise with the maximally entangled state:
rho(d, p) = (1 - p) I / d^2 + p |Psi+><Psi+| with |Psi+> = sum_i |ii> / sqrt(d)
and 0 <= p <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    LinalgError,
    as_matrix,
    eig_hermitian,
    identity,
    max_abs,
    partial_trace,
)

__all__ = [
    "InvalidStateError",
    "DensityMatrix",
    "IsotropicParams",
    "max_entangled",
    "isotropic",
    "validate",
    "state_diagnostics",
    "state_to_json",
    "state_from_json",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class InvalidStateError(ValueError):
    """A matrix failed one of the density-matrix invariants."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A quantum state with its subsystem structure.

    dims is (dA, dB) for a bipartite state or (d,) for a single system.
    Construction checks shape, hermiticity and unit trace; positivity is the
    job of validate(), which trusted constructors do not need (the spectra of
    max_entangled and isotropic are known in closed form).
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if len(dims) not in (1, 2) or any(d < 1 for d in dims):
            raise InvalidStateError(f"bad subsystem dims {dims}")
        if int(np.prod(dims)) != m.shape[0]:
            raise InvalidStateError(
                f"dims {dims} do not factor dimension {m.shape[0]}"
            )
        herm = max_abs(m - m.conj().T)
        if herm >= HERMITICITY_TOL:
            raise InvalidStateError(f"not Hermitian (residual {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) >= TRACE_TOL:
            raise InvalidStateError(f"trace {tr:.12g} is not 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    def reduced(self, keep: str) -> np.ndarray:
        """Marginal on subsystem "A" or "B" of a bipartite state."""
        if not self.is_bipartite:
            raise InvalidStateError("reduced() needs a bipartite state")
        return partial_trace(self.matrix, (self.dims[0], self.dims[1]), keep)


@dataclass(frozen=True)
class IsotropicParams:
    """Local dimension d >= 2 and mixing weight p in [0, 1]."""

    d: int
    p: float

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 2:
            raise InvalidStateError(f"d must be an integer >= 2, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidStateError(f"p must lie in [0, 1], got {self.p}")


def max_entangled(d: int) -> DensityMatrix:
    """Projector onto |Psi+> = sum_i |ii> / sqrt(d), as a (d, d) state."""
    if int(d) != d or d < 2:
        raise InvalidStateError(f"d must be an integer >= 2, got {d}")
    d = int(d)
    vec = np.zeros(d * d, dtype=complex)
    for i in range(d):
        vec[i * d + i] = 1.0 / np.sqrt(d)
    return DensityMatrix(np.outer(vec, vec.conj()), (d, d))


def isotropic(params: IsotropicParams) -> DensityMatrix:
    """The isotropic state (1 - p) I / d^2 + p |Psi+><Psi+|.

    Spectrum: (1 - p) / d^2 with multiplicity d^2 - 1, and (1 - p) / d^2 + p
    once, so the result is a valid state for every p in [0, 1].
    """
    d, p = int(params.d), float(params.p)
    noise = identity(d * d) * ((1.0 - p) / (d * d))
    return DensityMatrix(noise + p * max_entangled(d).matrix, (d, d))


def state_diagnostics(m) -> dict:
    """Measure every density-matrix invariant on an arbitrary square matrix."""
    m = as_matrix(m)
    herm = max_abs(m - m.conj().T)
    tr = complex(np.trace(m))
    info: dict = {
        "dim": int(m.shape[0]),
        "hermiticity_residual": float(herm),
        "trace_real": float(tr.real),
        "trace_imag": float(tr.imag),
        "min_eigenvalue": None,
        "valid": False,
        "reason": None,
    }
    if herm >= HERMITICITY_TOL:
        info["reason"] = f"not Hermitian (residual {herm:.3e})"
        return info
    if abs(tr - 1.0) >= TRACE_TOL:
        info["reason"] = f"trace {tr.real:.12g} is not 1"
        return info
    lo = min(eig_hermitian(m).eigenvalues)
    info["min_eigenvalue"] = float(lo)
    if lo < -PSD_TOL:
        info["reason"] = f"negative eigenvalue {lo:.3e}"
        return info
    info["valid"] = True
    return info


def validate(m, dims: tuple[int, ...] | None = None) -> DensityMatrix:
    """Full validation (hermiticity, trace, positivity) of an untrusted matrix.

    Returns the DensityMatrix on success and raises InvalidStateError carrying
    the first failed invariant and its measured residual otherwise. When dims
    is omitted the matrix is treated as a single system.
    """
    m = as_matrix(m)
    info = state_diagnostics(m)
    if not info["valid"]:
        raise InvalidStateError(info["reason"])
    return DensityMatrix(m, dims if dims is not None else (m.shape[0],))


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _matrix_from_json(rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidStateError(f"bad matrix JSON: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidStateError(
            "matrix JSON must be a square grid of [re, im] pairs"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def state_to_json(state: DensityMatrix) -> dict:
    """Serialize to {"dims": [...], "matrix": [[[re, im], ...], ...]}."""
    return {
        "dims": [int(d) for d in state.dims],
        "matrix": _matrix_to_json(state.matrix),
    }


def state_from_json(obj: dict) -> DensityMatrix:
    """Parse and fully validate the JSON state format."""
    if not isinstance(obj, dict) or "dims" not in obj or "matrix" not in obj:
        raise InvalidStateError('state JSON needs "dims" and "matrix" keys')
    dims = obj["dims"]
    if not isinstance(dims, (list, tuple)) or len(dims) not in (1, 2):
        raise InvalidStateError(f'bad "dims" {dims!r}: expected [d] or [dA, dB]')
    try:
        return validate(_matrix_from_json(obj["matrix"]), tuple(int(d) for d in dims))
    except LinalgError as exc:
        raise InvalidStateError(str(exc)) from None
