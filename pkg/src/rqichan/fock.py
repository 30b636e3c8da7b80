"""Truncated Fock-space linear algebra: labelled multi-mode density matrices,
tensor products, partial traces and hermitian eigendecomposition.

Mode ordering is the declaration order of the label list; flattened indices
use mixed-radix strides with the last mode fastest (matching ``np.kron``).
Storage is dense; the intended regime is a handful of modes with per-mode
cutoffs up to a few hundred.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MODE_NAMES",
    "ModeLabel",
    "DensityMatrix",
    "PureState",
    "tensor_product",
    "partial_trace",
    "hermitian_eigendecomposition",
]

MODE_NAMES = ("A", "R", "Rbar", "A0", "A1", "R0", "R1", "Rbar0", "Rbar1")

HERMITICITY_TOL = 1e-12
EIG_NEGATIVE_TOL = 1e-10


@dataclass(frozen=True)
class ModeLabel:
    """A named field mode with its Fock-space truncation dimension."""

    name: str
    cutoff: int

    def __post_init__(self) -> None:
        if self.name not in MODE_NAMES:
            raise ValueError(f"unknown mode name {self.name!r}; expected one of {MODE_NAMES}")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


def _check_unique(modes: Sequence[ModeLabel]) -> None:
    names = [m.name for m in modes]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate mode labels in {names}")


def _resolve(modes: Sequence[ModeLabel], wanted: Iterable[ModeLabel | str]) -> list[int]:
    """Map labels (or bare names) onto positions in the mode list."""
    by_name = {m.name: i for i, m in enumerate(modes)}
    out = []
    for w in wanted:
        name = w.name if isinstance(w, ModeLabel) else w
        if name not in by_name:
            raise ValueError(f"mode {name!r} not present in {[m.name for m in modes]}")
        out.append(by_name[name])
    if len(set(out)) != len(out):
        raise ValueError("repeated mode in selection")
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian operator on the tensor product of the labelled modes."""

    modes: tuple[ModeLabel, ...]
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        _check_unique(modes)
        dim = int(np.prod([m.cutoff for m in modes])) if modes else 1
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (dim, dim):
            raise ValueError(f"entries shape {entries.shape} does not match mode dimension {dim}")
        if np.abs(entries - entries.conj().T).max(initial=0.0) > HERMITICITY_TOL:
            raise ValueError("entries are not hermitian within tolerance")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return tuple(m.cutoff for m in self.modes)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def renormalized(self) -> "DensityMatrix":
        """Rescale so the trace is exactly one."""
        tr = self.trace()
        if tr <= 0.0:
            raise ValueError("cannot renormalize a non-positive trace")
        return DensityMatrix(self.modes, self.entries / tr)

    def validate(self) -> None:
        """Check positivity down to the truncation noise floor."""
        eigs = np.linalg.eigvalsh(self.entries)
        if eigs.min(initial=0.0) < -EIG_NEGATIVE_TOL:
            raise ValueError(f"eigenvalue {eigs.min():.3e} below -{EIG_NEGATIVE_TOL}")


@dataclass(frozen=True)
class PureState:
    """State vector over the labelled modes (norm close to one under truncation)."""

    modes: tuple[ModeLabel, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        _check_unique(modes)
        dim = int(np.prod([m.cutoff for m in modes])) if modes else 1
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (dim,):
            raise ValueError(f"amplitude length {amplitudes.shape[0]} does not match dimension {dim}")
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        return PureState(self.modes, self.amplitudes / self.norm())

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.modes, np.outer(self.amplitudes, self.amplitudes.conj()))

    def reduced_density(self, keep: Iterable[ModeLabel | str]) -> DensityMatrix:
        """Density matrix of the kept modes with the rest traced out.

        Works directly on the amplitude tensor, so it stays cheap even when
        the full density matrix would not fit in memory.
        """
        keep_idx = _resolve(self.modes, keep)
        drop_idx = [i for i in range(len(self.modes)) if i not in keep_idx]
        tensor = self.amplitudes.reshape([m.cutoff for m in self.modes] or [1])
        tensor = np.transpose(tensor, keep_idx + drop_idx)
        keep_dim = int(np.prod([self.modes[i].cutoff for i in keep_idx])) if keep_idx else 1
        mat = tensor.reshape(keep_dim, -1)
        rho = mat @ mat.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        return DensityMatrix(tuple(self.modes[i] for i in keep_idx), rho)


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker composite of two states on disjoint mode sets."""
    overlap = {m.name for m in a.modes} & {m.name for m in b.modes}
    if overlap:
        raise ValueError(f"mode labels {sorted(overlap)} appear on both factors")
    return DensityMatrix(a.modes + b.modes, np.kron(a.entries, b.entries))


def partial_trace(rho: DensityMatrix, discard: Iterable[ModeLabel | str]) -> DensityMatrix:
    """Reduced state after tracing out the ``discard`` modes."""
    drop_idx = _resolve(rho.modes, discard)
    keep_idx = [i for i in range(len(rho.modes)) if i not in drop_idx]
    dims = [m.cutoff for m in rho.modes]
    n = len(dims)
    tensor = rho.entries.reshape(dims + dims)
    # trace the dropped axes pairwise; ket axis i pairs with bra axis i + n,
    # and dropping from the highest index down keeps the remaining pairs valid
    for i in sorted(drop_idx, reverse=True):
        tensor = np.trace(tensor, axis1=i, axis2=i + n)
        n -= 1
    keep_dim = int(np.prod([dims[i] for i in keep_idx])) if keep_idx else 1
    out = tensor.reshape(keep_dim, keep_dim)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(tuple(rho.modes[i] for i in keep_idx), out)


def hermitian_eigendecomposition(rho: DensityMatrix | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns.

    Raises if the input is not hermitian within tolerance; the
    reconstruction V diag(w) V^dag reproduces the input to ~1e-10.
    """
    mat = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if np.abs(mat - mat.conj().T).max(initial=0.0) > 1e-10:
        raise ValueError("matrix is not hermitian within tolerance")
    w, v = np.linalg.eigh(mat)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]
