"""
Truncated Fock-space operator algebra.

Operators are dense complex matrices on the number basis |0>..|D-1>. Truncation breaks the
canonical commutator only in the last basis state: [a, a^dag] = 1 - D |D-1><D-1|.
"""

from __future__ import annotations

import logging
import math
import struct
from collections.abc import Callable
from pathlib import Path
from typing import Literal

import numpy as np
import scipy.linalg

from gupsim.config import settings
from gupsim.exceptions import (
    DimensionMismatchError,
    EigenDecompositionError,
    InvalidParameterError,
    NotSkewHermitianError,
    TruncationError,
    UnitarityError,
)
from gupsim.models import OscillatorScales

logger = logging.getLogger(__name__)

NormMode = Literal["spectral", "frobenius"]

DUMP_MAGIC: bytes = b"GUPFOCK\x00"
DUMP_HEADER = struct.Struct("<8sQ")


class FockOperator:
    """
    Immutable dense operator on a truncated number basis.

    ``scale`` is the OscillatorScales the operator was built with, or None for natural units.
    Operators tagged ``hermitian`` are checked on construction.
    """

    __slots__ = ("_entries", "scale", "hermitian")
    __array_ufunc__ = None

    def __init__(
        self,
        entries: np.ndarray,
        scale: OscillatorScales | None = None,
        *,
        hermitian: bool = False,
    ) -> None:
        data = np.array(entries, dtype=np.complex128)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise InvalidParameterError(f"operator must be square, got shape {data.shape}")
        if data.shape[0] < 2:
            raise InvalidParameterError("truncation dimension must be at least 2")
        if not np.all(np.isfinite(data)):
            raise InvalidParameterError("operator has non-finite entries")
        data.flags.writeable = False
        self._entries: np.ndarray = data
        self.scale: OscillatorScales | None = scale
        self.hermitian: bool = hermitian
        if hermitian:
            reference = np.linalg.norm(data)
            if reference > 0 and self.hermiticity_defect() > settings.hermiticity_tol * reference:
                raise InvalidParameterError(
                    f"operator tagged hermitian has defect {self.hermiticity_defect():.3e} (norm {reference:.3e})"
                )

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def hermiticity_defect(self) -> float:
        return float(np.linalg.norm(self._entries - self._entries.conj().T))

    def dag(self) -> FockOperator:
        return FockOperator(self._entries.conj().T, self.scale, hermitian=self.hermitian)

    def norm(self, mode: NormMode = "spectral") -> float:
        return matrix_norm(self._entries, mode)

    def interior(self, n_max: int) -> np.ndarray:
        """Block acting on phonon numbers 0..n_max."""
        return self._entries[: n_max + 1, : n_max + 1]

    def _check_dim(self, other: FockOperator) -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim)

    def __add__(self, other: FockOperator) -> FockOperator:
        self._check_dim(other)
        return FockOperator(self._entries + other._entries, self.scale)

    def __sub__(self, other: FockOperator) -> FockOperator:
        self._check_dim(other)
        return FockOperator(self._entries - other._entries, self.scale)

    def __neg__(self) -> FockOperator:
        return FockOperator(-self._entries, self.scale, hermitian=self.hermitian)

    def __mul__(self, scalar: complex) -> FockOperator:
        return FockOperator(self._entries * scalar, self.scale)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> FockOperator:
        return FockOperator(self._entries / scalar, self.scale)

    def __matmul__(self, other: FockOperator) -> FockOperator:
        self._check_dim(other)
        return FockOperator(self._entries @ other._entries, self.scale)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, hermitian={self.hermitian})"


class UnitaryOperator(FockOperator):
    """FockOperator built as a matrix exponential; carries its unitarity defect ||U^dag U - 1||_F."""

    __slots__ = ("unitarity_defect",)

    def __init__(self, entries: np.ndarray, scale: OscillatorScales | None = None) -> None:
        super().__init__(entries, scale)
        self.unitarity_defect: float = float(
            np.linalg.norm(self.entries.conj().T @ self.entries - np.eye(self.dim))
        )

    def __matmul__(self, other: FockOperator) -> FockOperator:
        if isinstance(other, UnitaryOperator):
            self._check_dim(other)
            return UnitaryOperator(self.entries @ other.entries, self.scale)
        return super().__matmul__(other)


def matrix_norm(matrix: np.ndarray, mode: NormMode = "spectral") -> float:
    if mode == "spectral":
        return float(np.linalg.norm(matrix, 2))
    if mode == "frobenius":
        return float(np.linalg.norm(matrix))
    raise InvalidParameterError(f"unknown norm mode '{mode}'")


def identity(dim: int, scale: OscillatorScales | None = None) -> FockOperator:
    return FockOperator(np.eye(dim), scale, hermitian=True)


def ladder(dim: int) -> tuple[FockOperator, FockOperator]:
    """
    Truncated annihilation and creation operators.

    Args:
        dim: Truncation dimension D >= 2

    Returns:
        (a, a^dag) with a[n-1, n] = sqrt(n)
    """
    if dim < 2:
        raise InvalidParameterError(f"truncation dimension must be at least 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    return FockOperator(a), FockOperator(a.T)


def number(dim: int) -> FockOperator:
    return FockOperator(np.diag(np.arange(dim, dtype=float)), hermitian=True)


def quadratures(dim: int, scales: OscillatorScales) -> tuple[FockOperator, FockOperator]:
    """x = x0 (a + a^dag) and p = i p0 (a^dag - a), both Hermitian."""
    a, adag = ladder(dim)
    x = scales.x0 * (a.entries + adag.entries)
    p = 1j * scales.p0 * (adag.entries - a.entries)
    return FockOperator(x, scales, hermitian=True), FockOperator(p, scales, hermitian=True)


def commutator(A: FockOperator, B: FockOperator) -> FockOperator:
    """AB - BA."""
    if A.dim != B.dim:
        raise DimensionMismatchError(A.dim, B.dim)
    return FockOperator(A.entries @ B.entries - B.entries @ A.entries, A.scale)


def expm_generator(G: FockOperator, *, tol: float | None = None) -> UnitaryOperator:
    """
    Exponentiate a skew-Hermitian generator through the Hermitian eigendecomposition of iG.

    Args:
        G: Skew-Hermitian generator
        tol: Unitarity tolerance, defaults to ``settings.unitarity_tol``

    Returns:
        e^G with its unitarity defect recorded

    Raises:
        NotSkewHermitianError: If ||G + G^dag|| > skew_tol ||G||
        EigenDecompositionError: If the eigensolver fails
        UnitarityError: If the result exceeds the unitarity tolerance
    """
    tol = settings.unitarity_tol if tol is None else tol
    g = G.entries
    size = np.linalg.norm(g)
    if size == 0:
        return UnitaryOperator(np.eye(G.dim), G.scale)
    skew_defect = np.linalg.norm(g + g.conj().T)
    if skew_defect > settings.skew_tol * size:
        raise NotSkewHermitianError(f"||G + G^dag|| = {skew_defect:.3e} exceeds {settings.skew_tol:.1e} * ||G||")

    h = 1j * g
    h = (h + h.conj().T) / 2
    try:
        w, v = scipy.linalg.eigh(h)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigenDecompositionError(f"eigendecomposition of dim {G.dim} generator failed") from e

    unitary = UnitaryOperator((v * np.exp(-1j * w)) @ v.conj().T, G.scale)
    if unitary.unitarity_defect > tol:
        raise UnitarityError(f"unitarity defect {unitary.unitarity_defect:.3e} exceeds {tol:.1e}")
    return unitary


def op_distance(A: FockOperator, B: FockOperator, mode: NormMode = "spectral", *, n_max: int | None = None) -> float:
    """Norm of A - B, optionally restricted to phonon numbers <= n_max."""
    if A.dim != B.dim:
        raise DimensionMismatchError(A.dim, B.dim)
    diff = A.entries - B.entries
    if n_max is not None:
        diff = diff[: n_max + 1, : n_max + 1]
    return matrix_norm(diff, mode)


def interior_cutoff(dim: int, fraction: float | None = None) -> int:
    """Largest phonon number treated as free of truncation-edge artifacts."""
    fraction = settings.interior_fraction if fraction is None else fraction
    return max(1, int(dim * fraction))


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Number-basis amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), truncated to dim."""
    amplitudes = np.zeros(dim, dtype=np.complex128)
    amplitudes[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        amplitudes[n] = amplitudes[n - 1] * alpha / math.sqrt(n)
    return amplitudes


def relative_change(value: float | np.ndarray, previous: float | np.ndarray) -> float:
    """||value - previous|| / max(||value||, ||previous||), 0 when both vanish."""
    scale = max(np.linalg.norm(value), np.linalg.norm(previous))
    return 0.0 if scale == 0 else float(np.linalg.norm(np.subtract(value, previous)) / scale)


def converge_dimension(
    evaluate: Callable[[int], float | np.ndarray],
    start_dim: int | None = None,
    *,
    rtol: float | None = None,
    max_dim: int | None = None,
) -> tuple[int, float | np.ndarray]:
    """
    Double the truncation until the target is stable.

    Args:
        evaluate: Scalar or fixed-shape array computed at a given dimension
        start_dim: First dimension tried, defaults to ``settings.default_dim``
        rtol: Relative change accepted between D and 2D, defaults to ``settings.convergence_rtol``
        max_dim: Dimension cap, defaults to ``settings.max_dim``

    Returns:
        (D, value at D) for the first D whose value agrees with the one at 2D

    Raises:
        TruncationError: If 2D would exceed the cap before convergence
    """
    dim = start_dim or settings.default_dim
    rtol = settings.convergence_rtol if rtol is None else rtol
    max_dim = settings.max_dim if max_dim is None else max_dim
    if 2 * dim > max_dim:
        raise TruncationError(
            f"D={dim} cannot be checked against 2D under the cap D={max_dim}", last_dim=dim, last_change=math.inf
        )

    previous = evaluate(dim)
    change = math.inf
    while 2 * dim <= max_dim:
        value = evaluate(2 * dim)
        change = relative_change(value, previous)
        if change < rtol:
            logger.debug("truncation accepted at D=%d (change %.3e)", dim, change)
            return dim, previous
        logger.warning("truncation D=%d not converged (change %.3e), doubling", dim, change)
        dim, previous = 2 * dim, value
    raise TruncationError(f"no convergence below D={max_dim}", last_dim=dim, last_change=change)


def converged_operator(
    build: Callable[[int], FockOperator], dim: int, n_max: int | None = None
) -> FockOperator:
    """
    Build an operator at growing D until its block on phonon numbers <= n_max is stable.

    Returns:
        The operator at the accepted dimension, cut back to ``dim`` x ``dim``
    """
    n = interior_cutoff(dim) if n_max is None else n_max
    built: dict[int, FockOperator] = {}

    def interior_block(d: int) -> np.ndarray:
        built[d] = build(d)
        return built[d].interior(n)

    accepted, _ = converge_dimension(interior_block, dim)
    return FockOperator(built[accepted].entries[:dim, :dim], built[accepted].scale)


def dump_operator(op: FockOperator, path: str | Path) -> None:
    """Write a 16-byte header (magic, D) followed by row-major little-endian complex128 entries."""
    payload = np.ascontiguousarray(op.entries, dtype="<c16").tobytes()
    Path(path).write_bytes(DUMP_HEADER.pack(DUMP_MAGIC, op.dim) + payload)


def load_operator(path: str | Path) -> FockOperator:
    data = Path(path).read_bytes()
    if len(data) < DUMP_HEADER.size:
        raise InvalidParameterError(f"{path}: too short for an operator dump")
    magic, dim = DUMP_HEADER.unpack_from(data)
    if magic != DUMP_MAGIC:
        raise InvalidParameterError(f"{path}: bad magic {magic!r}")
    expected = DUMP_HEADER.size + 16 * dim * dim
    if len(data) != expected:
        raise InvalidParameterError(f"{path}: expected {expected} bytes for D={dim}, got {len(data)}")
    entries = np.frombuffer(data, dtype="<c16", offset=DUMP_HEADER.size).reshape(dim, dim)
    return FockOperator(entries)
