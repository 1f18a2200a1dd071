"""Asymptotic operator spectrum, Conley-Zehnder conventions and Riemann-Roch.

The asymptotic operator at a T-periodic orbit of the geodesic flow on the
flat torus, written in the global frame of the contact planes, is

    A = -J0 d/dt - T diag(0, 1)        on loops eta: R/Z -> R^2,

with J0 the standard complex structure. For eta = (x, y) this reads
``A(x, y) = (y', -x' - T y)``.

The derivative is discretized spectrally on a staggered periodic grid: ``x``
lives on the nodes ``j/N`` and ``y`` on the midpoints ``(j + 1/2)/N``. The
half-shift removes the Nyquist null mode that an unstaggered derivative has,
so no spurious eigenvalues appear, and the resulting matrix is exactly
symmetric. Constant loops are exact eigenvectors (eigenvalues 0 and -T).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from polyembed.core import ComponentSpec, LevelKind, Sign
from polyembed.errors import DegenerateEigenvector, Unsupported, WrongLevel

VANISHING_TOL = 1e-9
MIN_GRID = 16


@dataclass(frozen=True)
class AsymptoticOperatorSpec:
    T: float
    grid_size: int = 256

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"period must be positive, got {self.T}")
        if int(self.grid_size) != self.grid_size or self.grid_size < MIN_GRID:
            raise ValueError(f"grid_size must be an integer >= {MIN_GRID}")


@dataclass(frozen=True)
class SpectralPoint:
    eigenvalue: float
    winding: int
    multiplicity: int


@dataclass(frozen=True)
class CZData:
    sign: Sign
    movable: bool
    cz: int


@lru_cache(maxsize=8)
def _staggered_derivative(n: int) -> np.ndarray:
    """Spectral d/dt from nodes to midpoints on an n-point periodic grid."""
    freq = np.fft.fftfreq(n, d=1.0 / n)
    k = 2 * np.pi * freq
    symbol = 1j * k * np.exp(0.5j * k / n)
    mat = np.fft.ifft(symbol[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    # symbol is Hermitian-symmetric (the Nyquist entry is real), so this is real
    mat = np.ascontiguousarray(mat.real)
    mat.setflags(write=False)
    return mat


def operator_matrix(spec: AsymptoticOperatorSpec) -> np.ndarray:
    """Symmetric 2N x 2N matrix of the discretized operator, unknowns ordered (x, y)."""
    n = int(spec.grid_size)
    d_plus = _staggered_derivative(n)
    zero = np.zeros((n, n))
    # y' at the nodes is -d_plus.T @ y, which keeps the block matrix symmetric
    return np.block([[zero, -d_plus.T], [-d_plus, -spec.T * np.eye(n)]])


def loop_winding(x: np.ndarray, y: np.ndarray, tol: float = VANISHING_TOL) -> int:
    """Winding number of the closed planar loop sampled as (x_j, y_j)."""
    z = np.asarray(x) + 1j * np.asarray(y)
    mags = np.abs(z)
    scale = mags.max()
    if scale < tol:
        raise DegenerateEigenvector("eigenvector has vanishing max norm")
    if mags.min() < tol * scale:
        raise DegenerateEigenvector("eigenvector loop passes through the origin")
    steps = np.angle(np.roll(z, -1) / z)
    turns = steps.sum() / (2 * np.pi)
    w = int(round(turns))
    if abs(turns - w) > 1e-6:
        raise DegenerateEigenvector(f"non-integral winding {turns}")
    return w


def asymptotic_operator_spectrum(spec: AsymptoticOperatorSpec, window: Sequence[float]) -> list:
    """Eigenvalues in the closed ``window`` with eigenvector windings, ascending."""
    lo, hi = float(window[0]), float(window[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise ValueError(f"window must be a bounded interval, got {window!r}")
    n = int(spec.grid_size)
    vals, vecs = np.linalg.eigh(operator_matrix(spec))
    keep = np.flatnonzero((vals >= lo) & (vals <= hi))

    points = []
    i = 0
    while i < len(keep):
        j = i + 1
        while j < len(keep) and vals[keep[j]] - vals[keep[i]] <= 1e-7 * max(1.0, abs(vals[keep[i]])):
            j += 1
        group = keep[i:j]
        windings = {loop_winding(vecs[:n, g], vecs[n:, g]) for g in group}
        if len(windings) != 1:
            raise DegenerateEigenvector(f"eigenspace near {vals[group[0]]} mixes windings {sorted(windings)}")
        points.append(SpectralPoint(float(vals[group].mean()), windings.pop(), len(group)))
        i = j
    return points


def conley_zehnder_from_spectrum(points: Iterable[SpectralPoint], shift: float) -> int:
    """CZ index of ``A + shift`` from windings: 2*alpha + p.

    alpha is the largest winding among negative eigenvalues; p is 0 when the
    smallest positive eigenvalue has the same winding, else 1. ``points`` must
    cover the eigenvalues on both sides of ``-shift``.
    """
    shifted = [(p.eigenvalue + shift, p.winding) for p in points]
    if any(abs(v) < 1e-9 for v, _ in shifted):
        raise ValueError("shifted operator is degenerate")
    neg = [w for v, w in shifted if v < 0]
    pos = [(v, w) for v, w in shifted if v > 0]
    if not neg or not pos:
        raise ValueError("spectrum window does not straddle zero")
    alpha = max(neg)
    parity = 0 if min(pos)[1] == alpha else 1
    return 2 * alpha + parity


def cz_via_spectrum(sign: Sign, T: float = 1.0, grid_size: int = 64) -> int:
    """Morse-Bott CZ index of a movable end computed from the discrete spectrum.

    Negative ends allow exponential growth, i.e. the operator is shifted up
    by a small delta; positive ends shift it down.
    """
    spec = AsymptoticOperatorSpec(T, grid_size)
    points = asymptotic_operator_spectrum(spec, (-(T + 1.0), T + 4 * np.pi + 1.0))
    first_pos = min(p.eigenvalue for p in points if p.eigenvalue > 1e-9)
    delta = 0.5 * min(T, first_pos)
    return conley_zehnder_from_spectrum(points, delta if Sign(sign) is Sign.NEGATIVE else -delta)


def cz_morse_bott(sign: Sign, movable: bool = True) -> CZData:
    sign = Sign(sign)
    if not movable:
        raise Unsupported("only ends moving in their Morse-Bott family are supported")
    return CZData(sign, True, 1 if sign is Sign.POSITIVE else 0)


def relative_c1(c: ComponentSpec) -> int:
    """First Chern number relative to the frame from the bidisk.

    Lines contribute 3, the exceptional divisor 1, and each end on a (k, l)
    geodesic contributes k + l.
    """
    if c.level_kind is not LevelKind.TOP:
        raise WrongLevel("relative_c1 is defined for top components")
    return 3 * c.degree - c.exceptional + sum(e.orbit.k + e.orbit.l for e in c.ends)


def rr_index(genus: int, czs: Sequence[CZData], c1_doubled: int) -> int:
    """Riemann-Roch index of a punctured genus-0 curve modulo reparametrization."""
    if genus != 0:
        raise Unsupported("only genus 0 is supported")
    euler = 2 - len(czs)
    plus = sum(c.cz for c in czs if c.sign is Sign.POSITIVE)
    minus = sum(c.cz for c in czs if c.sign is Sign.NEGATIVE)
    return -euler + plus - minus + c1_doubled


def rr_component_index(c: ComponentSpec) -> int:
    czs = [cz_morse_bott(e.sign, e.movable) for e in c.ends]
    # the global frame of the contact planes extends over the cotangent bundle
    c1 = relative_c1(c) if c.level_kind is LevelKind.TOP else 0
    return rr_index(c.genus, czs, 2 * c1)
