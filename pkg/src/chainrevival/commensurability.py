"""Detect commensurate spectra and recover their integer labels.

A spectrum is commensurate when every eigenvalue is an integer multiple
``n_j`` of one base frequency ``q``; the dynamics then repeat exactly with
period ``T = 2 pi / q``.

Labels are recovered by taking the smallest nonzero eigenvalue as the
reference, expanding every ratio to it as a continued fraction, and
accepting the first convergent that is accurate enough. The residual is
measured in units of the grid spacing ``q``, i.e. ``|omega_j / q - n_j|``,
which is the per-period phase error divided by ``2 pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Sequence

import numpy as np

from .chain import CouplingChain
from .spectral import Spectrum, eigenvalues

DEFAULT_TOL = 1e-8
DEFAULT_MAX_DENOMINATOR = 10_000


class EmptySpectrum(ValueError):
    pass


class NoDynamics(ValueError):
    pass


class NotCommensurateError(ValueError):
    """Raised by operations that need a commensurate chain."""

    def __init__(self, verdict: "NotCommensurate"):
        super().__init__(
            f"spectrum is not commensurate (best residual {verdict.residual:.3g}, "
            f"tolerance {verdict.tol:.3g})"
        )
        self.verdict = verdict


@dataclass(frozen=True)
class CommensurateLabels:
    q: float
    labels: tuple[int, ...]
    gcd_normalized: bool = True
    residual: float = 0.0

    @property
    def period(self) -> float:
        return revival_period(self)


@dataclass(frozen=True)
class NotCommensurate:
    """Negative verdict, with the best grid that was tried."""

    q: float
    labels: tuple[int, ...]
    residual: float
    tol: float


def convergents(x: float, max_denominator: int) -> Iterator[tuple[int, int]]:
    """Continued-fraction convergents ``(p, d)`` of ``x`` with ``d <= max_denominator``."""
    p_prev, p = 1, math.floor(x)
    d_prev, d = 0, 1
    frac = x - p
    yield p, d
    while frac > 1e-15:
        x = 1.0 / frac
        term = math.floor(x)
        frac = x - term
        p_prev, p = p, term * p + p_prev
        d_prev, d = d, term * d + d_prev
        if d > max_denominator:
            return
        yield p, d


def normalize_labels(labels: Sequence[int], q: float) -> CommensurateLabels:
    """Divide out the GCD of the labels and scale ``q`` up by the same factor."""
    g = reduce(math.gcd, (abs(int(n)) for n in labels), 0)
    if g <= 1:
        return CommensurateLabels(q, tuple(int(n) for n in labels), True)
    return CommensurateLabels(q * g, tuple(int(n) // g for n in labels), True)


def _fit_q(omega: np.ndarray, labels: np.ndarray) -> float:
    return float(omega @ labels / (labels @ labels))


def _grid_residual(omega: np.ndarray, labels: np.ndarray, q: float) -> float:
    return float(np.max(np.abs(omega / q - labels)))


def rationalize_spectrum(
    spectrum: Spectrum | Sequence[float],
    tol: float = DEFAULT_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> CommensurateLabels | NotCommensurate:
    """Find ``q`` and coprime integer labels with ``omega_j ~= q n_j``.

    Parameters
    ----------
    spectrum : Spectrum or sequence of float
    tol : float
        Largest accepted ``|omega_j / q - n_j|``. Eigenvalues with
        ``|omega| <= tol * max|omega|`` are labelled 0.
    max_denominator : int
        Bound on the label given to the reference (smallest nonzero)
        eigenvalue.

    Returns
    -------
    CommensurateLabels on success, otherwise NotCommensurate carrying the
    best candidate grid and its residual.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    values = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else spectrum
    omega = np.asarray(values, dtype=float).reshape(-1)
    if omega.size == 0:
        raise EmptySpectrum("cannot rationalize an empty spectrum")

    scale = float(np.max(np.abs(omega)))
    zero = np.abs(omega) <= tol * scale
    if scale == 0.0 or zero.all():
        return CommensurateLabels(1.0, (0,) * omega.size, True, 0.0)

    nonzero = np.flatnonzero(~zero)
    ref = omega[nonzero[np.argmin(np.abs(omega[nonzero]))]]
    ref_abs = abs(ref)

    # per ratio: first convergent that is close enough at its own denominator
    dens = []
    for j in nonzero:
        ratio = abs(omega[j]) / ref_abs
        best = None
        for p, d in convergents(ratio, max_denominator):
            best = d
            if abs(ratio * d - p) <= tol:
                break
        dens.append(best)
    ref_label = reduce(math.lcm, dens, 1)

    if ref_label > max_denominator:
        ref_label = max(dens)
    labels = np.zeros(omega.size)
    labels[nonzero] = np.round(omega[nonzero] / ref_abs * ref_label)
    q = _fit_q(omega, labels)
    residual = _grid_residual(omega, labels, q)
    ints = labels.astype(int)
    if residual > tol or ref_label > max_denominator:
        return NotCommensurate(q, tuple(int(n) for n in ints), residual, tol)
    result = normalize_labels(ints, q)
    return CommensurateLabels(result.q, result.labels, True, residual)


def revival_period(labels: CommensurateLabels) -> float:
    """Smallest ``T > 0`` with ``exp(-i q n_j T) = 1`` for every label."""
    if not any(labels.labels):
        raise NoDynamics("all labels are zero: the state never evolves")
    labels = normalize_labels(labels.labels, labels.q)
    return 2.0 * math.pi / labels.q


def is_commensurate(
    chain: CouplingChain,
    tol: float = DEFAULT_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> tuple[bool, CommensurateLabels | NotCommensurate]:
    verdict = rationalize_spectrum(eigenvalues(chain), tol, max_denominator)
    return isinstance(verdict, CommensurateLabels), verdict


def require_commensurate(
    chain: CouplingChain,
    tol: float = DEFAULT_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> CommensurateLabels:
    ok, verdict = is_commensurate(chain, tol, max_denominator)
    if not ok:
        raise NotCommensurateError(verdict)
    return verdict
