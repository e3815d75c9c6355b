"""Unitary propagation along a chain, revivals and end-to-end transfer.

The evolution ``i dpsi/dz = A psi`` is solved exactly through the
eigendecomposition ``A = V diag(w) V^T``:
``psi(z) = V exp(-i w z) V^T psi(0)``. No time stepping is involved, so
every sample of a trajectory carries only eigensolver round-off.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .chain import NORM_TOL, CouplingChain, as_state, basis_state, is_mirror_symmetric
from .commensurability import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_TOL,
    CommensurateLabels,
    rationalize_spectrum,
    require_commensurate,
    revival_period,
)
from .spectral import Spectrum, eigen_system

DYNAMIC_TRANSFER_TOL = 1e-8


class UnnormalizedInput(ValueError):
    pass


def _evolve(spec: Spectrum, psi0: np.ndarray, zs: np.ndarray) -> np.ndarray:
    # rows are states at each z
    v = spec.eigenvectors
    coeff = v.T @ psi0
    phases = np.exp(-1j * np.outer(zs, spec.eigenvalues))
    return (phases * coeff) @ v.T


def propagate(chain: CouplingChain, psi0, z: float) -> np.ndarray:
    """State after evolution length ``z``; ``z = 0`` returns ``psi0`` unchanged."""
    psi0 = as_state(psi0, chain.n)
    if z == 0:
        return psi0.copy()
    return _evolve(eigen_system(chain), psi0, np.array([float(z)]))[0]


def _require_normalized(psi0: np.ndarray) -> None:
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > NORM_TOL:
        raise UnnormalizedInput(f"input state has norm {norm!r}, expected 1")


def fidelity(chain: CouplingChain, psi0, z: float) -> float:
    """``|<psi(z)|psi(0)>|`` for a normalized input."""
    psi0 = as_state(psi0, chain.n)
    _require_normalized(psi0)
    return float(min(abs(np.vdot(propagate(chain, psi0, z), psi0)), 1.0))


def fidelity_curve(chain: CouplingChain, psi0, zs) -> np.ndarray:
    psi0 = as_state(psi0, chain.n)
    _require_normalized(psi0)
    states = _evolve(eigen_system(chain), psi0, np.asarray(zs, dtype=float))
    return np.minimum(np.abs(states.conj() @ psi0), 1.0)


def revival_basis(n: int) -> list[np.ndarray]:
    """Inputs used to certify a revival.

    All basis vectors ``e_i`` and all equal-weight pairs
    ``(e_i + exp(i theta) e_j) / sqrt(2)`` with ``theta`` in ``{0, pi/2}``.
    """
    states = [basis_state(n, i) for i in range(n)]
    for i, j in combinations(range(n), 2):
        for theta in (0.0, math.pi / 2):
            psi = np.zeros(n, dtype=complex)
            psi[i] = 1.0
            psi[j] = np.exp(1j * theta)
            states.append(psi / math.sqrt(2.0))
    return states


@dataclass(frozen=True)
class RevivalReport:
    period: float
    deficit: float
    ok: bool
    labels: CommensurateLabels


def revival_check(
    chain: CouplingChain,
    tol: float = 1e-9,
    rational_tol: float = DEFAULT_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> RevivalReport:
    """Period ``T`` and the worst ``1 - F(T)`` over :func:`revival_basis`.

    Raises ``NotCommensurateError`` if the spectrum has no common grid.
    """
    labels = require_commensurate(chain, rational_tol, max_denominator)
    period = revival_period(labels)
    spec = eigen_system(chain)
    deficit = 0.0
    for psi in revival_basis(chain.n):
        back = _evolve(spec, psi, np.array([period]))[0]
        deficit = max(deficit, 1.0 - abs(np.vdot(back, psi)))
    deficit = max(deficit, 0.0)
    return RevivalReport(period, deficit, deficit <= tol, labels)


@dataclass(frozen=True)
class TransferVerdict:
    is_perfect: bool
    transfer_length: Optional[float] = None
    odd_multipliers: tuple[int, ...] = ()
    end_amplitude: Optional[float] = None
    reason: str = ""


def perfect_transfer_check(
    chain: CouplingChain,
    tol: float = DEFAULT_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> TransferVerdict:
    """Decide end-to-end transfer from the gaps of the sorted spectrum.

    Transfer from the first to the last element at length ``L0`` needs a
    mirror-symmetric chain whose adjacent eigenvalue gaps are all odd
    multiples ``(2 m + 1) pi / L0``. The largest such unit is the GCD grid
    of the gaps, provided every reduced gap is odd. A positive spectral
    verdict is confirmed by evolving ``e_1`` to ``L0``.
    """
    mirror = is_mirror_symmetric(chain)
    if not mirror.is_mirror:
        return TransferVerdict(False, reason=f"not mirror symmetric (asymmetry {mirror.max_asymmetry:.3g})")
    spec = eigen_system(chain)
    w = spec.eigenvalues
    gaps = np.diff(w)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    if np.any(gaps <= tol * scale):
        return TransferVerdict(False, reason="degenerate eigenvalues")
    grid = rationalize_spectrum(gaps, tol, max_denominator)
    if not isinstance(grid, CommensurateLabels):
        return TransferVerdict(False, reason="eigenvalue gaps are not commensurate")
    if any(k % 2 == 0 for k in grid.labels):
        return TransferVerdict(False, reason=f"gap multiples {grid.labels} include an even one")
    length = math.pi / grid.q
    multipliers = tuple((k - 1) // 2 for k in grid.labels)
    psi = _evolve(spec, basis_state(chain.n, 0), np.array([length]))[0]
    amp = float(abs(psi[-1]))
    if amp < 1.0 - DYNAMIC_TRANSFER_TOL:
        return TransferVerdict(False, length, multipliers, amp, "spectral test passed but end amplitude < 1")
    return TransferVerdict(True, length, multipliers, amp, "ok")


@dataclass(frozen=True, eq=False)
class Trajectory:
    z: np.ndarray
    states: np.ndarray
    chain: CouplingChain

    @property
    def intensities(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    def to_csv(self, intensity: bool = False, digits: int = 12) -> str:
        """CSV text: ``z,re_1,im_1,...`` or ``z,I_1,...`` with ``intensity``."""
        n = self.chain.n
        fmt = f"{{:.{digits}g}}".format
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if intensity:
            writer.writerow(["z"] + [f"I_{i + 1}" for i in range(n)])
            for z, row in zip(self.z, self.intensities):
                writer.writerow([fmt(z)] + [fmt(x) for x in row])
        else:
            header = ["z"]
            for i in range(n):
                header += [f"re_{i + 1}", f"im_{i + 1}"]
            writer.writerow(header)
            for z, row in zip(self.z, self.states):
                cells = [fmt(z)]
                for c in row:
                    cells += [fmt(c.real), fmt(c.imag)]
                writer.writerow(cells)
        return buf.getvalue()


def sample_trajectory(chain: CouplingChain, psi0, z_max: float, num_samples: int) -> Trajectory:
    """States at ``num_samples`` uniformly spaced lengths in ``[0, z_max]``."""
    if num_samples < 2:
        raise ValueError("num_samples must be >= 2")
    if z_max < 0:
        raise ValueError("z_max must be non-negative")
    psi0 = as_state(psi0, chain.n)
    zs = np.linspace(0.0, float(z_max), int(num_samples))
    states = _evolve(eigen_system(chain), psi0, zs)
    states[zs == 0] = psi0
    return Trajectory(zs, states, chain)


def length_sensitivity_scan(
    chain: CouplingChain,
    psi0,
    deviations: Sequence[float],
    period: Optional[float] = None,
) -> list[tuple[float, float]]:
    """Fidelity at the perturbed lengths ``T (1 + delta)``.

    ``period`` defaults to the revival period. Fidelity is not monotone in
    ``delta``; the values are only reported.
    """
    labels = require_commensurate(chain)
    if period is None:
        period = revival_period(labels)
    deltas = [float(d) for d in deviations]
    f = fidelity_curve(chain, psi0, [period * (1.0 + d) for d in deltas])
    return list(zip(deltas, (float(x) for x in f)))


def worst_case_length_deficit(chain: CouplingChain, delta: float, period: Optional[float] = None) -> float:
    """Largest ``1 - F(T (1 +- delta))`` over :func:`revival_basis`."""
    worst = 0.0
    for psi in revival_basis(chain.n):
        for _, f in length_sensitivity_scan(chain, psi, (-delta, delta), period):
            worst = max(worst, 1.0 - f)
    return worst


@dataclass(frozen=True)
class SplitResult:
    z: float
    intensities: np.ndarray
    deviation: float


def best_split_length(
    chain: CouplingChain,
    psi0,
    outputs: Sequence[int],
    z_max: float,
    num_samples: int = 20001,
) -> SplitResult:
    """Length in ``(0, z_max]`` where power is most evenly shared by ``outputs``.

    ``outputs`` are 0-based element indices. The score is the largest
    deviation of any output intensity from ``1 / len(outputs)`` (for a
    normalized input), so leakage to other elements is penalized too.
    """
    traj = sample_trajectory(chain, psi0, z_max, num_samples)
    power = traj.intensities / np.sum(traj.intensities[0])
    target = 1.0 / len(outputs)
    dev = np.max(np.abs(power[:, list(outputs)] - target), axis=1)
    dev[0] = np.inf
    k = int(np.argmin(dev))
    return SplitResult(float(traj.z[k]), power[k], float(dev[k]))
