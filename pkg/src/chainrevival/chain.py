"""Value types for nearest-neighbour coupled chains and their states.

A chain of ``n`` elements is fully described by its ``n - 1`` coupling
coefficients. The coupling matrix is real, symmetric, tridiagonal and has
a zero diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MIRROR_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True)
class CouplingChain:
    """Off-diagonal couplings ``a_1 .. a_{n-1}`` of an ``n``-element chain."""

    couplings: tuple[float, ...]

    def __init__(self, couplings: Iterable[float]):
        values = tuple(float(a) for a in couplings)
        if len(values) < 1:
            raise ValueError("a chain needs at least 2 elements (1 coupling)")
        if not all(np.isfinite(values)):
            raise ValueError(f"couplings must be finite, got {values}")
        object.__setattr__(self, "couplings", values)

    @property
    def n(self) -> int:
        return len(self.couplings) + 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.couplings, dtype=float)

    def scaled(self, factor: float) -> "CouplingChain":
        return CouplingChain(factor * a for a in self.couplings)

    def to_dict(self) -> dict:
        return {"n": self.n, "couplings": list(self.couplings)}

    @classmethod
    def from_dict(cls, data: dict) -> "CouplingChain":
        try:
            couplings = data["couplings"]
        except (KeyError, TypeError):
            raise ValueError("chain JSON needs a 'couplings' list") from None
        chain = cls(couplings)
        if "n" in data and int(data["n"]) != chain.n:
            raise ValueError(
                f"chain JSON says n={data['n']} but lists {len(chain.couplings)} couplings"
            )
        return chain

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CouplingChain":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MirrorSymmetry:
    is_mirror: bool
    max_asymmetry: float


def as_state(amplitudes: Sequence[complex] | np.ndarray, n: int | None = None) -> np.ndarray:
    """Validate and convert amplitudes to a complex state vector.

    Raises ``ValueError`` for non-finite entries, a zero vector, or a
    length different from ``n`` (when given).
    """
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if n is not None and psi.size != n:
        raise ValueError(f"state has {psi.size} amplitudes, chain has {n} elements")
    if not np.all(np.isfinite(psi)):
        raise ValueError("state amplitudes must be finite")
    if not np.vdot(psi, psi).real > 0:
        raise ValueError("state vector has zero norm")
    return psi


def normalize_state(amplitudes) -> np.ndarray:
    psi = as_state(amplitudes)
    return psi / np.linalg.norm(psi)


def basis_state(n: int, index: int) -> np.ndarray:
    """Unit vector on element ``index`` (0-based)."""
    psi = np.zeros(n, dtype=complex)
    psi[index] = 1.0
    return psi


def assemble_matrix(chain: CouplingChain) -> np.ndarray:
    a = chain.as_array()
    return np.diag(a, 1) + np.diag(a, -1)


def is_mirror_symmetric(chain: CouplingChain, tol: float = MIRROR_TOL) -> MirrorSymmetry:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    a = chain.as_array()
    asym = float(np.max(np.abs(a - a[::-1])))
    return MirrorSymmetry(asym <= tol, asym)


def gauge_normalize(chain: CouplingChain) -> CouplingChain:
    # conjugation by diag(+-1) flips coupling signs; the spectrum is unchanged
    return CouplingChain(abs(a) for a in chain.couplings)
