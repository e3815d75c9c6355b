"""Eigen-decomposition of zero-diagonal symmetric tridiagonal matrices.

The numerical route uses LAPACK's implicit QL/QR tridiagonal solver
(``?stev``). Two independent checks are provided alongside it: the closed
form for the 4-element chain and the characteristic-polynomial
coefficients obtained from matchings of the path graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .chain import CouplingChain

# the solver is exercised up to this size; beyond it convergence is not promised
MAX_N = 256
NEG_RADICAND_TOL = 1e-12


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalues with an optional aligned orthonormal eigenbasis.

    ``eigenvectors[:, j]`` belongs to ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.eigenvalues)


def eigen_system(chain: CouplingChain, vectors: bool = True) -> Spectrum:
    """Full eigen-decomposition of the chain's coupling matrix.

    Eigenvalues are returned in ascending order, ties kept in solver order.
    Degenerate eigenvalues are repeated; the basis inside a degenerate
    subspace is whatever the solver returns.
    """
    if chain.n > MAX_N:
        raise EigenSolverError(f"n={chain.n} exceeds the supported size {MAX_N}")
    d = np.zeros(chain.n)
    e = chain.as_array()
    try:
        if vectors:
            w, v = eigh_tridiagonal(d, e, lapack_driver="stev")
        else:
            w = eigh_tridiagonal(d, e, eigvals_only=True, lapack_driver="stev")
            v = None
    except LinAlgError as exc:
        raise EigenSolverError(str(exc)) from exc
    order = np.argsort(w, kind="stable")
    w = w[order]
    if v is not None:
        v = v[:, order]
    return Spectrum(w, v)


def eigenvalues(chain: CouplingChain) -> np.ndarray:
    return eigen_system(chain, vectors=False).eigenvalues


def a4_eigenvalues_closed_form(a1: float, a2: float, a3: float) -> np.ndarray:
    """Eigenvalues of the 4-element chain from the explicit radical formula.

    With ``x2 = a1^2 + a2^2 + a3^2`` and ``u4 = a1^2 a3^2`` the eigenvalues
    are ``+-1/2 sqrt(2 x2 +- 2 sqrt(x2^2 - 4 u4))``, returned ascending.
    """
    x2 = a1 * a1 + a2 * a2 + a3 * a3
    u4 = (a1 * a3) ** 2
    inner = x2 * x2 - 4.0 * u4
    # inner = (a1^2 - a3^2)^2 + a2^2 (a2^2 + 2 a1^2 + 2 a3^2) >= 0
    scale = max(x2 * x2, 1.0)
    if inner < -NEG_RADICAND_TOL * scale:
        raise ArithmeticError(f"negative inner radicand {inner}")
    root = np.sqrt(max(inner, 0.0))
    big = 0.5 * np.sqrt(2.0 * x2 + 2.0 * root)
    small = 0.5 * np.sqrt(max(2.0 * x2 - 2.0 * root, 0.0))
    return np.array([-big, -small, small, big])


def _matching_sums(a2: np.ndarray) -> list[float]:
    # sum over k-matchings of the path graph of prod a_i^2, k = 1 .. floor(n/2)
    m = len(a2)
    sums = []
    for k in range(1, (m + 1) // 2 + 1):
        total = 0.0
        for idx in combinations(range(m), k):
            if all(j - i >= 2 for i, j in zip(idx, idx[1:])):
                total += float(np.prod(a2[list(idx)]))
        sums.append(total)
    return sums


def charpoly_invariants(chain: CouplingChain) -> tuple[float, ...]:
    """Coefficients ``(e2, e4, ...)`` of the characteristic polynomial.

    ``det(x I - A) = x^n - e2 x^(n-2) + e4 x^(n-4) - ...``; for ``n = 4``
    that is ``e2 = a1^2 + a2^2 + a3^2`` and ``e4 = a1^2 a3^2``. Each ``e_2k``
    is a sum over sets of ``k`` non-adjacent couplings, so it does not
    depend on any eigensolver.
    """
    if chain.n > 9:
        raise ValueError(f"charpoly_invariants supports n <= 9, got n={chain.n}")
    a2 = chain.as_array() ** 2
    return tuple(_matching_sums(a2))


def eigen_symmetric_functions(values: np.ndarray) -> tuple[float, ...]:
    """``(-1)^k`` times the even elementary symmetric functions of ``values``.

    For a spectrum of a zero-diagonal chain these equal
    :func:`charpoly_invariants`.
    """
    coeffs = np.poly(np.asarray(values, dtype=float))
    return tuple(float((-1) ** k * coeffs[2 * k]) for k in range(1, len(values) // 2 + 1))
