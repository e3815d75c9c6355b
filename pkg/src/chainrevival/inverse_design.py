"""Closed-form couplings that realise a target commensurate spectrum.

Every family maps integer targets ``n1, n2, ...`` and a base frequency
``q`` to a chain whose eigenvalues are ``q`` times the signed targets
(plus a zero eigenvalue for odd chains):

==============  ======  ===============================  ==================
family          size    free parameters                  spectrum / q
==============  ======  ===============================  ==================
A4              4       s, eps1, eps2                    +-n1, +-n2
A5_GENERAL      5       s, t  (s^2 != t^2)               0, +-n1, +-n2
A5_EQUAL_ENDS   5       phi                              0, +-n1, +-n2
M5              5       (mirror symmetric)               0, +-n1, +-n2
A7              7       (mirror symmetric)               0, +-n1, +-n2, +-n3
A9              9       (mirror symmetric)               0, +-n1 .. +-n4
==============  ======  ===============================  ==================

Couplings are returned in the non-negative gauge. Designs in which a
coupling vanishes are returned with ``decomposed=True``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import reduce
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .chain import CouplingChain, gauge_normalize

# squared couplings in [-SQ_TOL * scale, 0) are closed-form cancellation noise
SQ_TOL = 1e-12


class Family(str, Enum):
    A4 = "A4"
    A5_GENERAL = "A5_GENERAL"
    A5_EQUAL_ENDS = "A5_EQUAL_ENDS"
    M5 = "M5"
    A7 = "A7"
    A9 = "A9"

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip().upper().replace("-", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown design family {name!r}") from None


_ALIASES = {"A5": "A5_GENERAL", "A5E": "A5_EQUAL_ENDS", "A5_EQUAL": "A5_EQUAL_ENDS"}

N_TARGETS = {
    Family.A4: 2,
    Family.A5_GENERAL: 2,
    Family.A5_EQUAL_ENDS: 2,
    Family.M5: 2,
    Family.A7: 3,
    Family.A9: 4,
}

FREE_PARAMS = {
    Family.A4: ("s",),
    Family.A5_GENERAL: ("s", "t"),
    Family.A5_EQUAL_ENDS: ("phi",),
    Family.M5: (),
    Family.A7: (),
    Family.A9: (),
}


class DesignError(ValueError):
    pass


class InfeasibleParameters(DesignError):
    pass


class DegenerateRequiresZeroS(DesignError):
    pass


class EqualEndsBranch(DesignError):
    pass


class DegenerateDenominator(DesignError):
    pass


@dataclass(frozen=True)
class DesignSpec:
    family: Family
    targets: tuple[int, ...]
    q: float = 1.0
    s: Optional[float] = None
    t: Optional[float] = None
    eps1: int = 1
    eps2: int = 1
    phi: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family)
                           if isinstance(self.family, str) else self.family)
        object.__setattr__(self, "targets", tuple(int(n) for n in self.targets))
        if not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise ValueError("eps1 and eps2 must be +1 or -1")
        need = N_TARGETS[self.family]
        if len(self.targets) != need:
            raise ValueError(f"{self.family.value} needs {need} targets, got {len(self.targets)}")

    @classmethod
    def from_dict(cls, data: Mapping) -> "DesignSpec":
        known = {"family", "targets", "q", "s", "t", "eps1", "eps2", "phi"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown DesignSpec fields: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("eps1", "eps2"):
            if key in kwargs:
                kwargs[key] = int(kwargs[key])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        out = {"family": self.family.value, "targets": list(self.targets), "q": self.q}
        for key in ("s", "t", "phi"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.family is Family.A4:
            out["eps1"], out["eps2"] = self.eps1, self.eps2
        return out


@dataclass(frozen=True)
class DesignResult:
    chain: CouplingChain
    expected_labels: tuple[int, ...]
    q: float
    decomposed: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def expected_spectrum(self) -> np.ndarray:
        return self.q * np.asarray(self.expected_labels, dtype=float)

    @property
    def reduced(self) -> tuple[float, tuple[int, ...]]:
        """``(q * g, labels / g)`` with ``g`` the GCD of the labels."""
        g = reduce(math.gcd, (abs(n) for n in self.expected_labels), 0) or 1
        return self.q * g, tuple(n // g for n in self.expected_labels)


def _signed_labels(targets: Iterable[int], with_zero: bool) -> tuple[int, ...]:
    pos = [int(n) for n in targets]
    labels = [-n for n in pos] + pos + ([0] if with_zero else [])
    return tuple(sorted(labels))


def _gcd_note(targets: Sequence[int]) -> list[str]:
    g = reduce(math.gcd, (abs(n) for n in targets), 0)
    if g > 1:
        reduced = [n // g for n in targets]
        return [f"gcd_targets={g}: spectrum equals (q*{g}) * {reduced}"]
    return []


def _check_square(name: str, value: float, scale: float) -> float:
    if value < 0:
        if value >= -SQ_TOL * max(scale, 1.0):
            return 0.0
        raise InfeasibleParameters(f"{name}^2 = {value:.6g} < 0")
    return value


def _finish(couplings, labels, q, notes) -> DesignResult:
    raw = CouplingChain(couplings)
    chain = gauge_normalize(raw)
    notes = list(notes)
    if any(a < 0 for a in raw.couplings):
        notes.append("gauge: negative couplings flipped to non-negative")
    decomposed = any(a == 0.0 for a in chain.couplings)
    if decomposed:
        zeros = ", ".join(f"a{i + 1}" for i, a in enumerate(chain.couplings) if a == 0.0)
        notes.append(f"decomposed: {zeros} = 0 splits the chain")
    return DesignResult(chain, labels, q, decomposed, tuple(notes))


def _from_squares(squares: Sequence[float], q: float, mirror: bool = False) -> list[float]:
    half = [q * math.sqrt(v) for v in squares]
    return half + half[::-1] if mirror else half


def design_a4(
    n1: int, n2: int, s: float = 0.0, eps1: int = 1, eps2: int = 1, q: float = 1.0
) -> DesignResult:
    """4-element chain with spectrum ``q * (+-n1, +-n2)``.

    ``a2 = q s`` is the free middle coupling; real solutions need
    ``|s| <= |n1 - n2|``. Equal targets force ``s = 0``, which splits the
    chain into two identical pairs.
    """
    if n1 < 1 or n2 < 1:
        raise InfeasibleParameters("A4 targets must be positive integers")
    if n1 == n2 and s != 0:
        raise DegenerateRequiresZeroS(f"n1 = n2 = {n1} requires s = 0, got s = {s}")
    outer = (n1 + n2) ** 2 - s * s
    inner = (n1 - n2) ** 2 - s * s
    outer = _check_square("(n1+n2)^2 - s", outer, (n1 + n2) ** 2)
    if inner < 0 and inner < -SQ_TOL * max((n1 - n2) ** 2, 1):
        raise InfeasibleParameters(
            f"|s| = {abs(s):.6g} > |n1 - n2| = {abs(n1 - n2)}: (n1-n2)^2 - s^2 < 0"
        )
    inner = max(inner, 0.0)
    r_out, r_in = eps1 * math.sqrt(outer), eps2 * math.sqrt(inner)
    a = [0.5 * q * (r_out + r_in), q * s, 0.5 * q * (r_out - r_in)]
    return _finish(a, _signed_labels((n1, n2), False), q, _gcd_note((n1, n2)))


def design_a5_general(n1: int, n2: int, s: float, t: float, q: float = 1.0) -> DesignResult:
    """5-element chain with unequal end couplings ``a1 = q|s|``, ``a4 = q|t|``."""
    s2, t2 = s * s, t * t
    if s2 == t2:
        raise EqualEndsBranch("s^2 = t^2: use the equal-ends family (A5_EQUAL_ENDS)")
    p = n1 * n1 * n2 * n2 - s2 * t2
    r = n1 * n1 + n2 * n2 - (s2 + t2)
    scale = max(n1 * n1 * n2 * n2, s2 * t2, 1.0) / abs(t2 - s2)
    a2 = _check_square("a2", (p - r * s2) / (t2 - s2), scale)
    a3 = _check_square("a3", (-p + r * t2) / (t2 - s2), scale)
    a = _from_squares([s2, a2, a3, t2], q)
    return _finish(a, _signed_labels((n1, n2), True), q, _gcd_note((n1, n2)))


def design_a5_equal_ends(n1: int, n2: int, phi: float = math.pi / 4, q: float = 1.0) -> DesignResult:
    """5-element chain with ``a1 = a4 = q n1``.

    The two middle couplings lie on a circle of radius ``q sqrt(n2^2 - n1^2)``
    at angle ``phi``; ``phi = pi/4`` is the mirror-symmetric member.
    """
    if not n2 > n1 >= 1:
        raise InfeasibleParameters(f"equal-ends design needs n2 > n1 >= 1, got ({n1}, {n2})")
    radius = q * math.sqrt(n2 * n2 - n1 * n1)
    c, sn = math.cos(phi), math.sin(phi)
    # snap the rotation to the axes so that phi = k pi/2 gives an exact zero
    c = 0.0 if abs(c) < SQ_TOL else c
    sn = 0.0 if abs(sn) < SQ_TOL else sn
    a = [q * n1, radius * c, radius * sn, q * n1]
    return _finish(a, _signed_labels((n1, n2), True), q, _gcd_note((n1, n2)))


def design_m5(n1: int, n2: int, q: float = 1.0) -> DesignResult:
    """Mirror-symmetric 5-element chain ``(a1, a2, a2, a1)``.

    ``a1 = q n1`` and ``a2 = q sqrt((n2^2 - n1^2) / 2)``. ``n1 = 0`` leaves a
    3-element chain with two uncoupled ends; ``n2 = n1`` leaves two
    independent pairs.
    """
    notes = []
    if n1 < 0 or n2 < n1 or n2 < 1:
        raise InfeasibleParameters(f"M5 needs n2 > n1 >= 1, got ({n1}, {n2}): a2^2 < 0")
    if n1 == 0:
        notes.append("a1 = 0: trivially periodic 3-element chain with uncoupled ends")
    if n2 == n1:
        notes.append("a2 = 0: two decoupled pairs")
    a = _from_squares([n1 * n1, (n2 * n2 - n1 * n1) / 2.0], q, mirror=True)
    return _finish(a, _signed_labels((n1, n2), True), q, notes + _gcd_note((n1, n2)))


def design_a7(n1: int, n2: int, n3: int, q: float = 1.0) -> DesignResult:
    """Mirror-symmetric 7-element chain ``(a1, a2, a3, a3, a2, a1)``."""
    d = n2 * n2 + n3 * n3 - n1 * n1
    if d <= 0:
        raise InfeasibleParameters(f"n2^2 + n3^2 - n1^2 = {d} must be positive")
    a1 = n2 * n2 * n3 * n3 / d
    a2 = _check_square("a2", n1 * n1 - a1, n1 * n1)
    a = _from_squares([a1, a2, d / 2.0], q, mirror=True)
    return _finish(a, _signed_labels((n1, n2, n3), True), q, _gcd_note((n1, n2, n3)))


def design_a9(n1: int, n2: int, n3: int, n4: int, q: float = 1.0) -> DesignResult:
    """Mirror-symmetric 9-element chain ``(a1, a2, a3, a4, a4, a3, a2, a1)``."""
    lo2, lo4 = n1 * n1 + n2 * n2, n1 * n1 * n2 * n2
    span = n3 * n3 + n4 * n4 - lo2
    prod = n3 * n3 * n4 * n4 - lo4
    if span == 0:
        raise DegenerateDenominator(
            "n3^2 + n4^2 = n1^2 + n2^2: a4 = 0 branch (two 4-element blocks and a lone site)"
        )
    den = lo2 * span - prod
    if den == 0:
        raise DegenerateDenominator("a3 = 0 branch: the chain splits into 3-element blocks")
    a1 = lo4 * span / den
    scale = max(abs(prod / span), abs(a1), 1.0)
    a1 = _check_square("a1", a1, scale)
    a2 = _check_square("a2", prod / span - a1, scale)
    a3 = _check_square("a3", den / span, scale)
    a4 = _check_square("a4", span / 2.0, scale)
    a = _from_squares([a1, a2, a3, a4], q, mirror=True)
    return _finish(a, _signed_labels((n1, n2, n3, n4), True), q, _gcd_note((n1, n2, n3, n4)))


def design(spec: DesignSpec) -> DesignResult:
    """Dispatch a :class:`DesignSpec` to its family's closed-form solution."""
    f, n, q = spec.family, spec.targets, spec.q
    if f is Family.A4:
        return design_a4(*n, s=spec.s or 0.0, eps1=spec.eps1, eps2=spec.eps2, q=q)
    if f is Family.A5_GENERAL:
        if spec.s is None or spec.t is None:
            raise ValueError("A5_GENERAL needs both s and t")
        return design_a5_general(*n, s=spec.s, t=spec.t, q=q)
    if f is Family.A5_EQUAL_ENDS:
        phi = math.pi / 4 if spec.phi is None else spec.phi
        return design_a5_equal_ends(*n, phi=phi, q=q)
    if f is Family.M5:
        return design_m5(*n, q=q)
    if f is Family.A7:
        return design_a7(*n, q=q)
    return design_a9(*n, q=q)


@dataclass(frozen=True)
class ScanPoint:
    params: dict
    feasible: bool
    reason: str


def feasible_region_scan(
    family: Family | str,
    targets: Sequence[int],
    grid: Optional[Mapping[str, Sequence[float]]] = None,
    q: float = 1.0,
    **fixed,
) -> list[ScanPoint]:
    """Feasibility verdict at every point of a grid over free parameters.

    ``grid`` maps parameter names (``s``, ``t``, ``phi``) to values; the
    cartesian product is scanned in order. Families without free
    parameters yield a single point.
    """
    family = Family.parse(family) if isinstance(family, str) else family
    grid = dict(grid or {})
    allowed = FREE_PARAMS[family]
    extra = set(grid) - set(allowed)
    if extra:
        raise ValueError(f"{family.value} has no free parameter(s) {sorted(extra)}")
    names = list(grid)
    points = []
    for values in itertools.product(*(grid[k] for k in names)):
        params = dict(zip(names, (float(v) for v in values)))
        spec = DesignSpec(family, tuple(targets), q=q, **fixed, **params)
        try:
            result = design(spec)
        except EqualEndsBranch:
            points.append(ScanPoint(params, False, "equal-ends-branch"))
        except DesignError as exc:
            points.append(ScanPoint(params, False, f"infeasible: {exc}"))
        else:
            points.append(ScanPoint(params, True, "decomposed" if result.decomposed else "ok"))
    return points
