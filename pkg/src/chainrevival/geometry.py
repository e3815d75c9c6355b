"""Waveguide separations from couplings under exponential evanescent decay.

Neighbouring guides at distance ``d`` couple with
``a(d) = C0 * exp(-kappa * (d - d_ref))``. Separation differences depend
only on coupling ratios, so ratios such as ``L23 / L12`` are independent
of ``C0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .chain import CouplingChain


class ZeroCoupling(ValueError):
    pass


class NonPositiveSeparation(ValueError):
    pass


class DegenerateSamples(ValueError):
    pass


@dataclass(frozen=True)
class CouplingModel:
    C0: float
    kappa: float
    d_ref: float

    def __post_init__(self):
        for name in ("C0", "kappa", "d_ref"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")

    def coupling(self, d):
        return self.C0 * np.exp(-self.kappa * (np.asarray(d, dtype=float) - self.d_ref))

    def separation(self, a):
        return self.d_ref - np.log(np.asarray(a, dtype=float) / self.C0) / self.kappa


@dataclass(frozen=True)
class WaveguideLayout:
    separations: tuple[float, ...]
    model: CouplingModel

    def ratios(self) -> np.ndarray:
        """Separations relative to the first one."""
        d = np.asarray(self.separations)
        return d / d[0]

    def to_dict(self) -> dict:
        return {
            "separations_um": list(self.separations),
            "model": {
                "C0": self.model.C0,
                "kappa_per_um": self.model.kappa,
                "d_ref_um": self.model.d_ref,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WaveguideLayout":
        m = data["model"]
        model = CouplingModel(float(m["C0"]), float(m["kappa_per_um"]), float(m["d_ref_um"]))
        seps = tuple(float(d) for d in data["separations_um"])
        if not seps or min(seps) <= 0:
            raise NonPositiveSeparation("separations must be strictly positive")
        return cls(seps, model)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def separations_from_couplings(chain: CouplingChain, model: CouplingModel) -> WaveguideLayout:
    a = np.abs(chain.as_array())
    if np.any(a == 0):
        idx = [i + 1 for i in np.flatnonzero(a == 0)]
        raise ZeroCoupling(
            f"coupling(s) {idx} are zero, i.e. infinitely far apart; "
            "split the chain into independent arrays instead"
        )
    d = model.separation(a)
    if np.any(d <= 0):
        raise NonPositiveSeparation(
            f"model gives non-positive separations {d.tolist()}; "
            "increase d_ref or kappa, or lower C0"
        )
    return WaveguideLayout(tuple(float(x) for x in d), model)


def couplings_from_separations(layout: WaveguideLayout) -> CouplingChain:
    return CouplingChain(layout.model.coupling(layout.separations))


@dataclass(frozen=True)
class Calibration:
    model: CouplingModel
    residuals: np.ndarray

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.residuals**2)))


def calibrate_model(samples: Sequence[tuple[float, float]]) -> Calibration:
    """Least-squares fit of ``ln a = ln C0 - kappa (d - d_ref)``.

    ``d_ref`` is the first sample's separation; residuals are in ``ln a``.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 2:
        raise DegenerateSamples("need at least two (separation, coupling) pairs")
    d, a = data[:, 0], data[:, 1]
    if np.any(a <= 0):
        raise DegenerateSamples("couplings must be positive")
    if np.ptp(d) == 0:
        raise DegenerateSamples("separations must not all be equal")
    d_ref = float(d[0])
    slope, intercept = np.polyfit(d - d_ref, np.log(a), 1)
    kappa = -float(slope)
    if kappa <= 0:
        raise DegenerateSamples(f"fitted decay rate {kappa:.3g} is not positive")
    resid = np.log(a) - (intercept + slope * (d - d_ref))
    return Calibration(CouplingModel(float(np.exp(intercept)), kappa, d_ref), resid)


def fit_decay_to_ratios(chain: CouplingChain, ratios: Sequence[Optional[float]]) -> float:
    """Dimensionless ``kappa * d_1`` that best reproduces target ``d_i / d_1``.

    ``ratios[i]`` is the target for separation ``i`` (``None`` skips it;
    ``ratios[0]`` is 1 by definition). With ``C0 = a_1`` and
    ``d_ref = d_1`` the model predicts ``d_i / d_1 = 1 - ln(a_i / a_1) / x``;
    the least-squares ``1 / x`` is linear.
    """
    a = np.abs(chain.as_array())
    logs, gaps = [], []
    for i, r in enumerate(ratios):
        if i == 0 or r is None:
            continue
        logs.append(np.log(a[i] / a[0]))
        gaps.append(1.0 - r)
    logs, gaps = np.asarray(logs), np.asarray(gaps)
    inv = float(logs @ gaps / (logs @ logs))
    return 1.0 / inv


def min_separation_advisory(
    layout: WaveguideLayout, diameter: float, min_ratio: float = 2.2
) -> list[str]:
    """Warnings for guides closer than ``min_ratio`` diameters.

    Closely spaced guides form extended supermodes, which the discrete
    nearest-neighbour model does not describe. No mode physics is computed.
    """
    out = []
    for i, d in enumerate(layout.separations):
        if d / diameter < min_ratio:
            out.append(
                f"separation {i + 1} is {d / diameter:.3g} diameters (< {min_ratio}): "
                "coupled-mode model may be inaccurate"
            )
    return out
