"""Non-degenerate four-wave mixing acting on OAM amplitudes.

The signal field is ``chi3 * E_p1 * E_p2 * conj(E_p3)``, so in the charge
basis each pair ``(j, k)`` of P2/P3 charges feeds the signal charge
``l1 + j - k`` with weight ``chi3 * c1 * c2_j * conj(c3_k)``.  The radial
prefactors of the three beams carry no charge dependence relevant to the
logic and are folded into ``chi3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .oamstate import OAMSuperposition


def signal_l(l1: int, l2: int, l3: int) -> int:
    return l1 + l2 - l3


@dataclass(frozen=True)
class FWMConfig:
    chi3: complex = 1.0
    pump1_state: OAMSuperposition = field(
        default_factory=lambda: OAMSuperposition.basis(0, role="pump"))
    efficiency: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "chi3", complex(self.chi3))
        if not (math.isfinite(self.chi3.real) and math.isfinite(self.chi3.imag)):
            raise ValueError("chi3 must be finite")
        if len(self.pump1_state) != 1:
            raise ValueError("pump P1 must carry a single charge")
        if not (0.0 < self.efficiency <= 1.0):
            raise ValueError(f"efficiency out of (0,1]: {self.efficiency!r}")

    @property
    def pump1_l(self) -> int:
        return self.pump1_state.charges[0]


@dataclass(frozen=True)
class FWMOutput:
    """Renormalised signal plus the event weight ``efficiency * |raw|**2``."""

    signal: OAMSuperposition
    raw: OAMSuperposition
    weight: float


def fwm_amplitudes(config: FWMConfig, p2: OAMSuperposition,
                   p3: OAMSuperposition) -> OAMSuperposition:
    """Unnormalised signal amplitudes; linear in ``p2``, antilinear in ``p3``."""
    if len(p2) == 0 or len(p3) == 0:
        raise ValueError("FWM inputs must be non-empty")
    (l1, c1), = config.pump1_state.items()
    scale = config.chi3 * c1
    acc: dict[int, complex] = {}
    for j, c2 in p2.items():
        for k, c3 in p3.items():
            ls = signal_l(l1, j, k)
            acc[ls] = acc.get(ls, 0j) + scale * c2 * c3.conjugate()
    return OAMSuperposition(acc, role="signal")


def fwm_transform(config: FWMConfig, p2: OAMSuperposition,
                  p3: OAMSuperposition) -> FWMOutput:
    for name, s in (("P2", p2), ("P3", p3)):
        if len(s) and not s.is_normalized():
            raise ValueError(f"{name} state is not normalised (norm={s.norm():.6g})")
    raw = fwm_amplitudes(config, p2, p3)
    norm2 = raw.norm() ** 2
    if norm2 == 0.0:
        raise ValueError("FWM signal vanished by destructive interference")
    return FWMOutput(raw.normalize(), raw, config.efficiency * norm2)
