"""Deutsch's algorithm on OAM qubits with the FWM cell as U_f.

Pipeline: ``|0>|1>`` -> Hadamard on both photons -> U_f (one FWM pass per
control branch, target superposition carried linearly) -> Hadamard on the
control after folding ``l = +-1`` onto logical ``|1>`` -> projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import WiringError
from .gates import GATE_KINDS, GateSetup, build_gate, gate_event, truth_table
from .oamstate import (HADAMARD, OAMSuperposition, decode_l, encode_logical,
                       from_logical, hadamard, logical_amplitudes)

CONSTANT = "constant"
BALANCED = "balanced"

_PHASE_TOL = 1e-12


@dataclass(frozen=True)
class JointState:
    """Two-photon amplitudes keyed by ``(control_l, target_l)``."""

    amplitudes: tuple[tuple[tuple[int, int], complex], ...]

    @classmethod
    def from_map(cls, amps: dict) -> "JointState":
        kept = sorted((k, complex(v)) for k, v in amps.items() if abs(v) >= 1e-15)
        return cls(tuple(kept))

    @classmethod
    def product(cls, control: OAMSuperposition, target: OAMSuperposition) -> "JointState":
        return cls.from_map({(lc, lt): a * b
                             for lc, a in control.items() for lt, b in target.items()})

    @classmethod
    def from_logical(cls, matrix: np.ndarray, control_one_l: int = 1,
                     target_one_l: int = 1) -> "JointState":
        lc = (0, control_one_l)
        lt = (0, target_one_l)
        return cls.from_map({(lc[i], lt[j]): matrix[i, j]
                             for i in range(2) for j in range(2)})

    def as_dict(self) -> dict:
        return dict(self.amplitudes)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for _, a in self.amplitudes))

    def control_branches(self) -> dict[int, OAMSuperposition]:
        """Unnormalised conditional target state for each control charge."""
        out: dict[int, dict[int, complex]] = {}
        for (lc, lt), a in self.amplitudes:
            out.setdefault(lc, {})[lt] = a
        return {lc: OAMSuperposition(t, role="target") for lc, t in out.items()}

    def logical(self) -> np.ndarray:
        """2x2 matrix ``M[c, t]`` after folding ``l = +-1`` onto ``|1>``.

        Each control branch folds its target separately.
        """
        m = np.zeros((2, 2), dtype=complex)
        for lc, target in self.control_branches().items():
            ci = decode_l(lc)
            t0, t1 = logical_amplitudes(target)
            m[ci, 0] += t0
            m[ci, 1] += t1
        return m


def factorize(matrix: np.ndarray, tol: float = 1e-9):
    """Split a rank-1 2x2 matrix into ``phase * outer(u, v)``.

    ``u`` and ``v`` are unit vectors whose first non-negligible entry is real
    and positive; ``phase`` is the leftover unit-modulus global factor
    (times the overall norm).
    """
    norm = np.linalg.norm(matrix)
    if norm == 0:
        raise ValueError("zero joint state")
    i, j = np.unravel_index(np.argmax(np.abs(matrix)), matrix.shape)
    u = matrix[:, j].copy()
    v = matrix[i, :].copy()
    u = _canonical(u / np.linalg.norm(u))
    v = _canonical(v / np.linalg.norm(v))
    g = np.vdot(np.outer(u, v).ravel(), matrix.ravel())
    if np.linalg.norm(matrix - g * np.outer(u, v)) > tol * norm:
        raise ValueError("joint state is entangled, not a product")
    return complex(g), u, v


def _canonical(vec: np.ndarray) -> np.ndarray:
    for x in vec:
        if abs(x) > _PHASE_TOL:
            return vec * (abs(x) / x)
    return vec


@dataclass(frozen=True)
class StageSnapshot:
    name: str
    physical: JointState
    logical: np.ndarray
    global_phase: complex
    control_factor: np.ndarray
    target_factor: np.ndarray

    @property
    def global_sign(self) -> int:
        return 1 if self.global_phase.real >= 0 else -1


def _snapshot(name: str, physical: JointState, logical: np.ndarray | None = None):
    m = physical.logical() if logical is None else logical
    g, u, v = factorize(m)
    m.setflags(write=False)
    return StageSnapshot(name, physical, m, g, u, v)


@dataclass(frozen=True)
class DeutschOptions:
    chi3: complex = 1.0
    efficiency: float = 1.0
    target_one_l: int | None = None
    not_pump_shift: int = -1


@dataclass(frozen=True)
class DeutschResult:
    """Outcome of one run.

    ``p0``/``p1`` are post-selected on an FWM event; the ``*_scaled`` values
    multiply by ``event_probability``.
    """

    kind: str
    setup: GateSetup
    psi1: StageSnapshot
    psi2: StageSnapshot
    psi3: StageSnapshot
    p0: float
    p1: float
    event_probability: float
    global_sign: int
    verdict: str
    warnings: tuple[str, ...] = field(default=())

    @property
    def p0_scaled(self) -> float:
        return self.p0 * self.event_probability

    @property
    def p1_scaled(self) -> float:
        return self.p1 * self.event_probability

    def stage(self, name: str) -> StageSnapshot:
        if name not in ("psi1", "psi2", "psi3"):
            raise ValueError(f"unknown stage {name!r}")
        return getattr(self, name)


def run_deutsch(kind: str, options: DeutschOptions = DeutschOptions()) -> DeutschResult:
    setup = build_gate(kind, not_pump_shift=options.not_pump_shift,
                       target_one_l=options.target_one_l)
    conv = setup.target_convention

    control = encode_logical(0, conv, "control")
    target = encode_logical(1, conv, "target")
    psi1 = JointState.product(hadamard(control, conv), hadamard(target, conv))

    amps2: dict[tuple[int, int], complex] = {}
    event = 0.0
    notes: list[str] = []
    for lc, cond in psi1.control_branches().items():
        weight = cond.norm()
        try:
            res = gate_event(setup, OAMSuperposition.basis(lc, role="control"),
                             cond.normalize(), chi3=options.chi3,
                             efficiency=options.efficiency)
        except ValueError as exc:
            raise WiringError(str(exc), gate=setup.kind) from exc
        notes.extend(res.warnings)
        event += weight**2 * res.weight
        for lt, a in res.signal.items():
            amps2[(lc, lt)] = amps2.get((lc, lt), 0j) + weight * a
    psi2 = JointState.from_map(amps2)

    m2 = psi2.logical()
    m3 = HADAMARD @ m2
    psi3 = JointState.from_logical(m3, conv.control_one_l, conv.target_one_l)

    probs = np.sum(np.abs(m3) ** 2, axis=1)
    total = float(probs.sum())
    p0, p1 = float(probs[0] / total), float(probs[1] / total)

    snap3 = _snapshot("psi3", psi3, m3)
    return DeutschResult(
        kind=setup.kind, setup=setup,
        psi1=_snapshot("psi1", psi1), psi2=_snapshot("psi2", psi2, m2), psi3=snap3,
        p0=p0, p1=p1, event_probability=event,
        global_sign=snap3.global_sign,
        verdict=CONSTANT if p0 > p1 else BALANCED,
        warnings=tuple(notes))


def oracle_classify(kind: str) -> str:
    """Classical two-query answer read off the gate's truth table."""
    f = {c: out for c, t, out in truth_table(build_gate(kind)) if t == 0}
    return CONSTANT if f[0] == f[1] else BALANCED


def testing_state(result: DeutschResult, stage: str) -> OAMSuperposition:
    """Control-photon factor of psi2 or psi3 as a physical OAM state.

    At psi2 the ``|1>`` component is shown at ``l = +1`` when it interferes
    in phase with ``|0>`` and at ``l = -1`` when it carries the opposite
    sign, the two interference modes read out on the camera.
    """
    if stage not in ("psi2", "psi3"):
        raise ValueError("stage must be 'psi2' or 'psi3'")
    u = result.stage(stage).control_factor
    one_l = 1
    if stage == "psi2" and abs(u[0]) > _PHASE_TOL and abs(u[1]) > _PHASE_TOL:
        one_l = 1 if (u[1] / u[0]).real > 0 else -1
    return from_logical(u[0], u[1], one_l, role="control")


def run_all(options: DeutschOptions = DeutschOptions()) -> dict[str, DeutschResult]:
    return {kind: run_deutsch(kind, options) for kind in GATE_KINDS}


__all__ = [
    "BALANCED", "CONSTANT", "DeutschOptions", "DeutschResult", "JointState",
    "StageSnapshot", "factorize", "oracle_classify",
    "run_all", "run_deutsch", "testing_state",
]
