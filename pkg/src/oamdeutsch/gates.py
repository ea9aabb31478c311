"""The four U_f gate setups realised in the FWM cell.

Each setup fixes how the P1 pump charge is chosen and which optical
elements sit on the P1, P2 (target) and P3 (control) arms.  Holograms
shift the charge by an integer, mirrors flip its sign; every other element
only touches the routing tag (polarisation, frequency channel).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import AlphabetError, WiringError
from .fwm import FWMConfig, fwm_amplitudes, signal_l
from .lgmode import MAX_CHARGE
from .oamstate import (LogicalConvention, OAMSuperposition, decode_l,
                       encode_logical)

GATE_KINDS = ("I", "NOT", "CNOT", "ZCNOT")
ELEMENT_KINDS = ("cgh", "mirror", "bs", "pbs", "hwp", "aom")


class SuperposedControlWarning(UserWarning):
    """The control photon reached the FWM cell in a superposition."""


@dataclass(frozen=True)
class OpticalElement:
    kind: str
    shift: int = 0
    arm: str = ""

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind == "cgh" and not -2 <= self.shift <= 2:
            raise ValueError(f"hologram shift must lie in [-2, 2], got {self.shift}")
        if self.kind not in ("cgh", "aom") and self.shift:
            raise ValueError(f"{self.kind} takes no shift")

    def __str__(self):
        if self.kind in ("cgh", "aom"):
            return f"{self.kind}({self.shift:+d})"
        return self.kind


def cgh(shift: int, arm: str = "") -> OpticalElement:
    return OpticalElement("cgh", shift, arm)


def mirror(arm: str = "") -> OpticalElement:
    return OpticalElement("mirror", 0, arm)


def aom(freq_shift: int = 1, arm: str = "") -> OpticalElement:
    return OpticalElement("aom", freq_shift, arm)


def hwp(arm: str = "") -> OpticalElement:
    return OpticalElement("hwp", 0, arm)


def bs(arm: str = "") -> OpticalElement:
    return OpticalElement("bs", 0, arm)


def pbs(arm: str = "") -> OpticalElement:
    return OpticalElement("pbs", 0, arm)


@dataclass(frozen=True)
class BeamTag:
    polarization: str = "H"
    frequency_channel: int = 0

    def __post_init__(self):
        if self.polarization not in ("H", "V"):
            raise ValueError(f"polarization must be 'H' or 'V', got {self.polarization!r}")


def _charge_map(element: OpticalElement, l: int) -> int:
    if element.kind == "cgh":
        return l + element.shift
    if element.kind == "mirror":
        return -l
    return l


def element_apply(element: OpticalElement, state: OAMSuperposition) -> OAMSuperposition:
    out = state.map_charges(lambda l: _charge_map(element, l))
    for l in out.charges:
        if abs(l) > MAX_CHARGE:
            raise AlphabetError(f"{element} produced |l| = {abs(l)} > {MAX_CHARGE}")
    return out


def element_tag(element: OpticalElement, tag: BeamTag) -> BeamTag:
    if element.kind == "hwp":
        return replace(tag, polarization="V" if tag.polarization == "H" else "H")
    if element.kind == "aom":
        return replace(tag, frequency_channel=tag.frequency_channel + element.shift)
    return tag


def apply_chain(chain: Sequence[OpticalElement], state: OAMSuperposition) -> OAMSuperposition:
    for element in chain:
        state = element_apply(element, state)
    return state


def chain_tag(chain: Sequence[OpticalElement], tag: BeamTag) -> BeamTag:
    for element in chain:
        tag = element_tag(element, tag)
    return tag


@dataclass(frozen=True)
class GateSetup:
    """One U_f configuration.

    ``pump1_l`` is the fixed P1 charge, or ``None`` when P1 is split from the
    probe's seed beam and so carries the probe charge pushed through
    ``p1_chain``.
    """

    kind: str
    pump1_l: int | None
    p1_chain: tuple[OpticalElement, ...] = ()
    p2_chain: tuple[OpticalElement, ...] = ()
    p3_chain: tuple[OpticalElement, ...] = ()
    target_convention: LogicalConvention = LogicalConvention()
    p1_tag: BeamTag = BeamTag("H", 1)
    p2_tag: BeamTag = BeamTag("V", 2)
    p3_tag: BeamTag = BeamTag("H", 0)
    shared_seed: bool = False

    @property
    def follows_probe(self) -> bool:
        return self.pump1_l is None

    @property
    def pump1_offset(self) -> int | None:
        """Net P1 charge shift relative to the probe when P1 follows it."""
        if not self.follows_probe:
            return None
        return apply_chain(self.p1_chain, OAMSuperposition.basis(0)).charges[0]

    def pump_for_probe(self, l3: int) -> int:
        if self.pump1_l is not None:
            return self.pump1_l
        return apply_chain(self.p1_chain, OAMSuperposition.basis(l3)).charges[0]


def build_gate(kind: str, *, not_pump_shift: int = -1,
               target_one_l: int | None = None) -> GateSetup:
    """Canonical setup for ``kind``.

    ``not_pump_shift`` selects the NOT variant: -1 (default, ``l_s = l_p2 - 1``)
    or +1 (``l_s = l_p2 + 1``, which needs target ``|1>`` at ``l = -1``).
    ``target_one_l`` overrides the gate's target convention.
    """
    kind = kind.upper().replace("-", "")
    if kind == "I":
        default_t1 = 1
        setup = GateSetup(
            "I", None,
            p1_chain=(bs("P1"), hwp("P1"), aom(1, "P1")),
            p3_chain=(bs("P3"), hwp("P3")),
            p1_tag=BeamTag("H", 0), p2_tag=BeamTag("H", 2), p3_tag=BeamTag("H", 0),
            shared_seed=True)
    elif kind == "NOT":
        if not_pump_shift not in (-1, 1):
            raise ValueError("not_pump_shift must be -1 or +1")
        default_t1 = 1 if not_pump_shift == -1 else -1
        setup = GateSetup(
            "NOT", None,
            p1_chain=(bs("P1"), hwp("P1"), aom(1, "P1"), cgh(not_pump_shift, "P1")),
            p3_chain=(bs("P3"), hwp("P3")),
            p1_tag=BeamTag("H", 0), p2_tag=BeamTag("H", 2), p3_tag=BeamTag("H", 0),
            shared_seed=True)
    elif kind == "CNOT":
        default_t1 = -1
        setup = GateSetup(
            "CNOT", 0,
            p2_chain=(cgh(1, "P2"),),
            p3_chain=(cgh(-1, "P3"), mirror("P3")))
    elif kind == "ZCNOT":
        # enters as +1, leaves the mirror as -1
        default_t1 = 1
        setup = GateSetup(
            "ZCNOT", 1,
            p2_chain=(mirror("P2"), cgh(0, "P2")))
    else:
        raise ValueError(f"unknown gate kind {kind!r}; expected one of {GATE_KINDS}")
    t1 = default_t1 if target_one_l is None else target_one_l
    return replace(setup, target_convention=LogicalConvention(target_one_l=t1))


@dataclass(frozen=True)
class GateResult:
    signal: OAMSuperposition
    raw: OAMSuperposition
    weight: float
    warnings: tuple[str, ...] = field(default=())


def gate_event(setup: GateSetup, control: OAMSuperposition, target: OAMSuperposition,
               *, chi3: complex = 1.0, efficiency: float = 1.0) -> GateResult:
    """Run the arm optics and the FWM cell; keep the event weight."""
    if len(control) == 0 or len(target) == 0:
        raise ValueError("control and target must be non-empty")
    for l in control.charges:
        decode_l(l)
    notes: list[str] = []
    if len(control) > 1:
        msg = ("superposed control routed through the antilinear FWM map; "
               "control amplitudes enter conjugated")
        notes.append(msg)
        warnings.warn(msg, SuperposedControlWarning, stacklevel=3)

    target_c = apply_chain(setup.p2_chain, target)
    raw = OAMSuperposition((), role="signal")
    for k, a in control.items():
        probe = apply_chain(setup.p3_chain, OAMSuperposition({k: a}, role="control"))
        pump = OAMSuperposition.basis(setup.pump_for_probe(k), role="pump")
        cfg = FWMConfig(chi3=chi3, pump1_state=pump, efficiency=efficiency)
        raw = raw + fwm_amplitudes(cfg, target_c, probe)
    raw = raw.with_role("signal")

    for l in raw.charges:
        try:
            decode_l(l)
        except AlphabetError as exc:
            raise WiringError(str(exc), gate=setup.kind) from None
    norm2 = raw.norm() ** 2
    if norm2 == 0.0:
        raise WiringError("signal vanished", gate=setup.kind)
    return GateResult(raw.normalize(), raw, efficiency * norm2, tuple(notes))


def apply_gate(setup: GateSetup, control: OAMSuperposition, target: OAMSuperposition,
               **kwargs) -> OAMSuperposition:
    return gate_event(setup, control, target, **kwargs).signal


def truth_table(setup: GateSetup) -> list[tuple[int, int, int]]:
    """Rows ``(control_bit, target_in_bit, target_out_bit)`` over basis inputs."""
    conv = setup.target_convention
    rows = []
    for c in (0, 1):
        for t in (0, 1):
            out = apply_gate(setup, encode_logical(c, conv, "control"),
                             encode_logical(t, conv, "target"))
            if len(out) != 1:
                raise WiringError(f"basis input ({c},{t}) gave a superposed signal",
                                  gate=setup.kind)
            rows.append((c, t, decode_l(out.charges[0])))
    return rows


def validate_setup(setup: GateSetup) -> list[str]:
    """Routing and alphabet checks; an empty list means the setup is sound."""
    problems: list[str] = []
    p1 = chain_tag(setup.p1_chain, setup.p1_tag)
    p2 = chain_tag(setup.p2_chain, setup.p2_tag)
    p3 = chain_tag(setup.p3_chain, setup.p3_tag)
    # phase matching puts S on the P2 polarisation
    s_pol = p2.polarization

    if p1.polarization == p2.polarization:
        problems.append("pump polarizations not orthogonal (P1 parallel to P2)")
    if p3.polarization != p1.polarization:
        problems.append("probe polarization differs from P1")
    if s_pol == p3.polarization:
        problems.append("signal polarization not orthogonal to probe")
    if p1.frequency_channel == p3.frequency_channel:
        problems.append("degenerate pump/probe frequency")
    if setup.shared_seed and not any(
            e.kind == "aom" for e in setup.p1_chain + setup.p3_chain):
        problems.append("P1 and P3 share a seed but no AOM separates them")

    conv = setup.target_convention
    for c in (0, 1):
        for t in (0, 1):
            try:
                control = apply_chain(setup.p3_chain, encode_logical(c, conv, "control"))
                target = apply_chain(setup.p2_chain, encode_logical(t, conv, "target"))
            except AlphabetError as exc:
                problems.append(f"arm optics out of range for input ({c},{t}): {exc}")
                continue
            (l3,), (l2,) = control.charges, target.charges
            l1 = setup.pump_for_probe(encode_logical(c, conv, "control").charges[0])
            ls = signal_l(l1, l2, l3)
            if abs(ls) > 1:
                problems.append(
                    f"output charge outside alphabet for input ({c},{t}): l_s={ls}")
    return problems
