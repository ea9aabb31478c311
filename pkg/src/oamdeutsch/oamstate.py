"""Single-photon OAM superpositions and the logical qubit encoding.

A state is a finite map from topological charge ``l`` to a complex amplitude.
Logical ``|0>`` is always ``l = 0``.  Logical ``|1>`` is ``l = +1`` for the
control photon and ``l = +1`` or ``l = -1`` for the target/signal photon,
depending on the gate wiring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import AlphabetError

PRUNE_TOL = 1e-15
ROLES = ("control", "target", "signal", "pump")

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _freeze(coefficients) -> tuple[tuple[int, complex], ...]:
    items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
    acc: dict[int, complex] = {}
    for l, c in items:
        if isinstance(l, bool) or int(l) != l:
            raise TypeError(f"topological charge must be an integer, got {l!r}")
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite amplitude at l={l}")
        acc[int(l)] = acc.get(int(l), 0j) + c
    return tuple(sorted((l, c) for l, c in acc.items() if abs(c) >= PRUNE_TOL))


@dataclass(frozen=True)
class OAMSuperposition:
    """Immutable amplitude map ``{l: c_l}`` for one photon.

    Entries with ``|c| < 1e-15`` are dropped on construction.  Global phase is
    kept: two states differing by a sign compare unequal.
    """

    terms: tuple[tuple[int, complex], ...] = ()
    role: str = "target"

    def __init__(self, coefficients=(), role: str = "target"):
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}; expected one of {ROLES}")
        object.__setattr__(self, "terms", _freeze(coefficients))
        object.__setattr__(self, "role", role)

    @classmethod
    def basis(cls, l: int, role: str = "target") -> "OAMSuperposition":
        return cls({l: 1.0}, role=role)

    @property
    def coefficients(self) -> dict[int, complex]:
        return dict(self.terms)

    @property
    def charges(self) -> tuple[int, ...]:
        return tuple(l for l, _ in self.terms)

    def __getitem__(self, l: int) -> complex:
        return dict(self.terms).get(l, 0j)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def items(self):
        return self.terms

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for _, c in self.terms))

    def normalize(self) -> "OAMSuperposition":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize an empty state")
        return OAMSuperposition({l: c / n for l, c in self.terms}, role=self.role)

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def with_role(self, role: str) -> "OAMSuperposition":
        return OAMSuperposition(self.terms, role=role)

    def map_charges(self, fn) -> "OAMSuperposition":
        """Relabel every charge ``l -> fn(l)``; colliding entries add."""
        return OAMSuperposition([(fn(l), c) for l, c in self.terms], role=self.role)

    def __mul__(self, scalar) -> "OAMSuperposition":
        scalar = complex(scalar)
        return OAMSuperposition({l: scalar * c for l, c in self.terms}, role=self.role)

    __rmul__ = __mul__

    def __add__(self, other: "OAMSuperposition") -> "OAMSuperposition":
        if not isinstance(other, OAMSuperposition):
            return NotImplemented
        return OAMSuperposition(list(self.terms) + list(other.terms), role=self.role)

    def __neg__(self) -> "OAMSuperposition":
        return self * -1.0

    def __repr__(self) -> str:
        body = ", ".join(f"{l}: {c:.6g}" for l, c in self.terms)
        return f"OAMSuperposition({{{body}}}, role={self.role!r})"


@dataclass(frozen=True)
class LogicalConvention:
    """Physical charges standing for logical ``|1>``.

    ``target_one_l`` is the charge the target photon carries for ``|1>`` when
    it enters the gate (before any arm optics).
    """

    control_one_l: int = 1
    target_one_l: int = 1

    def __post_init__(self):
        if self.control_one_l != 1:
            raise ValueError("control |1> is always carried by l=+1")
        if self.target_one_l not in (1, -1):
            raise ValueError("target |1> must be carried by l=+1 or l=-1")

    def one_l(self, role: str) -> int:
        return self.control_one_l if role in ("control", "pump") else self.target_one_l


def encode_logical(bit: int, convention: LogicalConvention = LogicalConvention(),
                   role: str = "target") -> OAMSuperposition:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    l = 0 if bit == 0 else convention.one_l(role)
    return OAMSuperposition.basis(l, role=role)


def decode_l(l: int) -> int:
    if l == 0:
        return 0
    if l in (1, -1):
        return 1
    raise AlphabetError(f"out-of-alphabet charge l={l}")


def logical_amplitudes(state: OAMSuperposition) -> tuple[complex, complex]:
    """Fold a state onto (amp of |0>, amp of |1>), merging l=+1 and l=-1."""
    coeffs = state.coefficients
    for l in coeffs:
        decode_l(l)
    if 1 in coeffs and -1 in coeffs:
        raise AlphabetError("ambiguous logical fold: both l=+1 and l=-1 present")
    return coeffs.get(0, 0j), coeffs.get(1, 0j) + coeffs.get(-1, 0j)


def from_logical(amp0: complex, amp1: complex, one_l: int = 1,
                 role: str = "target") -> OAMSuperposition:
    return OAMSuperposition({0: amp0, one_l: amp1}, role=role)


HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) * _SQRT_HALF


def hadamard(state: OAMSuperposition,
             convention: LogicalConvention = LogicalConvention()) -> OAMSuperposition:
    """Logical Hadamard; ``|1>`` is re-encoded at the role's physical charge."""
    a0, a1 = logical_amplitudes(state)
    b0 = (a0 + a1) * _SQRT_HALF
    b1 = (a0 - a1) * _SQRT_HALF
    return from_logical(b0, b1, convention.one_l(state.role), role=state.role)


def inner(a: OAMSuperposition, b: OAMSuperposition) -> complex:
    """``<a|b>`` over the charge basis."""
    cb = b.coefficients
    return sum((c.conjugate() * cb.get(l, 0j) for l, c in a.terms), 0j)


def fidelity(a: OAMSuperposition, b: OAMSuperposition) -> float:
    f = abs(inner(a, b)) ** 2
    return min(1.0, max(0.0, f))


def parse_state_spec(text: str, role: str = "target") -> OAMSuperposition:
    """Parse ``"l:re:im,l:re:im,..."`` into a state (not normalized)."""
    terms: list[tuple[int, complex]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad state term {chunk!r}; expected l:re:im")
        try:
            l = int(parts[0])
            c = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad state term {chunk!r}: {exc}") from None
        terms.append((l, c))
    if not terms:
        raise ValueError("empty state spec")
    return OAMSuperposition(terms, role=role)


def superpose(pairs: Iterable[tuple[complex, OAMSuperposition]],
              role: str = "target") -> OAMSuperposition:
    out = OAMSuperposition((), role=role)
    for a, s in pairs:
        out = out + s * a
    return out.with_role(role)
