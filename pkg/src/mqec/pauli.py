"""Sparse multi-qubit Pauli operators with exact phase tracking.

A Pauli is stored as a map ``qubit -> axis`` (axis in "XYZ") together with a
global phase ``i**phase_exp``.  Products of Paulis can pick up factors of
``i``; the phase exponent is tracked mod 4 so that identities like
``(X*Z)**2 == -I`` hold exactly.  Operators that appear as stabilizer
generators always carry a real sign (phase exponent 0 or 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

AXES = "XYZ"

# (a, b) -> (product axis or None, power of i picked up)
_MUL = {
    ("X", "Y"): ("Z", 1),
    ("Y", "X"): ("Z", 3),
    ("Y", "Z"): ("X", 1),
    ("Z", "Y"): ("X", 3),
    ("Z", "X"): ("Y", 1),
    ("X", "Z"): ("Y", 3),
    ("X", "X"): (None, 0),
    ("Y", "Y"): (None, 0),
    ("Z", "Z"): (None, 0),
}


@dataclass(frozen=True)
class PauliOperator:
    """A sparse Pauli operator ``i**phase_exp * prod_q sigma_axis(q)``."""

    support: dict[int, str] = field(default_factory=dict)
    phase_exp: int = 0

    def __post_init__(self):
        for q, a in self.support.items():
            if a not in AXES:
                raise ValueError(f"bad axis {a!r} on qubit {q}")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity() -> "PauliOperator":
        return PauliOperator({})

    @staticmethod
    def single(qubit: int, axis: str) -> "PauliOperator":
        return PauliOperator({qubit: axis})

    @staticmethod
    def from_axes(qubits, axes, sign: int = 1) -> "PauliOperator":
        support = {q: a for q, a in zip(qubits, axes)}
        if len(support) != len(tuple(qubits)):
            raise ValueError("repeated qubit in Pauli support")
        return PauliOperator(support, 0 if sign == 1 else 2)

    @staticmethod
    def from_string(spec: str) -> "PauliOperator":
        """Parse e.g. ``"X1 Z2"`` or ``"-X0 Y3"``."""
        spec = spec.strip()
        phase = 0
        if spec.startswith("-"):
            phase = 2
            spec = spec[1:]
        support = {}
        for term in spec.split():
            support[int(term[1:])] = term[0].upper()
        return PauliOperator(support, phase)

    # -- basic queries ------------------------------------------------

    @property
    def sign(self) -> int:
        """The +/-1 sign; raises if the phase is imaginary."""
        if self.phase_exp % 2:
            raise ValueError("Pauli carries an imaginary phase")
        return 1 if self.phase_exp == 0 else -1

    @property
    def weight(self) -> int:
        return len(self.support)

    def is_identity(self) -> bool:
        return not self.support

    def axis(self, qubit: int) -> str | None:
        return self.support.get(qubit)

    def qubits(self) -> set[int]:
        return set(self.support)

    # -- algebra ------------------------------------------------------

    def multiply(self, other: "PauliOperator") -> "PauliOperator":
        support = dict(self.support)
        phase = self.phase_exp + other.phase_exp
        for q, b in other.support.items():
            a = support.get(q)
            if a is None:
                support[q] = b
            else:
                res, k = _MUL[(a, b)]
                phase += k
                if res is None:
                    del support[q]
                else:
                    support[q] = res
        return PauliOperator(support, phase % 4)

    __mul__ = multiply

    def commutes(self, other: "PauliOperator") -> bool:
        """True iff the two operators commute (even anticommuting overlap)."""
        clashes = 0
        small, big = (self, other) if len(self.support) <= len(other.support) else (other, self)
        for q, a in small.support.items():
            b = big.support.get(q)
            if b is not None and b != a:
                clashes += 1
        return clashes % 2 == 0

    def negate(self) -> "PauliOperator":
        return PauliOperator(dict(self.support), self.phase_exp + 2)

    def restricted(self, qubits) -> "PauliOperator":
        qs = set(qubits)
        return PauliOperator({q: a for q, a in self.support.items() if q in qs}, self.phase_exp)

    # -- misc ---------------------------------------------------------

    def key(self):
        """Hashable canonical form (phase, sorted support)."""
        return (self.phase_exp, tuple(sorted(self.support.items())))

    def __eq__(self, other):
        return isinstance(other, PauliOperator) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_exp]
        if not self.support:
            return f"{pre}I"
        body = " ".join(f"{a}{q}" for q, a in sorted(self.support.items()))
        return f"{pre}{body}"


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    return a.multiply(b)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return a.commutes(b)
