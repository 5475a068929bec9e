"""Time-stepped measurement circuits with conditional Pauli updates.

A :class:`ScheduledCircuit` is an ordered list of steps; instructions within
one step touch disjoint qubits.  Each measurement records one outcome bit.
An instruction may carry one conditional Pauli update ``(ref, pauli)`` which
is applied iff the recorded outcome of instruction ``ref`` is 1.  Within a
step all measurements execute first, then all updates of that step apply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .pauli import PauliOperator

SINGLE_MEASUREMENT = "single_measurement"
JOINT_MEASUREMENT = "joint_measurement"
IDLE = "idle"


@dataclass(frozen=True)
class Instruction:
    kind: str
    qubits: tuple[int, ...]
    axes: str = ""
    label: int = -1
    update: tuple[int, PauliOperator] | None = None

    def __post_init__(self):
        if self.kind == SINGLE_MEASUREMENT and not (len(self.qubits) == 1 and len(self.axes) == 1):
            raise ValueError("single measurement needs one qubit and one axis")
        if self.kind == JOINT_MEASUREMENT:
            if len(self.qubits) != 2 or len(self.axes) != 2:
                raise ValueError("joint measurement needs two qubits and two axes")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError("joint measurement qubits must be distinct")
        if self.kind == IDLE and (len(self.qubits) != 1 or self.axes):
            raise ValueError("idle touches exactly one qubit")

    @property
    def is_measurement(self) -> bool:
        return self.kind != IDLE

    def basis(self) -> PauliOperator:
        return PauliOperator({q: a for q, a in zip(self.qubits, self.axes)})

    def to_json(self) -> dict:
        rec = {"kind": self.kind, "qubits": list(self.qubits), "axes": self.axes,
               "label": self.label}
        if self.update is not None:
            ref, p = self.update
            rec["update"] = {"ref": ref, "pauli": {str(q): a for q, a in sorted(p.support.items())},
                             "sign": p.sign}
        return rec


@dataclass(frozen=True)
class FaultLocation:
    """A fault slot: either a measurement instruction or an idle (qubit, step)."""

    step: int
    qubits: tuple[int, ...]
    instr_label: int | None = None  # None marks an idle location

    @property
    def kind(self) -> str:
        if self.instr_label is None:
            return IDLE
        return SINGLE_MEASUREMENT if len(self.qubits) == 1 else JOINT_MEASUREMENT

    @property
    def group_dim(self) -> int:
        """n such that the fault set at this location is Z_2^n."""
        n = 2 * len(self.qubits)
        return n if self.instr_label is None else n + 1


@dataclass(frozen=True)
class Fault:
    """Group element: Pauli component on the touched qubits plus a flip flag."""

    pauli: PauliOperator = field(default_factory=PauliOperator.identity)
    flip: bool = False

    def is_trivial(self) -> bool:
        return self.pauli.is_identity() and not self.flip


@dataclass
class MeasurementRecord:
    outcomes: list[int] = field(default_factory=list)
    labels: list[int] = field(default_factory=list)

    def append(self, label: int, bit: int):
        self.labels.append(label)
        self.outcomes.append(bit)

    def by_label(self) -> dict[int, int]:
        return dict(zip(self.labels, self.outcomes))

    def __len__(self):
        return len(self.outcomes)


@dataclass
class GadgetTarget:
    """What a gadget claims to implement.

    ``kind == "pauli_measurement"``: projective measurement of ``pauli`` on
    the data qubits, reported as the parity of the readout set.
    ``kind == "unitary"``: named Clifford (cnot/cxx/swap) with ``qubits``
    giving its arguments in order.
    """

    kind: str
    pauli: PauliOperator | None = None
    name: str = ""
    qubits: tuple[int, ...] = ()


@dataclass
class ScheduledCircuit:
    steps: list[list[Instruction]]
    readout: frozenset[int] = frozenset()
    target: GadgetTarget | None = None
    data_qubits: tuple[int, ...] = ()
    ancilla_inputs: dict[int, str] = field(default_factory=dict)  # ancilla -> required input axis state ("Z"=|0>, "X"=|+>)

    def __post_init__(self):
        self.validate()

    # -- structure ------------------------------------------------------

    def validate(self):
        seen_labels = set()
        for step in self.steps:
            touched = set()
            for ins in step:
                if set(ins.qubits) & touched:
                    raise ValueError("qubit touched twice in one step")
                touched |= set(ins.qubits)
                if ins.is_measurement:
                    if ins.label in seen_labels:
                        raise ValueError(f"duplicate label {ins.label}")
                    seen_labels.add(ins.label)
                if ins.update is not None and ins.update[0] not in seen_labels:
                    raise ValueError("update references a not-yet-recorded outcome")
        missing = self.readout - seen_labels
        if missing:
            raise ValueError(f"readout refs {missing} never measured")

    @property
    def qubits(self) -> list[int]:
        qs: set[int] = set(self.data_qubits) | set(self.ancilla_inputs)
        for step in self.steps:
            for ins in step:
                qs |= set(ins.qubits)
        return sorted(qs)

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def instructions(self):
        for step in self.steps:
            yield from step

    def measurement_counts(self) -> tuple[int, int]:
        """(number of single-qubit measurements, number of joint measurements)."""
        single = sum(1 for i in self.instructions() if i.kind == SINGLE_MEASUREMENT)
        joint = sum(1 for i in self.instructions() if i.kind == JOINT_MEASUREMENT)
        return single, joint

    def instruction_by_label(self) -> dict[int, tuple[int, Instruction]]:
        out = {}
        for t, step in enumerate(self.steps):
            for ins in step:
                if ins.is_measurement:
                    out[ins.label] = (t, ins)
        return out

    # -- export ----------------------------------------------------------

    def to_json(self) -> dict:
        rec = {
            "qubits": self.qubits,
            "data_qubits": list(self.data_qubits),
            "ancilla_inputs": {str(q): a for q, a in sorted(self.ancilla_inputs.items())},
            "steps": [[ins.to_json() for ins in step] for step in self.steps],
            "readout": sorted(self.readout),
        }
        if self.target is not None:
            t = {"kind": self.target.kind}
            if self.target.pauli is not None:
                t["pauli"] = {str(q): a for q, a in sorted(self.target.pauli.support.items())}
            if self.target.name:
                t["name"] = self.target.name
                t["qubits"] = list(self.target.qubits)
            rec["target"] = t
        return rec

    def to_json_str(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)


class CircuitBuilder:
    """Assembles a ScheduledCircuit, handing out sequential labels."""

    def __init__(self, start_label: int = 0):
        self.steps: list[list[Instruction]] = []
        self._next = start_label

    def new_step(self) -> int:
        self.steps.append([])
        return len(self.steps) - 1

    def _add(self, ins: Instruction, step: int | None) -> Instruction:
        if step is None:
            step = self.new_step()
        while step >= len(self.steps):
            self.new_step()
        self.steps[step].append(ins)
        return ins

    def measure(self, qubits, axes: str, step: int | None = None,
                update: PauliOperator | None = None,
                update_ref: int | None = None) -> int:
        """Append a measurement; returns its label.

        ``update`` (if given) is conditioned on ``update_ref``, defaulting to
        the new measurement's own outcome.
        """
        qubits = tuple(qubits)
        label = self._next
        self._next += 1
        upd = None
        if update is not None:
            upd = (label if update_ref is None else update_ref, update)
        kind = SINGLE_MEASUREMENT if len(qubits) == 1 else JOINT_MEASUREMENT
        self._add(Instruction(kind, qubits, axes, label, upd), step)
        return label

    def idle(self, qubit: int, step: int) -> None:
        self._add(Instruction(IDLE, (qubit,), "", -1, None), step)

    def build(self, readout=(), target: GadgetTarget | None = None,
              data_qubits=(), ancilla_inputs: dict[int, str] | None = None) -> ScheduledCircuit:
        return ScheduledCircuit(self.steps, frozenset(readout), target,
                                tuple(data_qubits), dict(ancilla_inputs or {}))


def enumerate_fault_locations(circuit: ScheduledCircuit) -> list[FaultLocation]:
    """All fault slots: one per measurement plus one idle per untouched
    (footprint qubit, step) pair."""
    footprint = set(circuit.qubits)
    locations = []
    for t, step in enumerate(circuit.steps):
        touched = set()
        for ins in step:
            touched |= set(ins.qubits)
            if ins.is_measurement:
                locations.append(FaultLocation(t, ins.qubits, ins.label))
        for q in sorted(footprint - touched):
            locations.append(FaultLocation(t, (q,), None))
    return locations


def location_fault_group(loc: FaultLocation) -> list[Fault]:
    """All nontrivial faults at a location: 3 per idle, 7 per single
    measurement, 31 per joint measurement."""
    paulis = [PauliOperator.identity()]
    for q in loc.qubits:
        paulis = [p.multiply(PauliOperator.single(q, a)) if a else p
                  for p in paulis for a in ("", "X", "Y", "Z")]
    flips = (False,) if loc.instr_label is None else (False, True)
    out = [Fault(p, f) for p in paulis for f in flips]
    return [f for f in out if not f.is_trivial()]


def location_fault_generators(loc: FaultLocation) -> list[Fault]:
    """Generators of the Z_2^n fault group: X and Z per touched qubit, plus
    the flip bit for measurements."""
    gens = []
    for q in loc.qubits:
        gens.append(Fault(PauliOperator.single(q, "X"), False))
        gens.append(Fault(PauliOperator.single(q, "Z"), False))
    if loc.instr_label is not None:
        gens.append(Fault(PauliOperator.identity(), True))
    return gens
