"""CHP-style stabilizer simulator over a binary symplectic tableau.

The tableau holds n destabilizer rows followed by n stabilizer rows, each a
(x, z) bit pair per qubit with a sign bit.  General Pauli measurements,
Pauli frame updates, the elementary Cliffords (H, S, CNOT) and execution of
:class:`ScheduledCircuit` objects (with optional fault injection and forced
outcomes) are supported.
"""

from __future__ import annotations

import numpy as np

from .circuits import Fault, FaultLocation, MeasurementRecord, ScheduledCircuit
from .pauli import PauliOperator

_AXIS_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_AXIS = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class StabilizerState:
    """A pure stabilizer state on qubits 0..n-1, initially |0...0>."""

    def __init__(self, num_qubits: int):
        n = num_qubits
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[:n, :] = np.eye(n, dtype=np.uint8)   # destabilizers X_i
        self.z[n:, :] = np.eye(n, dtype=np.uint8)   # stabilizers Z_i

    # -- construction ---------------------------------------------------

    def copy(self) -> "StabilizerState":
        s = StabilizerState.__new__(StabilizerState)
        s.n = self.n
        s.x = self.x.copy()
        s.z = self.z.copy()
        s.r = self.r.copy()
        return s

    @staticmethod
    def from_stabilizers(num_qubits: int, generators) -> "StabilizerState":
        """State stabilized by the given commuting independent generators
        (completed with Z on leftover qubits via forced-outcome projection)."""
        s = StabilizerState(num_qubits)
        for g in generators:
            forced = 0 if g.sign == 1 else 1
            bit, _ = s.measure(PauliOperator(dict(g.support)), forced=forced)
            if bit != forced:
                raise ValueError(f"generator {g} inconsistent with earlier ones")
        return s

    # -- row helpers ------------------------------------------------------

    def _row_pauli(self, i: int) -> PauliOperator:
        support = {}
        for q in range(self.n):
            bits = (int(self.x[i, q]), int(self.z[i, q]))
            if bits != (0, 0):
                support[q] = _BITS_AXIS[bits]
        return PauliOperator(support, 2 * int(self.r[i]))

    def generators(self) -> list[PauliOperator]:
        return [self._row_pauli(i) for i in range(self.n, 2 * self.n)]

    def _rowsum_into(self, xh, zh, rh_times2, xi, zi, ri):
        """Multiply Pauli row h by row i, tracking the power of i exactly.

        rh_times2 counts quarter turns (0..3); rows of the tableau keep it
        even.  Returns updated (xh, zh, rh_times2).
        """
        # per-qubit i-exponent of sigma(x1,z1) * sigma(x2,z2)
        g = self._g(xh, zh, xi, zi)
        phase = (rh_times2 + 2 * ri + int(g.sum())) % 4
        return xh ^ xi, zh ^ zi, phase

    @staticmethod
    def _g(x1, z1, x2, z2):
        x1 = x1.astype(np.int32)
        z1 = z1.astype(np.int32)
        x2 = x2.astype(np.int32)
        z2 = z2.astype(np.int32)
        gy = x1 * z1 * (z2 - x2)
        gx = x1 * (1 - z1) * z2 * (2 * x2 - 1)
        gz = (1 - x1) * z1 * x2 * (1 - 2 * z2)
        return gy + gx + gz

    def _rowsum(self, h: int, i: int):
        xh, zh, ph = self._rowsum_into(self.x[h], self.z[h], 2 * int(self.r[h]),
                                       self.x[i], self.z[i], int(self.r[i]))
        if ph % 2:
            # destabilizer signs are meaningless and may go imaginary
            if h >= self.n:
                raise AssertionError("stabilizer row acquired imaginary phase")
            ph -= 1
        self.x[h], self.z[h], self.r[h] = xh, zh, ph // 2

    def _pauli_bits(self, p: PauliOperator):
        px = np.zeros(self.n, dtype=np.uint8)
        pz = np.zeros(self.n, dtype=np.uint8)
        for q, a in p.support.items():
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} outside state of {self.n} qubits")
            bx, bz = _AXIS_BITS[a]
            px[q], pz[q] = bx, bz
        return px, pz

    # -- Clifford gates ---------------------------------------------------

    def hadamard(self, q: int):
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def s_gate(self, q: int):
        self.r ^= self.x[:, q] & self.z[:, q]
        self.z[:, q] ^= self.x[:, q]

    def cnot(self, control: int, target: int):
        c, t = control, target
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def swap(self, a: int, b: int):
        self.cnot(a, b)
        self.cnot(b, a)
        self.cnot(a, b)

    # -- Pauli frame -------------------------------------------------------

    def apply_pauli(self, p: PauliOperator):
        """Conjugate the state by a Pauli: generator signs flip where they
        anticommute, supports are untouched."""
        px, pz = self._pauli_bits(p)
        anti = ((self.x & pz[None, :]) ^ (self.z & px[None, :])).sum(axis=1) % 2
        self.r ^= anti.astype(np.uint8)

    # -- measurement -------------------------------------------------------

    def measure(self, basis: PauliOperator, forced: int | None = None,
                rng: np.random.Generator | None = None) -> tuple[int, "StabilizerState"]:
        """Measure a Pauli observable in place; returns (outcome bit, self).

        Deterministic outcomes ignore ``forced``; random ones use ``forced``
        when given, else one bit from ``rng``.
        """
        if basis.is_identity():
            raise ValueError("cannot measure the identity")
        if basis.phase_exp % 2:
            raise ValueError("measurement basis must have a real sign")
        px, pz = self._pauli_bits(basis)
        neg = basis.phase_exp == 2

        anti = ((self.x & pz[None, :]) ^ (self.z & px[None, :])).sum(axis=1) % 2
        anti_stab = np.flatnonzero(anti[self.n:])
        if anti_stab.size:
            p = int(anti_stab[0]) + self.n
            for h in np.flatnonzero(anti):
                if h != p:
                    self._rowsum(int(h), p)
            # destabilizer partner takes the old stabilizer row
            self.x[p - self.n] = self.x[p]
            self.z[p - self.n] = self.z[p]
            self.r[p - self.n] = self.r[p]
            if forced is not None:
                bit = int(forced)
            elif rng is not None:
                bit = int(rng.integers(0, 2))
            else:
                raise ValueError("random measurement outcome needs rng or forced")
            self.x[p] = px
            self.z[p] = pz
            self.r[p] = bit ^ (1 if neg else 0)
            return bit, self

        # deterministic: accumulate the product of stabilizer partners of all
        # anticommuting destabilizers; it equals +/- basis.
        ax = np.zeros(self.n, dtype=np.uint8)
        az = np.zeros(self.n, dtype=np.uint8)
        ph = 0
        for i in np.flatnonzero(anti[: self.n]):
            ax, az, ph = self._rowsum_into(ax, az, ph, self.x[self.n + i],
                                           self.z[self.n + i], int(self.r[self.n + i]))
        if not (np.array_equal(ax, px) and np.array_equal(az, pz)) or ph % 2:
            raise AssertionError("deterministic measurement reconstruction failed")
        bit = (ph // 2) ^ (1 if neg else 0)
        return bit, self

    # -- comparison --------------------------------------------------------

    def canonical_stabilizers(self) -> list[PauliOperator]:
        """Row-reduced generators (unique canonical form incl. signs)."""
        rows = [(self.x[i].copy(), self.z[i].copy(), int(self.r[i]))
                for i in range(self.n, 2 * self.n)]
        used: set[int] = set()
        cols = [("x", q) for q in range(self.n)] + [("z", q) for q in range(self.n)]
        for kind, q in cols:
            arr = 0 if kind == "x" else 1
            piv = next((i for i, row in enumerate(rows)
                        if i not in used and row[arr][q]), None)
            if piv is None:
                continue
            used.add(piv)
            pivot = rows[piv]
            for idx, row in enumerate(rows):
                if idx != piv and row[arr][q]:
                    xh, zh, ph = self._rowsum_into(row[0], row[1], 2 * row[2],
                                                   pivot[0], pivot[1], pivot[2])
                    rows[idx] = (xh, zh, ph // 2)
        out = []
        for xb, zb, rb in rows:
            support = {}
            for q in range(self.n):
                bits = (int(xb[q]), int(zb[q]))
                if bits != (0, 0):
                    support[q] = _BITS_AXIS[bits]
            out.append(PauliOperator(support, 2 * rb))
        return sorted(out, key=lambda p: p.key())

    def contains(self, p: PauliOperator) -> bool:
        """True iff p (with its sign) is in the signed stabilizer group."""
        if p.is_identity():
            return p.sign == 1
        try:
            probe = self.copy()
            bit, _ = probe.measure(PauliOperator(dict(p.support)))
        except ValueError:
            return False  # outcome was random -> not in group up to sign
        return bit == (0 if p.sign == 1 else 1)

    def single_qubit_state(self, q: int) -> PauliOperator | None:
        """If qubit q is disentangled, its single-qubit stabilizer, else None."""
        for axis in "XYZ":
            cand = PauliOperator.single(q, axis)
            probe = self.copy()
            try:
                bit, _ = probe.measure(cand)
            except ValueError:
                continue
            return cand if bit == 0 else cand.negate()
        return None


def states_equivalent(a: StabilizerState, b: StabilizerState) -> bool:
    """True iff the signed stabilizer groups agree (canonical-form compare)."""
    if a.n != b.n:
        raise ValueError("states have different qubit counts")
    return a.canonical_stabilizers() == b.canonical_stabilizers()


def random_stabilizer_state(num_qubits: int, rng: np.random.Generator,
                            depth_factor: int = 3) -> StabilizerState:
    """Random stabilizer state via a random H/S/CNOT circuit on |0..0>."""
    s = StabilizerState(num_qubits)
    n = num_qubits
    for _ in range(depth_factor * n * n + n):
        kind = rng.integers(0, 3)
        if kind == 0:
            s.hadamard(int(rng.integers(0, n)))
        elif kind == 1:
            s.s_gate(int(rng.integers(0, n)))
        elif n > 1:
            c, t = rng.choice(n, size=2, replace=False)
            s.cnot(int(c), int(t))
    # random Pauli for sign scrambling
    for q in range(n):
        if rng.integers(0, 2):
            s.apply_pauli(PauliOperator.single(q, "X"))
        if rng.integers(0, 2):
            s.apply_pauli(PauliOperator.single(q, "Z"))
    return s


def run_circuit(circuit: ScheduledCircuit, state: StabilizerState,
                fault_assignment: dict[FaultLocation, Fault] | None = None,
                rng: np.random.Generator | None = None,
                forced_outcomes: dict[int, int] | None = None,
                ) -> tuple[MeasurementRecord, StabilizerState]:
    """Execute a circuit on ``state`` (mutated in place).

    Faults inject their Pauli right after the ideal operation of their
    location and flip the recorded bit when the flip flag is set; updates
    condition on the recorded (possibly flipped) bit.  ``forced_outcomes``
    maps instruction labels to forced measurement bits.
    """
    faults = fault_assignment or {}
    forced = forced_outcomes or {}
    record = MeasurementRecord()
    recorded: dict[int, int] = {}

    fault_by_instr: dict[int, Fault] = {}
    idle_faults: dict[tuple[int, int], Fault] = {}
    for loc, f in faults.items():
        if loc.instr_label is None:
            idle_faults[(loc.step, loc.qubits[0])] = f
        else:
            fault_by_instr[loc.instr_label] = f

    for t, step in enumerate(circuit.steps):
        pending_updates: list[PauliOperator] = []
        touched = set()
        for ins in step:
            touched |= set(ins.qubits)
            if not ins.is_measurement:
                f = idle_faults.get((t, ins.qubits[0]))
                if f is not None and not f.pauli.is_identity():
                    state.apply_pauli(f.pauli)
                continue
            bit, _ = state.measure(ins.basis(), forced=forced.get(ins.label), rng=rng)
            f = fault_by_instr.get(ins.label)
            if f is not None:
                if not f.pauli.is_identity():
                    state.apply_pauli(f.pauli)
                if f.flip:
                    bit ^= 1
            recorded[ins.label] = bit
            record.append(ins.label, bit)
            if ins.update is not None:
                ref, pauli = ins.update
                if ref not in recorded:
                    raise ValueError(f"update references unrecorded outcome {ref}")
                if recorded[ref]:
                    pending_updates.append(pauli)
        # idle-location faults on untouched footprint qubits
        for (ft, fq), f in idle_faults.items():
            if ft == t and fq not in touched and not f.pauli.is_identity():
                state.apply_pauli(f.pauli)
        for pauli in pending_updates:
            state.apply_pauli(pauli)
    return record, state
