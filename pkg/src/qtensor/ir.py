"""Circuit intermediate representation and its normalized text form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .gates import (GateTerm, MultilinearGate, QuasiMultilinearGate, SingleQubitGate,
                    gate_library)
from .state import TensorState, product_state, qubit_state


def _fmt_num(x: float) -> str:
    return repr(float(x))


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return _fmt_num(z.real)
    return f"({_fmt_num(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt_num(abs(z.imag))}j)"


@dataclass(frozen=True)
class GateSpec:
    name: str
    params: tuple[float, ...] = ()

    def matrix(self) -> SingleQubitGate:
        return gate_library(self.name, *self.params)

    def token(self) -> str:
        """Compact form used inside term blocks, e.g. ``rx(0.5)``."""
        if not self.params:
            return self.name
        return f"{self.name}({','.join(_fmt_num(p) for p in self.params)})"

    def with_qubit(self, q: int) -> str:
        """Form used on gate lines, e.g. ``rx 2 0.5``."""
        return " ".join([self.name, str(q)] + [_fmt_num(p) for p in self.params])


@dataclass(frozen=True)
class Prep:
    qubit: int
    alpha: complex
    beta: complex


@dataclass(frozen=True)
class Local:
    qubit: int
    gate: GateSpec


@dataclass(frozen=True)
class Controlled:
    controls: tuple[tuple[int, int], ...]
    target: int
    gate: GateSpec

    def quasi(self) -> QuasiMultilinearGate:
        return QuasiMultilinearGate(self.controls, self.target, self.gate.matrix())


@dataclass(frozen=True)
class TermSpec:
    coeff: complex
    gates: tuple[GateSpec, ...]


@dataclass(frozen=True)
class TermSum:
    terms: tuple[TermSpec, ...]

    def multilinear(self) -> MultilinearGate:
        out = []
        for t in self.terms:
            factors = [g.matrix() for g in t.gates]
            factors[0] = factors[0].scaled(t.coeff)
            out.append(GateTerm(factors))
        return MultilinearGate(out)


@dataclass(frozen=True)
class Measure:
    qubit: int
    cbit: str


@dataclass(frozen=True)
class ClassicallyControlled:
    cbit: str
    inner: Local


Instruction = Union[Prep, Local, Controlled, TermSum, Measure, ClassicallyControlled]
GATE_INSTRUCTIONS = (Local, Controlled, TermSum)


def instruction_qubits(ins: Instruction, n: int) -> tuple[int, ...]:
    if isinstance(ins, (Prep, Local, Measure)):
        return (ins.qubit,)
    if isinstance(ins, Controlled):
        return tuple(q for q, _ in ins.controls) + (ins.target,)
    if isinstance(ins, ClassicallyControlled):
        return (ins.inner.qubit,)
    if isinstance(ins, TermSum):
        return tuple(range(1, n + 1))
    raise TypeError(f"not an instruction: {ins!r}")


def format_instruction(ins: Instruction) -> str:
    """One instruction in normalized text; term blocks span several lines."""
    if isinstance(ins, Prep):
        a, b = complex(ins.alpha), complex(ins.beta)
        return " ".join(["prep", str(ins.qubit)] + [_fmt_num(v) for v in (a.real, a.imag, b.real, b.imag)])
    if isinstance(ins, Local):
        return ins.gate.with_qubit(ins.qubit)
    if isinstance(ins, Controlled):
        if len(ins.controls) == 1 and ins.controls[0][1] == 1 and ins.gate.name in ("x", "z") and not ins.gate.params:
            return f"c{ins.gate.name} {ins.controls[0][0]} {ins.target}"
        spec = ",".join(f"{q}={b}" for q, b in ins.controls)
        return f"c[{spec}] {ins.gate.with_qubit(ins.target)}"
    if isinstance(ins, TermSum):
        lines = [f"term r={len(ins.terms)}"]
        for t in ins.terms:
            toks = [g.token() for g in t.gates]
            if complex(t.coeff) != 1:
                toks.insert(0, _fmt_complex(t.coeff))
            lines.append("  " + " ".join(toks))
        return "\n".join(lines)
    if isinstance(ins, Measure):
        return f"measure {ins.qubit} -> {ins.cbit}"
    if isinstance(ins, ClassicallyControlled):
        return f"if {ins.cbit} {format_instruction(ins.inner)}"
    raise TypeError(f"not an instruction: {ins!r}")


@dataclass(frozen=True)
class Circuit:
    n: int
    instructions: tuple[Instruction, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    @property
    def program(self) -> tuple[Instruction, ...]:
        """Instructions after the initial-state preparation lines."""
        return tuple(i for i in self.instructions if not isinstance(i, Prep))

    def initial_state(self) -> TensorState:
        """Product state from the prep lines; unprepared qubits start in |0>."""
        amps = {q: (1.0, 0.0) for q in range(1, self.n + 1)}
        for ins in self.instructions:
            if isinstance(ins, Prep):
                amps[ins.qubit] = (ins.alpha, ins.beta)
        return product_state(*(qubit_state(*amps[q]) for q in range(1, self.n + 1)))

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"] + [format_instruction(i) for i in self.instructions]
        return "\n".join(lines) + "\n"
