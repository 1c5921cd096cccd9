"""Line-oriented circuit text format.

::

    # comments run to end of line
    qubits 3
    prep 1 0.6 0 0.8 0          # qubit 1 <- (0.6+0j)|0> + (0.8+0j)|1>
    h 2
    rx 1 0.25                   # angles in radians
    cx 2 3                      # shorthand for c[2=1] x 3
    c[1=1,2=0] z 3
    term r=2                    # sum of r full-width tuples, one per line
      m0 i i                    # optional leading coefficient: 0.5 x x i
      m1 x i
    measure 1 -> m1
    if m1 z 3

Every error is reported as a :class:`ParseError` carrying a diagnostic
code, a 1-based line and column; :func:`parse` raises nothing else.
"""
from __future__ import annotations

import cmath
import math
import re

from .gates import UnknownGateError, gate_arity
from .ir import (Circuit, ClassicallyControlled, Controlled, GateSpec, Local, Measure, Prep,
                 TermSpec, TermSum)

E_SYNTAX = "E_SYNTAX"
E_HEADER = "E_HEADER"
E_UNKNOWN_GATE = "E_UNKNOWN_GATE"
E_QUBIT_RANGE = "E_QUBIT_RANGE"
E_CONTROL_SPEC = "E_CONTROL_SPEC"
E_CLASSICAL_UNDEFINED = "E_CLASSICAL_UNDEFINED"
E_PARAM = "E_PARAM"
E_TERM_BLOCK = "E_TERM_BLOCK"
E_MEASURED_QUBIT = "E_MEASURED_QUBIT"
E_PREP = "E_PREP"
E_INTERNAL = "E_INTERNAL"

_SHORTHAND = {"cx": ("x", 1), "cy": ("y", 1), "cz": ("z", 1), "ch": ("h", 1), "ccx": ("x", 2)}
_NAME_RE = re.compile(r"[A-Za-z_]\w*$")
_TOKEN_RE = re.compile(r"\S+")
_GATE_TOKEN_RE = re.compile(r"([A-Za-z]\w*)(?:\(([^)]*)\))?$")
_CONTROL_RE = re.compile(r"c\[([^\]]*)\]")
_MEASURE_RE = re.compile(r"(\S+)\s*->\s*(\S+)$")
_PREP_NORM_TOL = 1e-10


class ParseError(Exception):
    def __init__(self, code: str, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.code = code
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}: {self.message} [{self.code}]"


class _Tok:
    __slots__ = ("text", "col")

    def __init__(self, text: str, col: int):
        self.text = text
        self.col = col


def _tokens(line: str, offset: int = 0) -> list[_Tok]:
    return [_Tok(m.group(), m.start() + 1 + offset) for m in _TOKEN_RE.finditer(line)]


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.lineno = 0
        self.n = 0
        self.instructions: list = []
        self.measured: set[int] = set()
        self.cbits: set[str] = set()
        self.prepped: set[int] = set()

    def error(self, code: str, message: str, col: int = 1):
        raise ParseError(code, message, self.lineno, col)

    # token helpers

    def qubit(self, tok: _Tok) -> int:
        try:
            q = int(tok.text)
        except ValueError:
            self.error(E_SYNTAX, f"expected a qubit index, got '{tok.text}'", tok.col)
        if not 1 <= q <= self.n:
            self.error(E_QUBIT_RANGE, f"qubit {q} out of range", tok.col)
        return q

    def number(self, tok: _Tok) -> float:
        try:
            x = float(tok.text)
        except ValueError:
            self.error(E_PARAM, f"expected a number, got '{tok.text}'", tok.col)
        if not math.isfinite(x):
            self.error(E_PARAM, f"non-finite number '{tok.text}'", tok.col)
        return x

    def gate_name(self, tok: _Tok, nparams: int, *, allow_projectors: bool = False) -> str:
        name = tok.text.lower()
        try:
            arity = gate_arity(name)
        except UnknownGateError:
            self.error(E_UNKNOWN_GATE, f"unknown gate '{tok.text}'", tok.col)
        if name in ("m0", "m1") and not allow_projectors:
            self.error(E_UNKNOWN_GATE, f"projector '{tok.text}' is only allowed inside term blocks", tok.col)
        if arity != nparams:
            self.error(E_PARAM, f"gate '{name}' takes {arity} parameter(s), got {nparams}", tok.col)
        return name

    def unmeasured(self, q: int, col: int) -> None:
        if q in self.measured:
            self.error(E_MEASURED_QUBIT, f"qubit {q} was already measured", col)

    def gate_on_qubit(self, toks: list[_Tok]) -> tuple[GateSpec, int, int]:
        """`<gate> <q> [params]` -> (spec, qubit, column of the qubit)."""
        if len(toks) < 2:
            self.error(E_SYNTAX, "expected '<gate> <qubit> [params]'", toks[0].col if toks else 1)
        params = tuple(self.number(t) for t in toks[2:])
        name = self.gate_name(toks[0], len(params))
        q = self.qubit(toks[1])
        return GateSpec(name, params), q, toks[1].col

    # statements

    def run(self) -> Circuit:
        i = 0
        while i < len(self.lines):
            self.lineno = i + 1
            raw = _strip_comment(self.lines[i])
            toks = _tokens(raw)
            i += 1
            if not toks:
                continue
            head = toks[0].text.lower()
            if self.n == 0:
                self.header(toks)
                continue
            if head == "qubits":
                self.error(E_HEADER, "duplicate 'qubits' declaration", toks[0].col)
            if head == "term":
                i = self.term_block(toks, i)
                continue
            self.statement(raw, toks)
        if self.n == 0:
            self.lineno = max(len(self.lines), 1)
            self.error(E_HEADER, "missing 'qubits N' declaration")
        return Circuit(self.n, tuple(self.instructions))

    def header(self, toks: list[_Tok]) -> None:
        if toks[0].text.lower() != "qubits":
            self.error(E_HEADER, "the first statement must be 'qubits N'", toks[0].col)
        if len(toks) != 2:
            self.error(E_HEADER, "expected 'qubits N'", toks[0].col)
        try:
            n = int(toks[1].text)
        except ValueError:
            self.error(E_HEADER, f"qubit count must be an integer, got '{toks[1].text}'", toks[1].col)
        if n < 1:
            self.error(E_HEADER, f"qubit count must be >= 1, got {n}", toks[1].col)
        self.n = n

    def statement(self, raw: str, toks: list[_Tok]) -> None:
        head = toks[0].text.lower()
        if head == "prep":
            self.prep(toks)
        elif head == "measure":
            self.measure(raw, toks)
        elif head == "if":
            self.classical_if(toks)
        elif head.startswith("c["):
            self.controlled(raw)
        elif head in _SHORTHAND:
            self.shorthand(toks)
        else:
            spec, q, col = self.gate_on_qubit(toks)
            self.unmeasured(q, col)
            self.instructions.append(Local(q, spec))

    def prep(self, toks: list[_Tok]) -> None:
        if any(not isinstance(ins, Prep) for ins in self.instructions):
            self.error(E_PREP, "prep lines must come before any other instruction", toks[0].col)
        if len(toks) != 6:
            self.error(E_SYNTAX, "expected 'prep <q> <a_re> <a_im> <b_re> <b_im>'", toks[0].col)
        q = self.qubit(toks[1])
        if q in self.prepped:
            self.error(E_PREP, f"qubit {q} prepared twice", toks[1].col)
        ar, ai, br, bi = (self.number(t) for t in toks[2:])
        alpha, beta = complex(ar, ai), complex(br, bi)
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > _PREP_NORM_TOL:
            self.error(E_PREP, "prep amplitudes must satisfy |a|^2 + |b|^2 = 1", toks[2].col)
        self.prepped.add(q)
        self.instructions.append(Prep(q, alpha, beta))

    def measure(self, raw: str, toks: list[_Tok]) -> None:
        rest_col = toks[1].col if len(toks) > 1 else toks[0].col
        rest = raw[rest_col - 1:].strip() if len(toks) > 1 else ""
        m = _MEASURE_RE.match(rest)
        if not m:
            self.error(E_SYNTAX, "expected 'measure <q> -> <name>'", toks[0].col)
        q = self.qubit(_Tok(m.group(1), rest_col))
        name = m.group(2)
        if not _NAME_RE.match(name):
            self.error(E_SYNTAX, f"invalid classical bit name '{name}'", rest_col + m.start(2))
        self.unmeasured(q, rest_col)
        self.measured.add(q)
        self.cbits.add(name)
        self.instructions.append(Measure(q, name))

    def classical_if(self, toks: list[_Tok]) -> None:
        if len(toks) < 4:
            self.error(E_SYNTAX, "expected 'if <name> <gate> <qubit> [params]'", toks[0].col)
        name = toks[1].text
        if not _NAME_RE.match(name):
            self.error(E_SYNTAX, f"invalid classical bit name '{name}'", toks[1].col)
        if name not in self.cbits:
            self.error(E_CLASSICAL_UNDEFINED, f"classical bit '{name}' is read before it is written", toks[1].col)
        spec, q, col = self.gate_on_qubit(toks[2:])
        self.unmeasured(q, col)
        self.instructions.append(ClassicallyControlled(name, Local(q, spec)))

    def _finish_controlled(self, controls: list[tuple[int, int, int]], spec: GateSpec,
                           target: int, tcol: int) -> None:
        seen: set[int] = set()
        for q, _, col in controls:
            if q in seen:
                self.error(E_CONTROL_SPEC, f"qubit {q} appears twice among the controls", col)
            if q == target:
                self.error(E_CONTROL_SPEC, f"qubit {q} is both control and target", col)
            seen.add(q)
            self.unmeasured(q, col)
        self.unmeasured(target, tcol)
        self.instructions.append(Controlled(tuple((q, b) for q, b, _ in controls), target, spec))

    def controlled(self, raw: str) -> None:
        lead = len(raw) - len(raw.lstrip())
        m = _CONTROL_RE.match(raw, lead)
        if not m:
            self.error(E_CONTROL_SPEC, "unterminated control list, expected 'c[q=b,...]'", lead + 1)
        body_col = m.start(1) + 1
        controls = []
        if not m.group(1).strip():
            self.error(E_CONTROL_SPEC, "empty control list", body_col)
        pos = 0
        for part in m.group(1).split(","):
            col = body_col + pos
            pos += len(part) + 1
            item = part.strip()
            if item.count("=") != 1:
                self.error(E_CONTROL_SPEC, f"malformed control '{item}', expected q=0 or q=1", col)
            qs, bs = (x.strip() for x in item.split("="))
            q = self.qubit(_Tok(qs, col))
            if bs not in ("0", "1"):
                self.error(E_CONTROL_SPEC, f"control bit must be 0 or 1, got '{bs}'", col)
            controls.append((q, int(bs), col))
        rest = _tokens(raw[m.end():], m.end())
        if not rest:
            self.error(E_SYNTAX, "expected '<gate> <target>' after the control list", m.end() + 1)
        spec, target, tcol = self.gate_on_qubit(rest)
        self._finish_controlled(controls, spec, target, tcol)

    def shorthand(self, toks: list[_Tok]) -> None:
        gate, nctrl = _SHORTHAND[toks[0].text.lower()]
        if len(toks) != nctrl + 2:
            self.error(E_SYNTAX, f"'{toks[0].text}' takes {nctrl} control(s) and one target", toks[0].col)
        controls = [(self.qubit(t), 1, t.col) for t in toks[1:-1]]
        target = self.qubit(toks[-1])
        self._finish_controlled(controls, GateSpec(gate), target, toks[-1].col)

    def term_block(self, toks: list[_Tok], i: int) -> int:
        if len(toks) != 2 or not toks[1].text.lower().startswith("r="):
            self.error(E_TERM_BLOCK, "expected 'term r=<count>'", toks[0].col)
        try:
            r = int(toks[1].text[2:])
        except ValueError:
            self.error(E_TERM_BLOCK, f"term count must be an integer, got '{toks[1].text[2:]}'", toks[1].col)
        if r < 1:
            self.error(E_TERM_BLOCK, f"term count must be >= 1, got {r}", toks[1].col)
        start = self.lineno
        terms = []
        while len(terms) < r:
            if i >= len(self.lines):
                self.lineno = start
                self.error(E_TERM_BLOCK, f"term block declares {r} terms but only {len(terms)} follow", toks[0].col)
            self.lineno = i + 1
            line_toks = _tokens(_strip_comment(self.lines[i]))
            i += 1
            if line_toks:
                terms.append(self.term_line(line_toks))
        self.instructions.append(TermSum(tuple(terms)))
        return i

    def term_line(self, toks: list[_Tok]) -> TermSpec:
        coeff: complex = 1.0
        if len(toks) == self.n + 1:
            try:
                coeff = complex(toks[0].text)
            except ValueError:
                self.error(E_TERM_BLOCK, f"expected a coefficient, got '{toks[0].text}'", toks[0].col)
            if not cmath.isfinite(coeff):
                self.error(E_PARAM, f"non-finite coefficient '{toks[0].text}'", toks[0].col)
            toks = toks[1:]
        if len(toks) != self.n:
            self.error(E_TERM_BLOCK, f"term line needs {self.n} gate factors, got {len(toks)}",
                       toks[0].col if toks else 1)
        gates = []
        for q, tok in enumerate(toks, start=1):
            m = _GATE_TOKEN_RE.match(tok.text)
            if not m:
                self.error(E_SYNTAX, f"malformed gate factor '{tok.text}'", tok.col)
            params = ()
            if m.group(2) is not None:
                params = tuple(self.number(_Tok(p.strip(), tok.col)) for p in m.group(2).split(","))
            name = self.gate_name(_Tok(m.group(1), tok.col), len(params), allow_projectors=True)
            if q in self.measured and name != "i":
                self.error(E_MEASURED_QUBIT, f"qubit {q} was already measured; its factor must be 'i'", tok.col)
            gates.append(GateSpec(name, params))
        return TermSpec(coeff, tuple(gates))


def parse(text: str) -> Circuit:
    """Parse circuit text; raises :class:`ParseError` on any problem."""
    p = _Parser(text if isinstance(text, str) else "")
    try:
        return p.run()
    except ParseError:
        raise
    except Exception as exc:  # keep parsing total
        raise ParseError(E_INTERNAL, f"internal parser error: {exc}", p.lineno, 1) from exc


def parse_file(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
