"""Command-line interface: ``qtensor <command> ...``.

Exit codes: 0 success, 2 bad input (parse error, missing or malformed
file, invalid arguments), 3 runtime failure.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from . import costs
from .circuit import run_compare, run_traced, teleportation_report, trace_to_jsonl
from .measurement import SplitMix64, histogram_json, sample_counts
from .opcount import crossover_table, rows_to_csv
from .oracle import OracleSizeError
from .parser import ParseError, parse
from .rank import (HYPERDET_TOL, RANK_TOL, all_bipartitions, cayley_hyperdeterminant, operator_schmidt,
                   realignment_rank, schmidt_coefficients, three_qubit_class)
from .state import TensorState

VIZ_MAX_QUBITS = 6
VIZ_AMP_TOL = 1e-9


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _read_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load_circuit(path: str):
    try:
        return parse(_read_text(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_state(path: str) -> TensorState:
    try:
        s = TensorState.from_json(_read_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not s.is_normalized():
        raise InputError(f"{path}: state is not normalized (norm {s.norm():.12g})")
    return s


def _entry(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    re, im = x
    return complex(float(re), float(im))


def _load_gate(path: str) -> np.ndarray:
    obj = _read_json(path)
    try:
        m = np.array([[_entry(x) for x in row] for row in obj["matrix"]], dtype=np.complex128)
        n = int(obj.get("n", 0)) or m.shape[0].bit_length() - 1
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed gate JSON ({exc})") from exc
    if m.ndim != 2 or m.shape != (2**n, 2**n) or n < 2:
        raise InputError(f"{path}: expected a 2^n x 2^n matrix with n >= 2, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{path}: matrix has non-finite entries")
    return m


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_json(m: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in m]


# commands

def cmd_run(args) -> str:
    c = _load_circuit(args.file)
    steps = run_traced(c, seed=args.seed, rank_tol=args.rank_tol)
    out = trace_to_jsonl(steps)
    final = steps[-1]
    if args.shots > 0 and final.state is not None:
        counts = sample_counts(final.state, args.shots, SplitMix64(args.seed).split())
        hist = histogram_json(counts, args.shots)
        hist["qubits"] = list(final.live)
        out += json.dumps({"histogram": hist}) + "\n"
    return out


def cmd_compare(args) -> str:
    c = _load_circuit(args.file)
    return json.dumps(run_compare(c, seed=args.seed).to_json(), indent=2) + "\n"


def state_report(s: TensorState, rank_tol: float = RANK_TOL, hyperdet_tol: float = HYPERDET_TOL) -> dict:
    parts = []
    for p in all_bipartitions(s.n):
        coeffs = schmidt_coefficients(s, p)
        rank = int(np.sum(coeffs > rank_tol * coeffs[0])) if coeffs[0] > 0 else 0
        parts.append({"left": list(p.left), "right": list(p.right), "rank": rank,
                      "coeffs": [float(x) for x in coeffs[:rank]]})
    report = {"n": s.n, "bipartitions": parts}
    if s.n == 3:
        report["class"] = str(three_qubit_class(s, hyperdet_tol, rank_tol))
        report["hyperdet"] = _pair(cayley_hyperdeterminant(s))
    return report


def cmd_analyze_state(args) -> str:
    s = _load_state(args.file)
    return json.dumps(state_report(s, args.rank_tol, args.hyperdet_tol), indent=2) + "\n"


def gate_report(m: np.ndarray, rank_tol: float = RANK_TOL) -> dict:
    n = m.shape[0].bit_length() - 1
    splits = []
    for p in all_bipartitions(n):
        osd = operator_schmidt(m, p, rank_tol)
        splits.append({
            "left": list(p.left), "right": list(p.right),
            "realignment_rank": realignment_rank(m, p, rank_tol),
            "terms": [{"coeff": float(c), "left_factor": _matrix_json(a), "right_factor": _matrix_json(b)}
                      for c, (a, b) in zip(osd.coefficients, osd.factor_pairs)],
            "reconstruction_error": float(np.max(np.abs(osd.reconstruct() - m))),
        })
    return {"n": n, "realignment_rank": splits[0]["realignment_rank"], "bipartitions": splits}


def cmd_analyze_gate(args) -> str:
    return json.dumps(gate_report(_load_gate(args.file), args.rank_tol), indent=2) + "\n"


def state_dot(s: TensorState, amp_tol: float = VIZ_AMP_TOL) -> str:
    """Hypercube drawing of a state.

    Vertices are basis strings q1..qn; nonzero ones are filled.  Hypercube
    edges between two nonzero vertices are bold.  Groups of nonzero vertices
    that no bold path joins are linked by dashed "diagonal" edges, chosen
    greedily by smallest Hamming distance.
    """
    n = s.n
    if n > VIZ_MAX_QUBITS:
        raise InputError(f"viz supports at most {VIZ_MAX_QUBITS} qubits, got {n}")
    amps = s.to_kron_vector()
    labels = [format(i, f"0{n}b") for i in range(2**n)]
    nonzero = [abs(a) > amp_tol for a in amps]
    lines = ["graph state {", "  node [shape=circle, fontname=monospace];"]
    for i, lab in enumerate(labels):
        if nonzero[i]:
            a = amps[i]
            lines.append(f'  "{lab}" [style=filled, fillcolor=black, fontcolor=white, penwidth=2, '
                         f'tooltip="{a.real:.6g}{a.imag:+.6g}j"];')
        else:
            lines.append(f'  "{lab}" [color=gray, fontcolor=gray];')

    parent = list(range(2**n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(2**n):
        for k in range(n):
            j = i ^ (1 << k)
            if j < i:
                continue
            if nonzero[i] and nonzero[j]:
                lines.append(f'  "{labels[i]}" -- "{labels[j]}" [style=bold, penwidth=3];')
                parent[find(i)] = find(j)
            else:
                lines.append(f'  "{labels[i]}" -- "{labels[j]}" [color=lightgray];')

    live = [i for i in range(2**n) if nonzero[i]]
    pairs = sorted(itertools.combinations(live, 2), key=lambda p: (bin(p[0] ^ p[1]).count("1"), p))
    for i, j in pairs:
        if find(i) != find(j):
            parent[find(i)] = find(j)
            lines.append(f'  "{labels[i]}" -- "{labels[j]}" [style=dashed, constraint=false];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_viz(args) -> str:
    return state_dot(_load_state(args.file))


def cmd_teleport(args) -> str:
    alpha = complex(args.alpha_re, args.alpha_im)
    beta = complex(args.beta_re, args.beta_im)
    try:
        report = teleportation_report(alpha, beta, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return json.dumps(report, indent=2) + "\n"


def cmd_opcount_table(args) -> str:
    rows = costs.measured_rows(args.n_max, seed=args.seed)
    if args.format == "csv":
        return rows_to_csv(rows)
    body = {"rows": rows, "all_match": costs.all_match(rows), "crossover": crossover_table(args.n_max)}
    return json.dumps(body, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtensor", description="Tensor-notation quantum circuit toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file_arg=True):
        p = sub.add_parser(name, help=help_text)
        if file_arg:
            p.add_argument("file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("run", cmd_run, "execute a circuit, print the JSON-lines trace and a histogram")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--rank-tol", type=float, default=RANK_TOL)
    add("compare", cmd_compare, "run tensor engine and Kronecker oracle side by side")
    p = add("analyze-state", cmd_analyze_state, "Schmidt ranks and three-qubit class of a state")
    p.add_argument("--rank-tol", type=float, default=RANK_TOL)
    p.add_argument("--hyperdet-tol", type=float, default=HYPERDET_TOL)
    p = add("analyze-gate", cmd_analyze_gate, "realignment rank and operator-Schmidt terms of a gate")
    p.add_argument("--rank-tol", type=float, default=RANK_TOL)
    add("viz", cmd_viz, "DOT hypercube drawing of a state")
    p = add("teleport", cmd_teleport, "teleportation demo: trace, rank trace and the four branches", False)
    p.add_argument("--alpha-re", type=float, default=0.6)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--beta-re", type=float, default=0.8)
    p.add_argument("--beta-im", type=float, default=0.0)
    p = add("opcount-table", cmd_opcount_table, "counted vs predicted operations per gate species", False)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except InputError as exc:
        print(f"qtensor {args.command}: {exc}", file=sys.stderr)
        return 2
    except OracleSizeError as exc:
        print(f"qtensor {args.command}: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:
        print(f"qtensor {args.command}: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
