"""OpenQASM 2.0 export and a parser for the subset we emit.

Export rewrites multi-controlled gates with :mod:`qperceptron.decompose` and
SWAP as three CNOTs, so the output only uses ``h``, ``x``, ``cx``, ``u1`` and
``cu1`` from ``qelib1.inc``. All qubits live in one ``qreg q[N]``; named
registers are listed in comments.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from fractions import Fraction

from . import gates as g
from .circuit import Circuit, RegisterLayout
from .decompose import decompose_gate
from .exceptions import StructuralError

_MAX_DYADIC_EXP = 24


def format_angle(angle: float) -> str:
    """Render an angle, as a multiple of pi when it is a short dyadic fraction."""
    ratio = Fraction(angle / math.pi).limit_denominator(1 << _MAX_DYADIC_EXP)
    den = ratio.denominator
    if den & (den - 1) == 0 and math.isclose(float(ratio) * math.pi, angle, rel_tol=0, abs_tol=1e-15):
        num = ratio.numerator
        if num == 0:
            return "0"
        sign = "-" if num < 0 else ""
        num = abs(num)
        head = "pi" if num == 1 else f"{num}*pi"
        return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"
    return repr(float(angle))


def _elementary(gate: g.Gate) -> list[g.Gate]:
    out = []
    for part in decompose_gate(gate):
        if part.kind == g.SWAP:
            a, b = part.targets
            out += [g.cnot(a, b), g.cnot(b, a), g.cnot(a, b)]
        else:
            out.append(part)
    return out


def _statement(gate: g.Gate) -> str:
    q = lambda i: f"q[{i}]"  # noqa: E731
    kind = gate.kind
    if kind == g.H:
        return f"h {q(gate.targets[0])};"
    if kind == g.X:
        return f"x {q(gate.targets[0])};"
    if kind == g.CNOT:
        return f"cx {q(gate.controls[0])},{q(gate.targets[0])};"
    if kind == g.CPHASE:
        return f"cu1({format_angle(gate.angle)}) {q(gate.controls[0])},{q(gate.targets[0])};"
    if kind == g.MCPHASE and not gate.controls:
        return f"u1({format_angle(gate.angle)}) {q(gate.targets[0])};"
    raise StructuralError(f"no elementary statement for {gate}")  # pragma: no cover


def export_qasm(c: Circuit, measure: str | None = None) -> str:
    """OpenQASM 2.0 text for ``c``; optionally measure one named register."""
    n = c.num_qubits
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    for name, qs in c.layout.items():
        lines.append(f"// register {name} = q{list(qs)}")
    lines.append(f"qreg q[{n}];")
    if measure is not None:
        lines.append(f"creg c[{len(c.layout[measure])}];")
    for gate in c.gates:
        for part in _elementary(gate):
            lines.append(_statement(part))
    if measure is not None:
        for i, qb in enumerate(c.layout[measure]):
            lines.append(f"measure q[{qb}] -> c[{i}];")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}


def _eval_param(expr: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*(ev(a) for a in node.args))
        raise StructuralError(f"unsupported parameter expression: {expr!r}")

    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise StructuralError(f"bad parameter expression {expr!r}") from exc
    return ev(tree)


_STMT = re.compile(
    r"^(?P<name>[a-z][A-Za-z0-9_]*)\s*(?:\((?P<params>[^)]*)\))?\s*(?P<args>.*)$", re.S
)
_ARG = re.compile(r"^(?P<reg>[a-z][A-Za-z0-9_]*)\s*(?:\[\s*(?P<idx>\d+)\s*\])?$")

# gate name -> (n params, n qubit args, builder)
_GATES = {
    "h": (0, 1, lambda p, q: [g.h(q[0])]),
    "x": (0, 1, lambda p, q: [g.x(q[0])]),
    "z": (0, 1, lambda p, q: [g.phase(math.pi, q[0])]),
    "u1": (1, 1, lambda p, q: [g.phase(p[0], q[0])]),
    "p": (1, 1, lambda p, q: [g.phase(p[0], q[0])]),
    "cx": (0, 2, lambda p, q: [g.cnot(q[0], q[1])]),
    "CX": (0, 2, lambda p, q: [g.cnot(q[0], q[1])]),
    "cz": (0, 2, lambda p, q: [g.cphase(math.pi, q[0], q[1])]),
    "cu1": (1, 2, lambda p, q: [g.cphase(p[0], q[0], q[1])]),
    "cp": (1, 2, lambda p, q: [g.cphase(p[0], q[0], q[1])]),
    "swap": (0, 2, lambda p, q: [g.swap(q[0], q[1])]),
    "ccx": (0, 3, lambda p, q: [g.mcx((q[0], q[1]), q[2])]),
}


def _strip_comments(text: str) -> str:
    return re.sub(r"//[^\n]*", "", text)


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 text (the subset above) back into a :class:`Circuit`.

    Measurements, barriers and classical registers are accepted and ignored.
    Raises :class:`StructuralError` on anything outside the grammar.
    """
    body = _strip_comments(text)
    statements = [s.strip() for s in body.split(";")]
    if statements and statements[-1] == "":
        statements.pop()
    else:
        raise StructuralError("program must end with ';'")
    if not statements or not re.fullmatch(r"OPENQASM\s+2\.0", statements[0]):
        raise StructuralError("missing 'OPENQASM 2.0;' header")

    qregs: dict[str, tuple[int, int]] = {}
    cregs: dict[str, int] = {}
    total = 0
    ops: list[g.Gate] = []

    def resolve(arg: str) -> list[int]:
        m = _ARG.match(arg.strip())
        if not m or m["reg"] not in qregs:
            raise StructuralError(f"unknown quantum argument {arg!r}")
        start, size = qregs[m["reg"]]
        if m["idx"] is None:
            return list(range(start, start + size))
        idx = int(m["idx"])
        if idx >= size:
            raise StructuralError(f"index {idx} out of range for {m['reg']}[{size}]")
        return [start + idx]

    for lineno, stmt in enumerate(statements[1:], start=2):
        if not stmt:
            raise StructuralError(f"empty statement #{lineno}")
        if re.fullmatch(r'include\s+"[^"]+"', stmt):
            continue
        m = re.fullmatch(r"(qreg|creg)\s+([a-z][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]", stmt)
        if m:
            kind, name, size = m[1], m[2], int(m[3])
            if name in qregs or name in cregs:
                raise StructuralError(f"register {name!r} declared twice")
            if kind == "qreg":
                qregs[name] = (total, size)
                total += size
            else:
                cregs[name] = size
            continue
        if stmt.startswith("measure") or stmt.startswith("barrier") or stmt.startswith("reset"):
            continue
        m = _STMT.match(stmt)
        if not m or m["name"] not in _GATES:
            raise StructuralError(f"statement #{lineno} not understood: {stmt!r}")
        n_params, n_args, build = _GATES[m["name"]]
        params = [] if m["params"] is None else [s for s in m["params"].split(",") if s.strip()]
        if len(params) != n_params:
            raise StructuralError(f"{m['name']} expects {n_params} parameter(s): {stmt!r}")
        values = [_eval_param(p) for p in params]
        args = [a for a in m["args"].split(",")]
        if len(args) != n_args:
            raise StructuralError(f"{m['name']} expects {n_args} argument(s): {stmt!r}")
        resolved = [resolve(a) for a in args]
        width = max(len(r) for r in resolved)
        if any(len(r) not in (1, width) for r in resolved):
            raise StructuralError(f"register size mismatch in {stmt!r}")
        for k in range(width):
            qubits = [r[k] if len(r) > 1 else r[0] for r in resolved]
            ops.extend(build(values, qubits))

    if total == 0:
        raise StructuralError("no qreg declared")
    layout = RegisterLayout({name: range(s, s + n) for name, (s, n) in qregs.items()}, total)
    return Circuit(layout, tuple(ops))


def with_layout(parsed: Circuit, layout: RegisterLayout) -> Circuit:
    """Reattach a named layout to a parsed single-register circuit."""
    if parsed.num_qubits != layout.total_qubits:
        raise StructuralError("qubit count mismatch")
    return Circuit(layout, parsed.gates)
