"""Gate-level circuits over the shared variables, with a line-based netlist.

Netlist lines::

    INPUT <vid>
    GATE <gid> <KIND> <args...> [# <provenance step id>]
    OUTPUT <gid>

``SEL v a b`` computes ``a`` when input ``v`` is 0 and ``b`` when it is 1;
``MONO3 v a b`` computes ``(v or a) and b``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError, QbfiError

CONST0, CONST1, INPUT, ID, OR2, AND2, SEL, MONO3 = (
    "CONST0", "CONST1", "INPUT", "ID", "OR2", "AND2", "SEL", "MONO3")

# kind -> (number of input-variable args, number of gate args)
SHAPES = {CONST0: (0, 0), CONST1: (0, 0), INPUT: (1, 0), ID: (0, 1), OR2: (0, 2),
          AND2: (0, 2), SEL: (1, 2), MONO3: (1, 2)}
MONOTONE_KINDS = frozenset({CONST0, CONST1, INPUT, ID, OR2, AND2, MONO3})


@dataclass(frozen=True)
class Gate:
    id: int
    kind: str
    args: tuple = ()
    provenance: int | None = None

    @property
    def var(self):
        return self.args[0] if SHAPES[self.kind][0] else None

    @property
    def operands(self):
        return self.args[SHAPES[self.kind][0]:]


@dataclass(frozen=True)
class Circuit:
    inputs: tuple
    gates: tuple
    output: int

    def __post_init__(self):
        seen = set()
        inputs = set(self.inputs)
        for g in self.gates:
            if g.kind not in SHAPES:
                raise QbfiError("BAD_GATE", f"unknown kind {g.kind}")
            nv, ng = SHAPES[g.kind]
            if len(g.args) != nv + ng:
                raise QbfiError("BAD_GATE", f"gate {g.id} {g.kind} arity")
            if nv and g.args[0] not in inputs:
                raise QbfiError("BAD_GATE", f"gate {g.id} selects non-input {g.args[0]}")
            if any(a not in seen for a in g.operands):
                raise QbfiError("BAD_GATE", f"gate {g.id} uses a later or unknown gate")
            if g.id in seen:
                raise QbfiError("BAD_GATE", f"duplicate gate id {g.id}")
            seen.add(g.id)
        if self.output not in seen:
            raise QbfiError("BAD_GATE", f"output {self.output} is not a gate")

    def __len__(self):
        return len(self.gates)

    def kinds(self):
        return {g.kind for g in self.gates}

    def is_monotone(self):
        return self.kinds() <= MONOTONE_KINDS


def eval_gates(c, a):
    """Values of all gates under the total input assignment ``a``."""
    missing = [v for v in c.inputs if v not in a]
    if missing:
        raise QbfiError("PARTIAL_ASSIGNMENT", f"no value for inputs {missing}")
    val = {}
    for g in c.gates:
        k = g.kind
        if k == CONST0:
            x = 0
        elif k == CONST1:
            x = 1
        elif k == INPUT:
            x = a[g.args[0]]
        elif k == ID:
            x = val[g.args[0]]
        elif k == OR2:
            x = val[g.args[0]] | val[g.args[1]]
        elif k == AND2:
            x = val[g.args[0]] & val[g.args[1]]
        elif k == SEL:
            x = val[g.args[2]] if a[g.args[0]] else val[g.args[1]]
        else:
            x = (a[g.args[0]] | val[g.args[1]]) & val[g.args[2]]
        val[g.id] = x
    return val


def eval_circuit(c, a):
    return eval_gates(c, a)[c.output]


def write_circuit(c):
    lines = [f"INPUT {v}" for v in c.inputs]
    for g in c.gates:
        line = f"GATE {g.id} {g.kind}" + "".join(f" {x}" for x in g.args)
        if g.provenance is not None:
            line += f" # {g.provenance}"
        lines.append(line)
    lines.append(f"OUTPUT {c.output}")
    return "\n".join(lines) + "\n"


def read_circuit(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode()
    inputs, gates, output = [], [], None
    for no, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        toks = body.split()
        if not toks:
            continue
        try:
            if toks[0] == "INPUT" and len(toks) == 2:
                inputs.append(int(toks[1]))
            elif toks[0] == "GATE" and len(toks) >= 3 and toks[2] in SHAPES:
                prov = int(comment) if comment.strip() else None
                gates.append(Gate(int(toks[1]), toks[2], tuple(int(t) for t in toks[3:]), prov))
            elif toks[0] == "OUTPUT" and len(toks) == 2 and output is None:
                output = int(toks[1])
            else:
                raise FormatError("SYNTAX", f"bad netlist line {raw.strip()!r}", no)
        except ValueError:
            raise FormatError("SYNTAX", f"bad number in {raw.strip()!r}", no) from None
    if output is None:
        raise FormatError("SYNTAX", "missing OUTPUT line")
    try:
        return Circuit(tuple(inputs), tuple(gates), output)
    except QbfiError as e:
        raise FormatError("SYNTAX", e.message) from None


def to_dot(c):
    lines = ["digraph circuit {", "  rankdir=BT;"]
    for v in c.inputs:
        lines.append(f'  in{v} [shape=box,label="p{v}"];')
    for g in c.gates:
        label = g.kind if g.var is None else f"{g.kind}(p{g.var})"
        if g.provenance is not None:
            label += f"\\nstep {g.provenance}"
        shape = "doublecircle" if g.id == c.output else "ellipse"
        lines.append(f'  g{g.id} [shape={shape},label="{label}"];')
        if g.var is not None:
            lines.append(f"  in{g.var} -> g{g.id} [style=dashed];")
        for a in g.operands:
            lines.append(f"  g{a} -> g{g.id};")
    lines.append("}")
    return "\n".join(lines) + "\n"
