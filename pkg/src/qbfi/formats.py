"""QDIMACS and QRTF proof-trace reading and writing.

QRTF is a line format shared by both calculus families::

    s qrtf <calculus>
    <id> <lit>... 0 <rule> <antecedent>... 0 [<aux>... 0]

A literal token is an optional ``-``, a variable id and then either ``*``
(merged literal, CDCL family) or ``:`` followed by ``uid=0|1|*`` entries
separated by commas (annotation, expansion family).  ``INST`` takes a single
bare annotation token ``:uid=c,...`` as its aux.  The last step is the root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import FormatError
from .model import (EXISTS, FORALL, NEG, POS, STAR, AnnLit, Lit, Qbf, annotation,
                    format_annotation)

QRES, QURES, LDQRES, LQUPLUS, IRCALC, IRMCALC = (
    "qres", "qures", "ldqres", "lquplus", "ircalc", "irmcalc")
CDCL_CALCULI = (QRES, QURES, LDQRES, LQUPLUS)
EXPANSION_CALCULI = (IRCALC, IRMCALC)
CALCULI = CDCL_CALCULI + EXPANSION_CALCULI

AXIOM, URED, URED_STAR, RES, INST, MERGE = "AX", "URED", "URED*", "RES", "INST", "MERGE"
RULES = (AXIOM, URED, URED_STAR, RES, INST, MERGE)
ARITY = {AXIOM: 0, URED: 1, URED_STAR: 1, RES: 2, INST: 1, MERGE: 1}

_LIT_RE = re.compile(r"^(-?)(\d+)(\*|:(.*))?$")
_ENTRY_RE = re.compile(r"^(\d+)=([01*])$")


@dataclass(frozen=True)
class ResAux:
    """Resolution payload.

    ``pivot`` is the pivot literal as it occurs in the first antecedent.  For
    expansion traces its annotation is the shared part; ``xi`` and ``sigma``
    are the extra parts on the first and second antecedent's pivot literal.
    """

    pivot: object
    xi: tuple = ()
    sigma: tuple = ()


@dataclass(frozen=True)
class MergeAux:
    first: AnnLit
    second: AnnLit


@dataclass(frozen=True)
class ProofStep:
    id: int
    conclusion: frozenset
    rule: str
    antecedents: tuple = ()
    aux: object = None


@dataclass(frozen=True)
class ProofTrace:
    calculus: str
    formula: Qbf = field(compare=False, repr=False)
    steps: tuple

    @property
    def root(self):
        return self.steps[-1].id

    @property
    def is_expansion(self):
        return self.calculus in EXPANSION_CALCULI

    def by_id(self):
        return {s.id: s for s in self.steps}

    def __len__(self):
        return len(self.steps)


# QDIMACS


def _read_text(text):
    if isinstance(text, (bytes, bytearray)):
        return text.decode()
    return text


def parse_qdimacs(text):
    """Parse QDIMACS, including an optional ``c partition`` comment."""
    text = _read_text(text)
    prefix, matrix, partition = [], [], None
    header_seen = False
    pending = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            toks = line.split()
            if len(toks) > 1 and toks[1] == "partition":
                partition = _parse_partition(toks[2:], no)
            continue
        if line.startswith("p"):
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise FormatError("SYNTAX", "bad header", no)
            header_seen = True
            continue
        if not header_seen:
            raise FormatError("SYNTAX", "missing p cnf header", no)
        toks = line.split()
        if toks[0] in (EXISTS, FORALL):
            if matrix or pending:
                raise FormatError("SYNTAX", "quantifier block after clauses", no)
            try:
                vs = [int(t) for t in toks[1:]]
            except ValueError:
                raise FormatError("SYNTAX", "non-integer token", no) from None
            if not vs or vs[-1] != 0 or any(v <= 0 for v in vs[:-1]):
                raise FormatError("SYNTAX", "bad quantifier block", no)
            prefix.extend((toks[0], v) for v in vs[:-1])
            continue
        try:
            xs = [int(t) for t in toks]
        except ValueError:
            raise FormatError("SYNTAX", "non-integer token", no) from None
        for x in xs:
            if x == 0:
                matrix.append(_make_clause(pending, no))
                pending = []
            else:
                pending.append(x)
    if pending:
        raise FormatError("SYNTAX", "unterminated clause", None)
    quantified = {v for _, v in prefix}
    for c in matrix:
        for l in c:
            if l.var not in quantified:
                raise FormatError("UNBOUND_VARIABLE", f"variable {l.var}")
    return Qbf(tuple(prefix), tuple(matrix), partition)


def _make_clause(xs, no):
    if len({abs(x) for x in xs}) != len(set(xs)):
        raise FormatError("TAUTOLOGICAL_CLAUSE", " ".join(map(str, xs)), no)
    return frozenset(Lit(abs(x), POS if x > 0 else NEG) for x in xs)


def _parse_partition(toks, no):
    labels = {"p:": "p", "q:": "q", "r:": "r", "b:": "b"}
    part, current = {}, None
    for t in toks:
        if t in labels:
            current = labels[t]
            continue
        if current is None:
            raise FormatError("SYNTAX", f"partition token {t!r} before a label", no)
        try:
            v = int(t)
        except ValueError:
            raise FormatError("SYNTAX", f"bad partition token {t!r}", no) from None
        if v in part:
            raise FormatError("SYNTAX", f"variable {v} labelled twice", no)
        part[v] = current
    return part


def write_qdimacs(f):
    nvars = max((v for _, v in f.prefix), default=0)
    out = [f"p cnf {nvars} {len(f.matrix)}"]
    if f.partition is not None:
        groups = []
        for lab in ("p", "q", "r", "b"):
            vs = [str(v) for v in f.variables if f.partition.get(v) == lab]
            if vs:
                groups.append(f"{lab}: " + " ".join(vs))
        out.insert(0, "c partition " + " ".join(groups))
    block, qt = [], None
    for q, v in f.prefix:
        if q != qt and block:
            out.append(f"{qt} " + " ".join(block) + " 0")
            block = []
        qt = q
        block.append(str(v))
    if block:
        out.append(f"{qt} " + " ".join(block) + " 0")
    for c in f.matrix:
        xs = [l.var if l.pol == POS else -l.var for l in sorted(c)]
        out.append(" ".join(map(str, xs + [0])))
    return "\n".join(out) + "\n"


# QRTF


def parse_literal(tok, expansion, formula, no):
    m = _LIT_RE.match(tok)
    if not m:
        raise FormatError("SYNTAX", f"bad literal {tok!r}", no)
    sign, digits, suffix, entries = m.groups()
    var = int(digits)
    if var == 0:
        raise FormatError("SYNTAX", "variable 0", no)
    if var not in formula.index:
        raise FormatError("UNBOUND_VARIABLE", f"variable {var}", no)
    pol = NEG if sign else POS
    if suffix == "*":
        if expansion:
            raise FormatError("STAR_IN_EXPANSION_LITERAL", tok, no)
        return Lit(var, STAR)
    if suffix is not None:
        if not expansion:
            raise FormatError("ANNOTATION_IN_CDCL_TRACE", tok, no)
        return AnnLit(var, pol, parse_annotation(entries, formula, no))
    return AnnLit(var, pol, ()) if expansion else Lit(var, pol)


def parse_annotation(entries, formula, no):
    pairs = []
    for e in entries.split(","):
        m = _ENTRY_RE.match(e)
        if not m:
            raise FormatError("SYNTAX", f"bad annotation entry {e!r}", no)
        u = int(m.group(1))
        if u not in formula.index:
            raise FormatError("UNBOUND_VARIABLE", f"variable {u}", no)
        c = m.group(2)
        pairs.append((u, STAR if c == "*" else int(c)))
    try:
        return annotation(pairs)
    except ValueError as e:
        raise FormatError("SYNTAX", str(e), no) from None


def _take_until_zero(toks, i, no, what):
    out = []
    while i < len(toks) and toks[i] != "0":
        out.append(toks[i])
        i += 1
    if i >= len(toks):
        raise FormatError("SYNTAX", f"unterminated {what}", no)
    return out, i + 1


def parse_trace(text, formula):
    """Structural parse of a QRTF trace.  Rule soundness is checked elsewhere."""
    text = _read_text(text)
    calculus, steps, ids = None, [], set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "s":
            if calculus is not None or len(toks) != 3 or toks[1] != "qrtf":
                raise FormatError("SYNTAX", "bad trace header", no)
            if toks[2] not in CALCULI:
                raise FormatError("SYNTAX", f"unknown calculus {toks[2]!r}", no)
            calculus = toks[2]
            continue
        if calculus is None:
            raise FormatError("SYNTAX", "step before header", no)
        steps.append(_parse_step(toks, calculus, formula, ids, no))
    if calculus is None:
        raise FormatError("SYNTAX", "missing trace header")
    if not steps:
        raise FormatError("NO_ROOT", "trace has no steps")
    return ProofTrace(calculus, formula, tuple(steps))


def _parse_step(toks, calculus, formula, ids, no):
    expansion = calculus in EXPANSION_CALCULI
    try:
        sid = int(toks[0])
    except ValueError:
        raise FormatError("SYNTAX", "bad step id", no) from None
    if sid <= 0 or sid in ids:
        raise FormatError("SYNTAX", f"bad or duplicate step id {sid}", no)
    lit_toks, i = _take_until_zero(toks, 1, no, "clause")
    conclusion = frozenset(parse_literal(t, expansion, formula, no) for t in lit_toks)
    if len(conclusion) != len(lit_toks):
        raise FormatError("SYNTAX", "duplicate literal", no)
    if i >= len(toks) or toks[i] not in RULES:
        raise FormatError("SYNTAX", "missing or unknown rule", no)
    rule = toks[i]
    ant_toks, i = _take_until_zero(toks, i + 1, no, "antecedents")
    try:
        ants = tuple(int(t) for t in ant_toks)
    except ValueError:
        raise FormatError("SYNTAX", "bad antecedent id", no) from None
    if len(ants) != ARITY[rule]:
        raise FormatError("BAD_ARITY", f"step {sid}: {rule} takes {ARITY[rule]} antecedents", no)
    for a in ants:
        if a >= sid or a not in ids:
            raise FormatError("FORWARD_REFERENCE", f"step {sid} cites {a}", no)
    aux_toks = []
    if i < len(toks):
        aux_toks, i = _take_until_zero(toks, i, no, "aux")
        if i != len(toks):
            raise FormatError("SYNTAX", "trailing tokens", no)
    aux = _parse_aux(rule, aux_toks, calculus, formula, no, sid)
    ids.add(sid)
    return ProofStep(sid, conclusion, rule, ants, aux)


def _parse_aux(rule, toks, calculus, formula, no, sid):
    expansion = calculus in EXPANSION_CALCULI
    if rule == AXIOM:
        if toks:
            raise FormatError("SYNTAX", "axiom takes no aux", no)
        return None
    if rule in (URED, URED_STAR):
        if expansion:
            raise FormatError("SYNTAX", f"{rule} in expansion trace", no)
        if len(toks) != 1:
            raise FormatError("BAD_ARITY", f"step {sid}: reduction needs one literal", no)
        l = parse_literal(toks[0], False, formula, no)
        if (l.pol == STAR) != (rule == URED_STAR):
            raise FormatError("SYNTAX", f"{rule} literal {toks[0]!r}", no)
        return l
    if rule == RES:
        lits = [parse_literal(t, expansion, formula, no) for t in toks]
        if not expansion:
            if len(lits) != 1:
                raise FormatError("BAD_ARITY", f"step {sid}: RES needs one pivot", no)
            return ResAux(lits[0])
        if len(lits) not in (1, 3):
            raise FormatError("BAD_ARITY", f"step {sid}: RES needs 1 or 3 pivot tokens", no)
        if len(lits) == 1:
            return ResAux(lits[0])
        if lits[1].lit != lits[0].lit or lits[2].lit != lits[0].lit.neg():
            raise FormatError("SYNTAX", f"step {sid}: inconsistent pivot tokens", no)
        return ResAux(lits[0], lits[1].ann, lits[2].ann)
    if not expansion:
        raise FormatError("SYNTAX", f"{rule} in CDCL trace", no)
    if rule == INST:
        if not toks:
            return ()
        if len(toks) != 1 or not toks[0].startswith(":"):
            raise FormatError("SYNTAX", "INST aux is a single :annotation token", no)
        return parse_annotation(toks[0][1:], formula, no)
    if len(toks) != 2:
        raise FormatError("BAD_ARITY", f"step {sid}: MERGE needs two literals", no)
    first, second = (parse_literal(t, True, formula, no) for t in toks)
    return MergeAux(first, second)


def format_aux(step, expansion):
    aux = step.aux
    if step.rule == AXIOM or aux is None:
        return []
    if step.rule in (URED, URED_STAR):
        return [str(aux)]
    if step.rule == RES:
        if not expansion or (not aux.xi and not aux.sigma):
            return [str(aux.pivot)]
        pv = aux.pivot
        return [str(pv), str(AnnLit(pv.var, pv.pol, aux.xi)),
                str(AnnLit(pv.var, 1 - pv.pol, aux.sigma))]
    if step.rule == INST:
        return [":" + format_annotation(aux)] if aux else []
    return [str(aux.first), str(aux.second)]


def format_step(step, expansion):
    toks = [str(step.id)] + [str(l) for l in sorted(step.conclusion)] + ["0", step.rule]
    toks += [str(a) for a in step.antecedents] + ["0"]
    aux = format_aux(step, expansion)
    if aux:
        toks += aux + ["0"]
    return " ".join(toks)


def write_trace(trace):
    lines = [f"s qrtf {trace.calculus}"]
    lines += [format_step(s, trace.is_expansion) for s in trace.steps]
    return "\n".join(lines) + "\n"
