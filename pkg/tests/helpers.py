"""Shared builders for the test suite."""

from hypothesis import strategies as st

from qbfi.formats import AXIOM, INST, IRCALC, RES, ProofStep, ProofTrace, ResAux
from qbfi.model import (EXISTS, FORALL, P, Q, R, AnnLit, Qbf, annotation, axiom_clause, clause,
                        instantiate)


def qbf(prefix, clauses, partition=None):
    """``prefix`` like ``"e1 e2 a3 e4"``; clauses as signed integer tuples."""
    pre = tuple((tok[0], int(tok[1:])) for tok in prefix.split())
    part = None
    if partition:
        part = {}
        for lab, vs in partition.items():
            part.update({v: lab for v in vs})
    return Qbf(pre, tuple(clause(*c) for c in clauses), part)


@st.composite
def partitioned_qbfs(draw, positive_p=False, max_side=3):
    """Small partitioned formulas: an existential p block, then q and r interleaved."""
    kp = draw(st.integers(1, 3))
    nq = draw(st.integers(1, max_side))
    nr = draw(st.integers(1, max_side))
    ps = list(range(1, kp + 1))
    qs = list(range(kp + 1, kp + nq + 1))
    rs = list(range(kp + nq + 1, kp + nq + nr + 1))
    rest = draw(st.permutations(qs + rs))
    quant = {v: draw(st.sampled_from([EXISTS, EXISTS, FORALL])) for v in rest}
    prefix = tuple((EXISTS, v) for v in ps) + tuple((quant[v], v) for v in rest)

    def side(own, pos_only):
        n = draw(st.integers(1, 5))
        out = []
        for _ in range(n):
            # every clause names one of its own side's variables, so its side is unambiguous
            vs = [draw(st.sampled_from(own))]
            vs += draw(st.lists(st.sampled_from(ps + own), max_size=2, unique=True))
            vs = list(dict.fromkeys(vs))
            lits = []
            for v in vs:
                if pos_only and v in ps:
                    lits.append(v)
                else:
                    lits.append(v if draw(st.booleans()) else -v)
            out.append(clause(*lits))
        return out

    matrix = side(qs, positive_p) + side(rs, False)
    part = {v: P for v in ps}
    part.update({v: Q for v in qs})
    part.update({v: R for v in rs})
    return Qbf(prefix, tuple(matrix), part)


def to_ircalc(trace):
    """Translate a Q-Res refutation into IR-calc.

    Each clause C becomes its existential literals annotated with the
    falsifying assignment of C's universal literals (filtered by index).
    Reductions vanish; a resolution first instantiates each side with the
    other's universal assignment so the pivot annotations coincide.
    """
    f = trace.formula
    tau, conc, ids, steps = {}, {}, {}, []

    def push(c, rule, ants, aux):
        sid = len(steps) + 1
        steps.append(ProofStep(sid, c, rule, tuple(ants), aux))
        return sid

    for s in trace.steps:
        t = annotation((l.var, 1 - l.pol) for l in s.conclusion if f.is_universal(l.var))
        tau[s.id] = t
        if s.rule == AXIOM:
            c = axiom_clause(s.conclusion, f)
            ids[s.id], conc[s.id] = push(c, AXIOM, (), None), c
            continue
        if s.rule != RES:
            ids[s.id], conc[s.id] = ids[s.antecedents[0]], conc[s.antecedents[0]]
            continue
        v, w = s.antecedents
        ends = []
        for me, other in ((v, w), (w, v)):
            c = instantiate(tau[other], conc[me], f.index)
            sid = ids[me]
            if c != conc[me]:
                sid = push(c, INST, (sid,), tau[other])
            ends.append((sid, c))
        (e1, c1), (e2, c2) = ends
        x = s.aux.pivot
        p1 = next(l for l in c1 if l.var == x.var and l.pol == x.pol)
        p2 = AnnLit(x.var, 1 - x.pol, p1.ann)
        c = (c1 - {p1}) | (c2 - {p2})
        ids[s.id], conc[s.id] = push(c, RES, (e1, e2), ResAux(p1)), c
    return ProofTrace(IRCALC, f, tuple(steps))
