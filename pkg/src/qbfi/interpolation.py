"""Interpolation circuits from verified refutations and per-assignment witnesses.

``extract_circuit`` puts one gate on every proof step.  ``restrict_proof``
replays the proof under an assignment ``a`` to the shared variables: it builds
the auxiliary clauses ``C'`` node by node, driven by the gate values, then
instantiates them by ``a``, prunes satisfied nodes and emits a standalone
refutation of the one-sided formula named by the output gate.  Every
inductive invariant is asserted on the way, so a wrong construction surfaces
as ``INTERNAL_INVARIANT`` rather than as a silently bad circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import (R_CLAUSE, Q_CLAUSE, MIXED, _content_label, axiom_sources, check_refutation,
                      instantiate_step, merge_step, reduce_cdcl, resolve_cdcl, resolve_expansion)
from .circuit import AND2, CONST0, CONST1, ID, MONO3, OR2, SEL, Circuit, Gate, eval_gates
from .errors import InvariantError, QbfiError, RuleViolation
from .formats import (AXIOM, INST, MERGE, RES, URED, URED_STAR, MergeAux, ProofStep, ProofTrace,
                      ResAux)
from .model import (B, NEG, P, POS, Q, R, STAR, AnnLit, Lit, Qbf, annotated_compatible,
                    format_clause, instantiate, max_matching, merge_annotations, preceq_annotated,
                    preceq_annotation, preceq_clause, restrict_clause)
from .oracle import DEFAULT_P_CAP, check_interpolant

GENERAL, MONOTONE = "general", "monotone"
Q_SIDE, R_SIDE = "Q_SIDE", "R_SIDE"
PRUNED = None


def p_positive_in_a(f):
    return not any(l.pol == NEG and f.label(l.var) == P for c in f.a_clauses for l in c)


def _leaf_side(step, f, expansion):
    srcs = axiom_sources(step.conclusion, f, expansion)
    if not srcs:
        raise QbfiError("NOT_VERIFIED", f"step {step.id} is not an axiom")
    return f.clause_side(srcs[0])


def extract_circuit(trace, formula=None, mode=GENERAL):
    """One gate per step, same DAG as the proof; gate ids equal step ids."""
    f = formula if formula is not None else trace.formula
    if f.partition is None:
        raise QbfiError("NO_PARTITION", "interpolation needs a partition")
    report = check_refutation(trace, f)
    if not report.valid:
        raise QbfiError("NOT_VERIFIED", report.summary())
    if mode == MONOTONE and not p_positive_in_a(f):
        raise QbfiError("P_NOT_POSITIVE", "a p variable occurs negatively in the A side")
    gates = []
    for s in trace.steps:
        if s.rule == AXIOM:
            kind = CONST0 if _leaf_side(s, f, trace.is_expansion) == "A" else CONST1
            gates.append(Gate(s.id, kind, (), s.id))
        elif s.rule in (URED, URED_STAR, INST, MERGE):
            gates.append(Gate(s.id, ID, (s.antecedents[0],), s.id))
        else:
            x = s.aux.pivot.var
            lab = f.label(x)
            v, w = s.antecedents
            if lab == P:
                kind = MONO3 if mode == MONOTONE else SEL
                if s.aux.pivot.pol != POS:
                    v, w = w, v
                gates.append(Gate(s.id, kind, (x, v, w), s.id))
            elif lab == Q:
                gates.append(Gate(s.id, OR2, (v, w), s.id))
            elif lab == R:
                gates.append(Gate(s.id, AND2, (v, w), s.id))
            elif lab == B:
                # either parent works; the first one keeps this deterministic
                gates.append(Gate(s.id, ID, (v,), s.id))
            else:
                raise QbfiError("MIXED_PIVOT", f"step {s.id}: pivot {x} has no label")
    return Circuit(tuple(f.p_vars), tuple(gates), trace.root)


# restriction


@dataclass
class RestrictedProof:
    side: str
    trace: ProofTrace
    node_map: dict
    formula: Qbf

    def check(self):
        return check_refutation(self.trace, self.formula)


def one_sided_formula(f, side, a):
    """``A(a,q)`` or ``B(a,r)`` with every universal kept so annotations stay meaningful."""
    lab = Q if side == Q_SIDE else R
    keep = [(qt, v) for qt, v in f.prefix
            if f.label(v) != P and (f.label(v) in (lab, B) or f.is_universal(v))]
    src = f.a_clauses if side == Q_SIDE else f.b_clauses
    matrix = []
    for c in src:
        r = restrict_clause(c, a)
        if r is not None:
            matrix.append(r)
    return Qbf(tuple(keep), tuple(matrix))


def deliberate_merge(c, target, step):
    """Merge literals of ``c`` until it injects into ``target``.

    Returns the final clause and the list of merges performed, smallest
    unmatched literal first.
    """
    c = frozenset(c)
    merges = []
    while True:
        m = max_matching(sorted(c), lambda x: annotated_compatible(x, target))
        if len(m) == len(c):
            return c, merges
        l = min(x for x in c if x not in m)
        cands = annotated_compatible(l, target)
        if not cands:
            raise InvariantError(step, f"{l} has no counterpart in {format_clause(target)}")
        t = cands[0]
        partner = next(x for x, y in m.items() if y == t)
        merged = AnnLit(l.var, l.pol, merge_annotations(l.ann, partner.ann))
        merges.append(MergeAux(l, partner))
        c = (c - {l, partner}) | {merged}


def _zero_star(ann):
    return tuple((u, 0 if c == STAR else c) for u, c in ann)


class _Restrictor:
    def __init__(self, trace, f, circuit, a):
        self.trace, self.f, self.a = trace, f, a
        self.expansion = trace.is_expansion
        self.by_id = trace.by_id()
        self.gates = {g.id: g for g in circuit.gates}
        if set(self.gates) != set(self.by_id) or circuit.output != trace.root:
            raise QbfiError("CIRCUIT_MISMATCH", "circuit was not extracted from this trace")
        self.g = eval_gates(circuit, a)
        self.b = f.b_var
        self.cp = {}
        self.recipe = {}

    # helpers

    def strip_b(self, c):
        if self.b is None:
            return c
        return frozenset(l for l in c if l.var != self.b)

    def preceq(self, c, d):
        if self.expansion:
            return preceq_annotated(c, d)
        return preceq_clause(self.strip_b(c), d)

    def minst(self, tau, c, target, sid):
        inst = instantiate(tau, c, self.f.index)
        out, merges = deliberate_merge(inst, target, sid)
        return out, tau, merges

    # the inductive construction of C'

    def build(self):
        for s in self.trace.steps:
            self.cp[s.id], self.recipe[s.id] = self.node(s)
            if not self.preceq(self.cp[s.id], s.conclusion):
                raise InvariantError(s.id, f"C' = {format_clause(self.cp[s.id])} does not weaken "
                                           f"to {format_clause(s.conclusion)}")

    def node(self, s):
        cp = self.cp
        if s.rule == AXIOM:
            return s.conclusion, ("ax",)
        v = s.antecedents[0]
        if s.rule in (URED, URED_STAR):
            x = s.aux.var
            drop = sorted(l for l in cp[v] if l.var == x)
            return cp[v] - set(drop), ("ured", v, drop)
        if s.rule == INST:
            c, tau, merges = self.minst(s.aux, cp[v], s.conclusion, s.id)
            return c, ("inst", v, tau, merges)
        if s.rule == MERGE:
            return self.merge_node(s)
        w = s.antecedents[1]
        gate = self.gates[s.id]
        piv = s.aux.pivot
        lab = self.f.label(piv.var)
        if lab == P:
            return self.p_node(s, gate, piv, v, w)
        if lab == B:
            return cp[v], ("copy", v)
        return self.qr_node(s, lab, piv, v, w)

    def merge_node(self, s):
        v = s.antecedents[0]
        cv = self.cp[v]
        m = max_matching(sorted(cv), lambda x: annotated_compatible(x, self.by_id[v].conclusion))
        pre = {y: x for x, y in m.items()}
        a1, a2 = pre.get(s.aux.first), pre.get(s.aux.second)
        if a1 is None or a2 is None:
            return cv, ("copy", v)
        aux = MergeAux(a1, a2)
        return merge_step(cv, aux), ("merge", v, aux)

    def p_node(self, s, gate, piv, v, w):
        # v holds the positive pivot literal, w the negative one
        if piv.pol != POS:
            v, w, piv = w, v, piv.neg()
        x = self.a[piv.var]
        gv, gw = self.g[v], self.g[w]
        if gate.kind == MONO3:
            take_w = x or (gv == 1 and gw == 0)
        else:
            take_w = x
        if take_w:
            neg = piv.neg()
            if gate.kind == MONO3 and not x and neg in self.cp[w]:
                raise InvariantError(s.id, "negated p pivot survives in a q-clause")
            return self.cp[w] - {neg}, ("copy", w)
        return self.cp[v] - {piv}, ("copy", v)

    def qr_node(self, s, lab, piv, v, w):
        # OR gate on the q side, AND gate on the r side: keep a parent whose
        # value already forces the gate
        forcing = 1 if lab == Q else 0
        if self.expansion:
            return self.qr_expansion(s, forcing, piv, v, w)
        cv, cw = self.cp[v], self.cp[w]
        if self.g[v] == forcing:
            return cv, ("copy", v)
        if self.g[w] == forcing:
            return cw, ("copy", w)
        if piv not in cv:
            return cv, ("copy", v)
        if piv.neg() not in cw:
            return cw, ("copy", w)
        try:
            c = resolve_cdcl(cv, cw, piv, self.f, self.trace.calculus)
        except RuleViolation as e:
            raise InvariantError(s.id, f"resolution in C' fails: {e}") from None
        return c, ("res", v, w, ResAux(piv), [])

    def qr_expansion(self, s, forcing, piv, v, w):
        aux = s.aux
        tau, xi, sigma = piv.ann, aux.xi, aux.sigma
        cv, cw = self.cp[v], self.cp[w]
        target = s.conclusion
        xi0, sigma0 = _zero_star(xi), _zero_star(sigma)
        if self.g[v] == forcing:
            return self._copy_inst(s, sigma0, v)
        if self.g[w] == forcing:
            return self._copy_inst(s, xi0, w)
        full_v = tuple(sorted(tau + xi))
        full_w = tuple(sorted(tau + sigma))
        pv = [l for l in sorted(cv) if l.var == piv.var and l.pol == piv.pol
              and preceq_annotation(l.ann, full_v)]
        if not pv:
            return self._copy_inst(s, sigma0, v)
        pw = [l for l in sorted(cw) if l.var == piv.var and l.pol != piv.pol
              and preceq_annotation(l.ann, full_w)]
        if not pw:
            return self._copy_inst(s, xi0, w)
        dom_xi = {u for u, _ in xi}
        dom_sigma = {u for u, _ in sigma}
        xi1 = tuple(e for e in pv[0].ann if e[0] in dom_xi)
        sigma1 = tuple(e for e in pw[0].ann if e[0] in dom_sigma)
        raux = ResAux(AnnLit(piv.var, piv.pol, tau), xi1, sigma1)
        try:
            c = resolve_expansion(cv, cw, raux, self.f, self.trace.calculus)
        except RuleViolation as e:
            raise InvariantError(s.id, f"resolution in C' fails: {e}") from None
        c, merges = deliberate_merge(c, target, s.id)
        return c, ("res", v, w, raux, merges)

    def _copy_inst(self, s, tau, src):
        c, tau, merges = self.minst(tau, self.cp[src], s.conclusion, s.id)
        return c, ("inst", src, tau, merges)

    # instantiation by a and emission of the one-sided refutation

    def emit(self):
        root = self.trace.root
        side = Q_SIDE if self.g[root] == 0 else R_SIDE
        rf = one_sided_formula(self.f, side, self.a)
        cpp = {}
        for sid, c in self.cp.items():
            cpp[sid] = restrict_clause(c, self.a)
        if cpp[root] is PRUNED:
            raise InvariantError(root, "root clause is satisfied by the assignment")
        need, stack = set(), [root]
        while stack:
            u = stack.pop()
            if u in need:
                continue
            need.add(u)
            stack.extend(_sources(self.recipe[u]))
        steps, emitted, node_map = [], {}, {}
        calc = self.trace.calculus

        def push(concl, rule, ants, aux):
            sid = len(steps) + 1
            steps.append(ProofStep(sid, concl, rule, tuple(ants), aux))
            return sid

        for s in self.trace.steps:
            u = s.id
            if u not in need:
                node_map[u] = PRUNED if cpp[u] is PRUNED else "UNUSED"
                continue
            if cpp[u] is PRUNED:
                raise InvariantError(u, "needed node is satisfied by the assignment")
            if self.g[u] != self.g[root]:
                raise InvariantError(u, "needed node sits on the other side")
            lab = _content_label(cpp[u], self.f)
            bad = R_CLAUSE if side == Q_SIDE else Q_CLAUSE
            if lab in (bad, MIXED):
                raise InvariantError(u, f"{format_clause(cpp[u])} is not a {side} clause")
            try:
                eid, concl = self.replay(u, cpp, emitted, push, rf, calc)
            except RuleViolation as e:
                raise InvariantError(u, f"replay in the restricted proof fails: {e}") from None
            if concl != cpp[u]:
                raise InvariantError(u, f"replayed {format_clause(concl)}, "
                                        f"expected {format_clause(cpp[u])}")
            emitted[u] = (eid, concl)
            node_map[u] = concl
        eid, concl = emitted[root]
        if self.b is not None and concl:
            blits = [l for l in concl if l.var == self.b]
            if any(l.pol == STAR for l in blits):
                raise InvariantError(root, "merged b literal reached the root")
            if len(concl) == 1 and blits:
                eid = push(frozenset(), URED, (eid,), blits[0])
                concl = frozenset()
        if concl:
            raise InvariantError(root, f"root restricts to {format_clause(concl)}")
        if eid != len(steps):
            raise InvariantError(root, "root is not the last emitted step")
        out = ProofTrace(calc, rf, tuple(steps))
        report = check_refutation(out, rf)
        if not report.valid:
            raise InvariantError(report.first_failure[0], f"emitted proof fails: {report.summary()}")
        return RestrictedProof(side, out, node_map, rf)

    def replay(self, u, cpp, emitted, push, rf, calc):
        """Emit the steps that derive C''_u from the already emitted sources."""
        rec = self.recipe[u]
        kind = rec[0]
        if kind == "ax":
            return push(cpp[u], AXIOM, (), None), cpp[u]
        if kind == "copy":
            return emitted[rec[1]]
        if kind == "ured":
            eid, c = emitted[rec[1]]
            for l in rec[2]:
                c = reduce_cdcl(c, l, rf)
                eid = push(c, URED_STAR if l.pol == STAR else URED, (eid,), l)
            return eid, c
        if kind == "merge":
            eid, c = emitted[rec[1]]
            c = merge_step(c, rec[2])
            return push(c, MERGE, (eid,), rec[2]), c
        if kind == "inst":
            eid, c = emitted[rec[1]]
            c2 = instantiate_step(rec[2], c, rf)
            if c2 != c:
                eid = push(c2, INST, (eid,), rec[2])
            merges = rec[3]
            c = c2
        else:
            (e1, c1), (e2, c2) = emitted[rec[1]], emitted[rec[2]]
            aux = rec[3]
            if self.expansion:
                c = resolve_expansion(c1, c2, aux, rf, calc)
            else:
                c = resolve_cdcl(c1, c2, aux.pivot, rf, calc)
            eid = push(c, RES, (e1, e2), aux)
            merges = rec[4]
        for m in merges:
            c = merge_step(c, m)
            eid = push(c, MERGE, (eid,), m)
        return eid, c


def _sources(rec):
    kind = rec[0]
    if kind == "ax":
        return []
    if kind == "res":
        return [rec[1], rec[2]]
    return [rec[1]]


def restrict_proof(trace, formula, circuit, a):
    """Per-assignment witness: a checked one-sided refutation under ``a``.

    The circuit decides every choice, so SEL and MONO3 gates select the
    general or monotone rule at each shared-variable resolution.
    """
    f = formula if formula is not None else trace.formula
    f.require_partition()
    a = {v: a[v] for v in f.p_vars}
    r = _Restrictor(trace, f, circuit, a)
    r.build()
    return r.emit()


def verify_interpolant(circuit, formula, cap=DEFAULT_P_CAP, jobs=1):
    """Exhaustive interpolant check against the oracle; see :class:`InterpolantReport`."""
    return check_interpolant(circuit, formula, cap, jobs)
