"""Rule checking for CDCL-style and expansion-style QBF resolution traces.

Every step is checked by recomputing its conclusion from the antecedents and
the rule payload; the stated clause is only compared, never trusted.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import QbfiError, RuleViolation
from .formats import (AXIOM, EXPANSION_CALCULI, INST, IRCALC, IRMCALC, LDQRES, LQUPLUS,
                      MERGE, QURES, RES, URED, URED_STAR)
from .model import (B, P, POS, Q, R, STAR, AnnLit, Lit, annotation_domain, axiom_clause,
                    format_clause, instantiate, merge_annotations)

LONG_DISTANCE = (LDQRES, LQUPLUS)
UNIVERSAL_PIVOTS = (QURES, LQUPLUS)

Q_CLAUSE, R_CLAUSE, MIXED = "Q_CLAUSE", "R_CLAUSE", "MIXED"


@dataclass
class CheckReport:
    valid: bool
    first_failure: tuple | None = None
    stats: Counter = field(default_factory=Counter)
    message: str = ""

    def summary(self):
        if self.valid:
            counts = " ".join(f"{k}={v}" for k, v in sorted(self.stats.items()))
            return f"VALID {counts}".rstrip()
        sid, label = self.first_failure
        return f"INVALID step {sid} {label} {self.message}".rstrip()


def resolve_cdcl(c1, c2, pivot, f, calculus):
    """Resolvent of ``c1`` (holding ``pivot``) and ``c2`` (holding its complement).

    Applies the short- or long-distance rule allowed by ``calculus``.
    """
    if pivot.pol == STAR:
        raise RuleViolation("STAR_PIVOT", f"pivot {pivot} is a merged literal")
    if f.is_universal(pivot.var) and calculus not in UNIVERSAL_PIVOTS:
        raise RuleViolation("PIVOT_KIND", f"universal pivot {pivot} not allowed in {calculus}")
    neg = pivot.neg()
    if pivot not in c1 or neg not in c2:
        raise RuleViolation("PIVOT_MISSING", f"pivot {pivot} not in the antecedents")
    r1 = {l.var: l for l in c1 if l != pivot}
    r2 = {l.var: l for l in c2 if l != neg}
    out = set(r1.values()) | set(r2.values())
    kpivot = f.index[pivot.var]
    for v in sorted(r1.keys() & r2.keys()):
        l1, l2 = r1[v], r2[v]
        if l1 == l2 and l1.pol != STAR:
            continue
        if calculus not in LONG_DISTANCE:
            raise RuleViolation("TAUTOLOGY_RESOLVENT", f"complementary or merged literals on {v}")
        if f.is_existential(v):
            if STAR in (l1.pol, l2.pol):
                raise RuleViolation("U_SHAPE", f"merged literal on existential {v}")
            raise RuleViolation("EXISTENTIAL_CLASH", f"existential {v} occurs with both signs")
        if f.index[v] <= kpivot:
            raise RuleViolation("U_INDEX", f"merged universal {v} does not follow the pivot")
        out.discard(l1)
        out.discard(l2)
        out.add(Lit(v, STAR))
    return frozenset(out)


def reduce_cdcl(c, l, f):
    if not f.is_universal(l.var):
        raise RuleViolation("RED_NOT_UNIVERSAL", f"{l} is existential")
    if l not in c:
        raise RuleViolation("LITERAL_MISSING", f"{l} not in the antecedent")
    rest = c - {l}
    k = f.index[l.var]
    for m in rest:
        if f.is_existential(m.var) and f.index[m.var] > k:
            raise RuleViolation("RED_INDEX", f"{l} precedes existential {m}")
    return rest


def resolve_expansion(c1, c2, aux, f, calculus):
    """IR/IRM resolution; ``aux.pivot.ann`` is the shared part, ``xi``/``sigma`` the rest."""
    pivot, xi, sigma = aux.pivot, aux.xi, aux.sigma
    tau = pivot.ann
    if f.is_universal(pivot.var):
        raise RuleViolation("PIVOT_KIND", f"universal pivot {pivot.var}")
    if calculus == IRCALC and (xi or sigma):
        raise RuleViolation("PIVOT_ANNOTATION_MISMATCH", "IR-calc pivots need equal annotations")
    dt, dx, ds = annotation_domain(tau), annotation_domain(xi), annotation_domain(sigma)
    if dt & dx or dt & ds or dx & ds:
        raise RuleViolation("DOMAINS_NOT_DISJOINT", "pivot annotation parts overlap")
    if any(c == STAR for _, c in tau):
        raise RuleViolation("TAU_RANGE", "shared pivot annotation contains *")
    p1 = AnnLit(pivot.var, pivot.pol, tuple(sorted(tau + xi)))
    p2 = AnnLit(pivot.var, 1 - pivot.pol, tuple(sorted(tau + sigma)))
    if p1 not in c1:
        raise RuleViolation("PIVOT_MISSING", f"{p1} not in first antecedent")
    if p2 not in c2:
        if any(l.var == p2.var and l.pol == p2.pol for l in c2):
            raise RuleViolation("PIVOT_ANNOTATION_MISMATCH", f"{p2} not in second antecedent")
        raise RuleViolation("PIVOT_MISSING", f"{p2} not in second antecedent")
    return instantiate(sigma, c1 - {p1}, f.index) | instantiate(xi, c2 - {p2}, f.index)


def instantiate_step(tau, c, f):
    for u, v in tau:
        if v == STAR or not f.is_universal(u):
            raise RuleViolation("INST_RANGE", "instantiation must map universals to 0/1")
    return instantiate(tau, c, f.index)


def merge_step(c, aux):
    a, b = aux.first, aux.second
    if a not in c or b not in c:
        raise RuleViolation("LITERAL_MISSING", "merged literals not in the antecedent")
    if a.lit != b.lit or a.ann == b.ann:
        raise RuleViolation("MERGE_DOMAIN", f"{a} and {b} cannot be merged")
    try:
        xi = merge_annotations(a.ann, b.ann)
    except QbfiError as e:
        raise RuleViolation("MERGE_DOMAIN", e.message) from None
    return (c - {a, b}) | {AnnLit(a.var, a.pol, xi)}


def axiom_sources(conclusion, f, expansion):
    """Matrix clauses whose axiom instance is ``conclusion``."""
    if expansion:
        return [c for c in f.matrix if axiom_clause(c, f) == conclusion]
    return [c for c in f.matrix if c == conclusion]


def check_step_cdcl(step, antecedents, f, calculus):
    """Recompute the conclusion of a CDCL-family step; raise RuleViolation on failure."""
    if step.rule == AXIOM:
        if step.conclusion not in set(f.matrix):
            raise RuleViolation("NOT_AXIOM", format_clause(step.conclusion))
        return
    if step.rule in (URED, URED_STAR):
        if step.rule == URED_STAR and calculus not in LONG_DISTANCE:
            raise RuleViolation("RULE_NOT_ALLOWED", f"URED* in {calculus}")
        expected = reduce_cdcl(antecedents[0], step.aux, f)
    elif step.rule == RES:
        expected = resolve_cdcl(antecedents[0], antecedents[1], step.aux.pivot, f, calculus)
    else:
        raise RuleViolation("RULE_NOT_ALLOWED", f"{step.rule} in {calculus}")
    if expected != step.conclusion:
        raise RuleViolation("WRONG_CONCLUSION",
                            f"expected {format_clause(expected)}, got {format_clause(step.conclusion)}")


def check_step_expansion(step, antecedents, f, calculus):
    """Recompute the conclusion of an IR/IRM step; raise RuleViolation on failure."""
    if step.rule == AXIOM:
        if any(axiom_clause(c, f) == step.conclusion for c in f.matrix):
            return
        plain = {l.lit for l in step.conclusion}
        if any({l.lit for l in axiom_clause(c, f)} == plain for c in f.matrix):
            raise RuleViolation("BAD_AXIOM_ANNOTATION", format_clause(step.conclusion))
        raise RuleViolation("NOT_AXIOM", format_clause(step.conclusion))
    if step.rule == INST:
        expected = instantiate_step(step.aux, antecedents[0], f)
    elif step.rule == RES:
        expected = resolve_expansion(antecedents[0], antecedents[1], step.aux, f, calculus)
    elif step.rule == MERGE:
        if calculus != IRMCALC:
            raise RuleViolation("RULE_NOT_ALLOWED", f"MERGE in {calculus}")
        expected = merge_step(antecedents[0], step.aux)
    else:
        raise RuleViolation("RULE_NOT_ALLOWED", f"{step.rule} in {calculus}")
    if expected != step.conclusion:
        raise RuleViolation("WRONG_CONCLUSION",
                            f"expected {format_clause(expected)}, got {format_clause(step.conclusion)}")


def check_step(step, antecedents, f, calculus):
    if calculus in EXPANSION_CALCULI:
        check_step_expansion(step, antecedents, f, calculus)
    else:
        check_step_cdcl(step, antecedents, f, calculus)


def check_refutation(trace, formula=None, calculus=None):
    """Check every step and require the root to be the empty clause.

    ``calculus`` overrides the trace header, as long as it is in the same family.
    """
    f = formula if formula is not None else trace.formula
    calc = calculus or trace.calculus
    if (calc in EXPANSION_CALCULI) != trace.is_expansion:
        raise QbfiError("CALCULUS_FAMILY", f"{calc} cannot check a {trace.calculus} trace")
    report = CheckReport(True)
    concl = {}
    for step in trace.steps:
        ants = [concl[a] for a in step.antecedents]
        try:
            check_step(step, ants, f, calc)
        except RuleViolation as e:
            return CheckReport(False, (step.id, e.code), report.stats, e.message)
        concl[step.id] = step.conclusion
        report.stats[step.rule] += 1
    root = trace.steps[-1]
    if root.conclusion:
        return CheckReport(False, (root.id, "NO_EMPTY_ROOT"), report.stats,
                           f"root concludes {format_clause(root.conclusion)}")
    return report


def _content_label(c, f):
    b = f.b_var
    qs = rs = False
    for l in c:
        lab = f.partition.get(l.var)
        if lab == Q or (lab == B and l.pol == POS):
            qs = True
        elif lab == R or (lab == B and l.pol != POS):
            rs = True
        elif lab != P and l.var != b:
            return MIXED
    if qs and rs:
        return MIXED
    if qs:
        return Q_CLAUSE
    if rs:
        return R_CLAUSE
    return None


def classify_all(trace, f=None):
    """Label every step as a q-clause, r-clause or mixed clause."""
    f = f if f is not None else trace.formula
    if f.partition is None:
        raise QbfiError("NO_PARTITION", "classification needs a partition")
    labels, ancestors = {}, {}
    for step in trace.steps:
        anc = set(step.antecedents)
        for a in step.antecedents:
            anc |= ancestors[a]
        ancestors[step.id] = anc
        lab = _content_label(step.conclusion, f)
        if lab is None:
            if step.rule == AXIOM:
                srcs = axiom_sources(step.conclusion, f, trace.is_expansion)
                side = f.clause_side(srcs[0]) if srcs else "A"
                lab = Q_CLAUSE if side == "A" else R_CLAUSE
            else:
                seen = {labels[a] for a in anc}
                lab = seen.pop() if len(seen) == 1 and MIXED not in seen else MIXED
        labels[step.id] = lab
    return labels


def classify_clause(step_id, trace, f=None):
    return classify_all(trace, f)[step_id]
