"""Ground truth for small formulas.

``eval_qbf`` decides a closed QBF by prefix-order recursion with memoisation
on the remaining clause set (plus unit propagation, pure literals and
universal reduction, all of which preserve the truth value).
``find_qres_refutation`` is a naive given-clause saturation prover that emits
Q-Res traces for test inputs.
"""

from __future__ import annotations

import heapq
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import QbfiError
from .formats import AXIOM, QRES, RES, URED, ProofStep, ProofTrace, ResAux
from .model import B, FORALL, NEG, POS, Q, R, Lit, Qbf, restrict_clause

DEFAULT_EVAL_CAP = 28
DEFAULT_P_CAP = 20


def eval_cap():
    return int(os.environ.get("QBFI_CAP", DEFAULT_EVAL_CAP))


def _to_int(l):
    return l.var if l.pol == POS else -l.var


class _Evaluator:
    def __init__(self, f):
        self.order = [v for _, v in f.prefix]
        self.ind = f.index
        self.univ = {v for qt, v in f.prefix if qt == FORALL}
        self.memo = {}

    def simplify(self, clauses):
        """Propagate to a fixpoint.  Returns None for a falsified matrix."""
        clauses = set(clauses)
        while True:
            reduced = set()
            for c in clauses:
                emax = max((self.ind[abs(x)] for x in c if abs(x) not in self.univ), default=0)
                r = frozenset(x for x in c if abs(x) not in self.univ or self.ind[abs(x)] < emax)
                if not r:
                    return None
                reduced.add(r)
            clauses = reduced
            lits = {x for c in clauses for x in c}
            forced = {next(iter(c)) for c in clauses if len(c) == 1}
            for x in lits:
                if -x not in lits:
                    forced.add(-x if abs(x) in self.univ else x)
            if not forced:
                return clauses
            if any(-x in forced for x in forced):
                return None
            nxt = set()
            for c in clauses:
                if c & forced:
                    continue
                nxt.add(c - {-x for x in forced})
            clauses = nxt

    def solve(self, clauses):
        clauses = self.simplify(clauses)
        if clauses is None:
            return False
        if not clauses:
            return True
        key = frozenset(clauses)
        if key in self.memo:
            return self.memo[key]
        present = {abs(x) for c in clauses for x in c}
        v = next(v for v in self.order if v in present)
        results = (self.solve(_assign(clauses, x)) for x in (v, -v))
        val = all(results) if v in self.univ else any(results)
        self.memo[key] = val
        return val


def _assign(clauses, x):
    return {c - {-x} for c in clauses if x not in c}


def eval_qbf(f, partial=None, cap=None):
    """Truth value of ``f`` under an optional partial assignment ``{var: 0|1}``."""
    cap = eval_cap() if cap is None else cap
    partial = partial or {}
    free = [v for v in f.variables if v not in partial]
    if len(free) > cap:
        raise QbfiError("CAP_EXCEEDED", f"{len(free)} variables exceed the cap of {cap}")
    clauses = []
    for c in f.matrix:
        r = restrict_clause(c, partial)
        if r is not None:
            clauses.append(frozenset(_to_int(l) for l in r))
    return _Evaluator(f).solve(clauses)


def side_formula(f, side, a):
    """The one-sided QBF ``Qq.A(a,q)`` (side ``'A'``) or ``Qr.B(a,r)`` (side ``'B'``).

    On a formula with a ``b`` variable, ``b`` is fixed to the value that
    removes its literal from that side.
    """
    f.require_partition()
    alpha = dict(a)
    b = f.b_var
    if b is not None:
        alpha[b] = 0 if side == "A" else 1
    lab = Q if side == "A" else R
    src = f.a_clauses if side == "A" else f.b_clauses
    prefix = tuple((qt, v) for qt, v in f.prefix if f.partition.get(v) == lab)
    matrix = []
    for c in src:
        r = restrict_clause(c, alpha)
        if r is not None:
            matrix.append(r)
    return Qbf(prefix, tuple(matrix))


def p_assignments(pvars):
    for bits in itertools.product((0, 1), repeat=len(pvars)):
        yield dict(zip(pvars, bits))


@dataclass
class InterpolantReport:
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.counterexamples

    def summary(self):
        if self.ok:
            return f"OK {self.checked} assignments"
        lines = [f"FAIL {len(self.counterexamples)} of {self.checked} assignments"]
        for a, val, why in self.counterexamples:
            bits = "".join(str(a[v]) for v in sorted(a))
            lines.append(f"  p={bits} value={val} {why}")
        return "\n".join(lines)


def _check_one(args):
    from .circuit import eval_circuit
    circuit, f, a = args
    val = eval_circuit(circuit, a)
    side = "A" if val == 0 else "B"
    if eval_qbf(side_formula(f, side, a)):
        return (a, val, f"{side}-side is true")
    return None


def check_interpolant(circuit, f, cap=DEFAULT_P_CAP, jobs=1):
    """Exhaustively test the interpolant property over all p-assignments."""
    f.require_partition()
    pvars = f.p_vars
    if len(pvars) > cap:
        raise QbfiError("TOO_MANY_P_VARS", f"{len(pvars)} p variables exceed the cap of {cap}")
    if set(circuit.inputs) != set(pvars):
        raise QbfiError("INPUT_MISMATCH", "circuit inputs differ from the p variables")
    work = [(circuit, f, a) for a in p_assignments(pvars)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_check_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_check_one(w) for w in work]
    return InterpolantReport(len(work), [r for r in results if r is not None])


def verify_b_strategy(strategy, f, cap=DEFAULT_P_CAP, jobs=1):
    """Every winning strategy for ``b`` must behave as an interpolant."""
    if f.partition is None or f.b_var is None:
        raise QbfiError("B_NOT_MARKED", "formula has no b variable")
    return check_interpolant(strategy, f, cap, jobs)


# naive Q-Res saturation


def _reduce_int(c, f):
    """Universal literals removable from ``c``, largest index first."""
    emax = max((f.index[abs(x)] for x in c if f.is_existential(abs(x))), default=0)
    return sorted((x for x in c if f.is_universal(abs(x)) and f.index[abs(x)] > emax),
                  key=lambda x: -f.index[abs(x)])


def find_qres_refutation(f, budget=100_000):
    """Saturate under existential resolution and universal reduction.

    Returns a QRES :class:`ProofTrace` trimmed to the root's cone, or raises
    ``QbfiError('EXHAUSTED')`` when the budget runs out or the clause set
    saturates without the empty clause.
    """
    steps = {}
    counter = itertools.count(1)
    kept = []
    queue = []
    order = itertools.count()

    def add(clause, rule, ants, aux):
        sid = next(counter)
        steps[sid] = (clause, rule, ants, aux)
        return sid

    def reduce_and_push(c, sid):
        for x in _reduce_int(c, f):
            c = c - {x}
            sid = add(c, URED, (sid,), Lit(abs(x), POS if x > 0 else NEG))
        if any(c >= k for k, _ in kept):
            return None
        kept.append((c, sid))
        heapq.heappush(queue, (len(c), next(order), c, sid))
        return sid if not c else None

    for c in f.matrix:
        ci = frozenset(_to_int(l) for l in c)
        root = reduce_and_push(ci, add(ci, AXIOM, (), None))
        if root is not None:
            return _emit(f, steps, root)

    processed = []
    spent = 0
    while queue:
        _, _, given, gid = heapq.heappop(queue)
        if any(given > k for k, _ in processed):
            continue
        for d, did in processed:
            for x in given:
                if -x not in d or f.is_universal(abs(x)):
                    continue
                res = (given - {x}) | (d - {-x})
                if any(-y in res for y in res):
                    continue
                spent += 1
                if spent > budget:
                    raise QbfiError("EXHAUSTED", f"budget of {budget} resolutions spent")
                rid = add(res, RES, (gid, did), Lit(abs(x), POS if x > 0 else NEG))
                root = reduce_and_push(res, rid)
                if root is not None:
                    return _emit(f, steps, root)
        processed.append((given, gid))
    raise QbfiError("EXHAUSTED", "saturated without the empty clause")


def _emit(f, steps, root):
    need, stack = set(), [root]
    while stack:
        s = stack.pop()
        if s in need:
            continue
        need.add(s)
        stack.extend(steps[s][2])
    renum = {old: new for new, old in enumerate(sorted(need), 1)}
    out = []
    for old in sorted(need):
        clause, rule, ants, aux = steps[old]
        concl = frozenset(Lit(abs(x), POS if x > 0 else NEG) for x in clause)
        if rule == RES:
            aux = ResAux(aux)
        out.append(ProofStep(renum[old], concl, rule, tuple(renum[a] for a in ants), aux))
    return ProofTrace(QRES, f, tuple(out))
