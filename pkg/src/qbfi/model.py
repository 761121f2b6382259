"""Prenex CNF formulas, literals, annotations and the weakening-up-to-star order.

Two clause flavours share this module:

* plain clauses for the CDCL-style calculi, sets of :class:`Lit` where the
  polarity may be ``STAR`` for merged universal literals;
* annotated clauses for the expansion calculi, sets of :class:`AnnLit`
  carrying a partial assignment to universal variables.

Annotations are sorted tuples of ``(uid, value)`` pairs with values in
``{0, 1, STAR}``.  All values are immutable and every function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import FormatError, QbfiError

NEG, POS, STAR = 0, 1, 2

EXISTS, FORALL = "e", "a"

P, Q, R, B = "p", "q", "r", "b"

SATISFIED = None


class Lit(NamedTuple):
    var: int
    pol: int

    def neg(self):
        if self.pol == STAR:
            raise ValueError("merged literal has no complement")
        return Lit(self.var, 1 - self.pol)

    def __str__(self):
        if self.pol == STAR:
            return f"{self.var}*"
        return str(self.var) if self.pol == POS else f"-{self.var}"


class AnnLit(NamedTuple):
    var: int
    pol: int
    ann: tuple = ()

    def neg(self):
        return AnnLit(self.var, 1 - self.pol, self.ann)

    @property
    def lit(self):
        return Lit(self.var, self.pol)

    def __str__(self):
        base = str(self.var) if self.pol == POS else f"-{self.var}"
        if not self.ann:
            return base
        return base + ":" + format_annotation(self.ann)


def lit(x):
    """Plain literal from a signed DIMACS integer."""
    return Lit(abs(x), POS if x > 0 else NEG)


def clause(*xs):
    return frozenset(lit(x) for x in xs)


def annotation(entries=()):
    """Canonical annotation from a mapping or an iterable of pairs."""
    if isinstance(entries, Mapping):
        entries = entries.items()
    out = dict()
    for u, c in entries:
        if c not in (0, 1, STAR):
            raise ValueError(f"bad annotation value {c!r}")
        if u in out and out[u] != c:
            raise ValueError(f"conflicting annotation entries for {u}")
        out[u] = c
    return tuple(sorted(out.items()))


def format_annotation(ann):
    return ",".join(f"{u}={'*' if c == STAR else c}" for u, c in ann)


def alit(x, ann=()):
    """Annotated literal from a signed integer and annotation entries."""
    return AnnLit(abs(x), POS if x > 0 else NEG, annotation(ann))


def sorted_clause(c):
    return sorted(c)


def format_clause(c):
    return " ".join(str(l) for l in sorted(c)) or "[]"


@dataclass(frozen=True)
class Qbf:
    """Closed prenex CNF.

    ``prefix`` is a tuple of ``(quantifier, var)`` pairs in order; the index of a
    variable is its 1-based position.  ``partition`` optionally labels variables
    with one of ``p``, ``q``, ``r``, ``b``.
    """

    prefix: tuple
    matrix: tuple
    partition: Mapping | None = field(default=None)

    def __post_init__(self):
        seen = set()
        for qt, v in self.prefix:
            if qt not in (EXISTS, FORALL):
                raise FormatError("SYNTAX", f"bad quantifier {qt!r}")
            if v in seen:
                raise FormatError("SYNTAX", f"variable {v} quantified twice")
            seen.add(v)
        for c in self.matrix:
            vs = set()
            for l in c:
                if l.var not in seen:
                    raise FormatError("UNBOUND_VARIABLE", f"variable {l.var} not in prefix")
                if l.pol == STAR:
                    raise FormatError("SYNTAX", "merged literal in matrix")
                if l.var in vs:
                    raise FormatError("TAUTOLOGICAL_CLAUSE", format_clause(c))
                vs.add(l.var)
        if self.partition is not None:
            self._check_partition()

    def _check_partition(self):
        part = self.partition
        for v, lab in part.items():
            if v not in self.index:
                raise FormatError("BAD_PARTITION", f"variable {v} not in prefix")
            if lab not in (P, Q, R, B):
                raise FormatError("BAD_PARTITION", f"unknown label {lab!r}")
        ps = [v for v, lab in part.items() if lab == P]
        rest = [v for v, lab in part.items() if lab in (Q, R)]
        for v in ps:
            if self.quant[v] != EXISTS:
                raise FormatError("BAD_PARTITION", f"p variable {v} is universal")
        if ps and rest and max(self.index[v] for v in ps) > min(self.index[v] for v in rest):
            raise FormatError("BAD_PARTITION", "p variables must precede q and r variables")
        bs = [v for v, lab in part.items() if lab == B]
        if len(bs) > 1:
            raise FormatError("BAD_PARTITION", "at most one b variable")
        if bs:
            b = bs[0]
            if self.quant[b] != FORALL:
                raise FormatError("BAD_PARTITION", "b must be universal")
            if any(self.index[v] > self.index[b] for v in ps):
                raise FormatError("BAD_PARTITION", "b must follow the p block")
            if rest and self.index[b] > min(self.index[v] for v in rest):
                raise FormatError("BAD_PARTITION", "b must precede q and r variables")
        for c in self.matrix:
            labs = {part.get(l.var) for l in c}
            if Q in labs and R in labs:
                raise FormatError("BAD_PARTITION", f"clause mixes q and r: {format_clause(c)}")

    @cached_property
    def index(self):
        return {v: i for i, (_, v) in enumerate(self.prefix, 1)}

    @cached_property
    def quant(self):
        return {v: qt for qt, v in self.prefix}

    @property
    def variables(self):
        return [v for _, v in self.prefix]

    def is_universal(self, v):
        return self.quant[v] == FORALL

    def is_existential(self, v):
        return self.quant[v] == EXISTS

    def label(self, v):
        if self.partition is None:
            return None
        return self.partition.get(v)

    def vars_labelled(self, lab):
        if self.partition is None:
            return []
        return [v for v in self.variables if self.partition.get(v) == lab]

    @property
    def p_vars(self):
        return self.vars_labelled(P)

    @property
    def b_var(self):
        bs = self.vars_labelled(B)
        return bs[0] if bs else None

    def require_partition(self):
        if self.partition is None:
            raise QbfiError("NO_PARTITION", "formula has no partition")

    def clause_side(self, c):
        """``'A'`` or ``'B'`` for a matrix clause; p-only clauses go to A."""
        self.require_partition()
        b = self.b_var
        for l in c:
            lab = self.partition.get(l.var)
            if lab == Q:
                return "A"
            if lab == R:
                return "B"
            if l.var == b:
                return "A" if l.pol == POS else "B"
        return "A"

    @cached_property
    def a_clauses(self):
        return tuple(c for c in self.matrix if self.clause_side(c) == "A")

    @cached_property
    def b_clauses(self):
        return tuple(c for c in self.matrix if self.clause_side(c) == "B")


def restrict_clause(c, alpha):
    """Apply a partial assignment; returns ``SATISFIED`` (None) or the reduced clause."""
    out = []
    for l in c:
        if l.var in alpha:
            if l.pol == STAR:
                raise QbfiError("ASSIGN_TO_STAR", f"assignment touches merged literal {l}")
            if alpha[l.var] == l.pol:
                return SATISFIED
        else:
            out.append(l)
    return frozenset(out)


def restrict_qbf(f, alpha, keep=None, partition=None):
    """Restrict a formula by ``alpha`` and drop assigned variables from the prefix.

    ``keep`` optionally limits the surviving prefix to a set of variables.
    Satisfied clauses are removed.
    """
    prefix = tuple((qt, v) for qt, v in f.prefix
                   if v not in alpha and (keep is None or v in keep))
    matrix = []
    for c in f.matrix:
        r = restrict_clause(c, alpha)
        if r is not SATISFIED:
            matrix.append(r)
    return Qbf(prefix, tuple(matrix), partition)


def preceq_clause(c, d):
    """``c`` weakens to ``d`` allowing a literal to become its merged form."""
    for l in c:
        if l.pol == STAR:
            if l not in d:
                return False
        elif l not in d and Lit(l.var, STAR) not in d:
            return False
    return True


def preceq_annotation(t, s):
    if len(t) != len(s):
        return False
    for (u, c), (w, d) in zip(t, s):
        if u != w:
            return False
        if c != d and d != STAR:
            return False
    return True


def max_matching(left, compatible):
    """Kuhn's augmenting-path matching.  ``compatible(x)`` lists candidate partners.

    Returns a dict from matched left items to right items.
    """
    match_right = {}

    def augment(x, seen):
        for y in compatible(x):
            if y in seen:
                continue
            seen.add(y)
            if y not in match_right or augment(match_right[y], seen):
                match_right[y] = x
                return True
        return False

    for x in left:
        augment(x, set())
    return {x: y for y, x in match_right.items()}


def annotated_compatible(x, d):
    return [y for y in sorted(d)
            if y.var == x.var and y.pol == x.pol and preceq_annotation(x.ann, y.ann)]


def preceq_annotated(c, d):
    """Injective weakening for annotated clauses."""
    left = sorted(c)
    m = max_matching(left, lambda x: annotated_compatible(x, d))
    return len(m) == len(left)


def complete(tau, mu):
    """Completion: ``tau`` wins where defined, ``mu`` fills the rest."""
    out = dict(mu)
    out.update(dict(tau))
    return tuple(sorted(out.items()))


def filter_annotation(var, sigma, ind):
    """Keep the entries of ``sigma`` on variables quantified before ``var``."""
    k = ind[var]
    return tuple((u, c) for u, c in sigma if ind[u] < k)


def instantiate(tau, c, ind):
    return frozenset(AnnLit(l.var, l.pol, filter_annotation(l.var, complete(l.ann, tau), ind))
                     for l in c)


def merge_annotations(mu, sigma):
    if [u for u, _ in mu] != [u for u, _ in sigma]:
        raise QbfiError("MERGE_DOMAIN", "annotations have different domains")
    return tuple((u, c if c == d else STAR) for (u, c), (_, d) in zip(mu, sigma))


def annotation_domain(ann):
    return {u for u, _ in ann}


def axiom_clause(c, f):
    """Expansion-calculus axiom of a matrix clause."""
    tau = annotation((l.var, 1 - l.pol) for l in c if f.is_universal(l.var))
    return frozenset(AnnLit(l.var, l.pol, filter_annotation(l.var, tau, f.index))
                     for l in c if f.is_existential(l.var))


def eval_matrix(matrix, alpha):
    return all(restrict_clause(c, alpha) is SATISFIED for c in matrix)


def clause_vars(c: Iterable):
    return {l.var for l in c}
