"""Formula generators: the clique-no-clique family and the b-transform.

Variable layout of ``gen_clique_noclique(n)``, in prefix order:

* ``p_uv`` for ``u < v``, the shared edge variables;
* ``q_iu``, vertex ``u`` sits at clique position ``i``;
* ``r1_u``, universal vertex selectors;
* ``r2``: a guard ``c``, the sequential-counter registers and the pair
  detectors ``t_uv``.

``A`` says the graph with edge set ``{uv : p_uv = 1}`` has an ``n/2``-clique.
``B`` says every selection of vertices is either too small or contains a
pair ``uv`` with ``p_uv = 0``, that is, the same graph has no such clique.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import QbfiError
from .model import B, EXISTS, FORALL, P, Q, R, Qbf, clause


@dataclass(frozen=True)
class CliqueLayout:
    n: int

    @property
    def k(self):
        return self.n // 2

    @property
    def pairs(self):
        return list(combinations(range(1, self.n + 1), 2))

    def p(self, u, v):
        return self.pairs.index((min(u, v), max(u, v))) + 1

    def q(self, i, u):
        return len(self.pairs) + (i - 1) * self.n + u

    def r1(self, u):
        return len(self.pairs) + self.k * self.n + u

    @property
    def first_r2(self):
        return len(self.pairs) + self.k * self.n + self.n + 1


def _at_most(xs, k, guard, fresh):
    """Sequential counter for ``sum(xs) <= k``; every clause carries ``-guard``."""
    n = len(xs)
    out = []
    if k == 0:
        return [(-guard, -x) for x in xs]
    if k >= n:
        return []
    s = {(i, j): fresh() for i in range(1, n) for j in range(1, k + 1)}
    out.append((-xs[0], s[1, 1]))
    out += [(-s[1, j],) for j in range(2, k + 1)]
    for i in range(2, n):
        x = xs[i - 1]
        out.append((-x, s[i, 1]))
        out.append((-s[i - 1, 1], s[i, 1]))
        for j in range(2, k + 1):
            out.append((-x, -s[i - 1, j - 1], s[i, j]))
            out.append((-s[i - 1, j], s[i, j]))
        out.append((-x, -s[i - 1, k]))
    out.append((-xs[-1], -s[n - 1, k]))
    return [(-guard,) + c for c in out]


def clique_a_families(n):
    """The four A-side families as lists of signed-integer clauses."""
    lay = CliqueLayout(n)
    k, vs = lay.k, range(1, n + 1)
    fam = {"C": [tuple(lay.q(i, u) for u in vs) for i in range(1, k + 1)]}
    fam["D"] = [(-lay.q(i, u), -lay.q(j, u))
                for i, j in combinations(range(1, k + 1), 2) for u in vs]
    fam["E"] = [(-lay.q(i, u), -lay.q(i, v))
                for i in range(1, k + 1) for u, v in lay.pairs]
    fam["F"] = [(-lay.q(i, u), -lay.q(j, v), lay.p(u, v))
                for i in range(1, k + 1) for j in range(1, k + 1) if i != j
                for u, v in lay.pairs]
    return fam


def gen_clique_noclique(n):
    if not isinstance(n, int) or n < 2 or n % 2:
        raise QbfiError("BAD_N", f"n must be an even integer >= 2, got {n!r}")
    lay = CliqueLayout(n)
    k = lay.k
    nxt = [lay.first_r2]

    def fresh():
        v = nxt[0]
        nxt[0] += 1
        return v

    a_side = [c for fam in clique_a_families(n).values() for c in fam]
    guard = fresh()
    r1 = [lay.r1(u) for u in range(1, n + 1)]
    b_side = _at_most(r1, k - 1, guard, fresh)
    detectors = []
    for u, v in lay.pairs:
        t = fresh()
        detectors.append(t)
        b_side += [(-t, lay.r1(u)), (-t, lay.r1(v)), (-t, -lay.p(u, v))]
    b_side.append(tuple([guard] + detectors))

    ps = list(range(1, len(lay.pairs) + 1))
    qs = [lay.q(i, u) for i in range(1, k + 1) for u in range(1, n + 1)]
    r2 = list(range(lay.first_r2, nxt[0]))
    prefix = ([(EXISTS, v) for v in ps + qs] + [(FORALL, v) for v in r1]
              + [(EXISTS, v) for v in r2])
    part = {v: P for v in ps}
    part.update({v: Q for v in qs})
    part.update({v: R for v in r1 + r2})
    matrix = tuple(clause(*c) for c in a_side + b_side)
    return Qbf(tuple(prefix), matrix, part)


def gen_fb(f):
    """Insert a fresh universal ``b`` after the p block, ``b`` into A, ``-b`` into B."""
    f.require_partition()
    if f.b_var is not None:
        raise QbfiError("BAD_PARTITION", "formula already has a b variable")
    b = max(f.variables, default=0) + 1
    ps = set(f.p_vars)
    cut = 0
    for i, (_, v) in enumerate(f.prefix):
        if v in ps:
            cut = i + 1
    prefix = f.prefix[:cut] + ((FORALL, b),) + f.prefix[cut:]
    matrix = tuple(c | clause(b if f.clause_side(c) == "A" else -b) for c in f.matrix)
    part = dict(f.partition)
    part[b] = B
    return Qbf(prefix, matrix, part)
