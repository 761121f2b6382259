import pytest

from qbfi.checker import (MIXED, Q_CLAUSE, R_CLAUSE, check_refutation, check_step, classify_all,
                          classify_clause, resolve_cdcl)
from qbfi.errors import QbfiError, RuleViolation
from qbfi.formats import (IRCALC, IRMCALC, LDQRES, LQUPLUS, QRES, QURES, RES, URED, ProofStep,
                          ResAux, parse_trace)
from qbfi.goldens import golden_names, load_golden, mutations
from qbfi.model import STAR, Lit, alit, clause, lit

from helpers import qbf

XUT = qbf("e1 a2 e3", [(1, 2, 3), (1, 2, -3), (-1, -2, 3), (-1, -2, -3)])


def res(sid, concl, v, w, pivot):
    return ProofStep(sid, frozenset(concl), RES, (v, w), ResAux(pivot))


def test_tautology_resolvent_in_qres():
    f = qbf("e1 e2", [])
    step = res(3, [lit(2), lit(-2)], 1, 2, lit(1))
    with pytest.raises(RuleViolation) as e:
        check_step(step, [clause(1, 2), clause(-1, -2)], f, QRES)
    assert e.value.code == "TAUTOLOGY_RESOLVENT"


def test_long_distance_merge_gives_star():
    f = qbf("e1 a2", [])
    out = resolve_cdcl(clause(1, 2), clause(-1, -2), lit(1), f, LQUPLUS)
    assert out == {Lit(2, STAR)}


def test_reduction_example():
    f = qbf("e1 a2", [])
    step = ProofStep(2, clause(1), URED, (1,), lit(2))
    check_step(step, [clause(1, 2)], f, QRES)


@pytest.mark.parametrize("c1, c2, pivot, calc, code", [
    ((1, 2), (-1, -2), 1, LDQRES, None),
    ((1, 2), (-1, -2), 1, QRES, "TAUTOLOGY_RESOLVENT"),
    ((1, 3), (-1, -3), 1, LDQRES, "EXISTENTIAL_CLASH"),
    ((2, 3), (-2, -3), 3, LQUPLUS, "U_INDEX"),
    ((2, 1), (-2, 3), 2, QRES, "PIVOT_KIND"),
    ((2, 1), (-2, 3), 2, QURES, None),
    ((1, 3), (1, -3), -3, QRES, "PIVOT_MISSING"),
])
def test_resolution_conditions(c1, c2, pivot, calc, code):
    f = qbf("e1 a2 e3", [])
    try:
        resolve_cdcl(clause(*c1), clause(*c2), lit(pivot), f, calc)
    except RuleViolation as e:
        assert e.code == code
    else:
        assert code is None


def test_star_pivot_and_u_shape():
    f = qbf("e1 a2 e3", [])
    with pytest.raises(RuleViolation) as e:
        resolve_cdcl({Lit(2, STAR)}, clause(-2), Lit(2, STAR), f, LQUPLUS)
    assert e.value.code == "STAR_PIVOT"
    with pytest.raises(RuleViolation) as e:
        resolve_cdcl({lit(1), Lit(3, STAR)}, clause(-1, 3), lit(1), f, LDQRES)
    assert e.value.code == "U_SHAPE"


def test_equal_stars_merge_again():
    f = qbf("e1 a2", [])
    out = resolve_cdcl({lit(1), Lit(2, STAR)}, {lit(-1), Lit(2, STAR)}, lit(1), f, LDQRES)
    assert out == {Lit(2, STAR)}


def test_golden_refutation_example():
    t = parse_trace("s qrtf qres\n1 1 2 3 0 AX 0\n2 1 2 -3 0 AX 0\n3 1 2 0 RES 1 2 0 3 0\n"
                    "4 1 0 URED 3 0 2 0\n5 -1 -2 3 0 AX 0\n6 -1 -2 -3 0 AX 0\n"
                    "7 -1 -2 0 RES 5 6 0 3 0\n8 -1 0 URED 7 0 -2 0\n9 0 RES 4 8 0 1 0\n", XUT)
    rep = check_refutation(t)
    assert rep.valid and rep.first_failure is None
    assert rep.stats == {"AX": 4, "RES": 3, "URED": 2}
    assert rep.summary() == "VALID AX=4 RES=3 URED=2"


def test_non_empty_root():
    t = parse_trace("s qrtf qres\n1 1 2 3 0 AX 0\n", XUT)
    rep = check_refutation(t)
    assert not rep.valid and rep.first_failure == (1, "NO_EMPTY_ROOT")
    assert rep.summary().startswith("INVALID step 1 NO_EMPTY_ROOT")


def test_expansion_step_examples():
    f = qbf("e1 a3 e4", [(1, 3, 4), (-4,)])
    merged = ProofStep(2, frozenset({alit(4, {3: STAR})}), "MERGE", (1,), None)
    from qbfi.formats import MergeAux
    merged = ProofStep(2, frozenset({alit(4, {3: STAR})}), "MERGE", (1,),
                       MergeAux(alit(4, {3: 0}), alit(4, {3: 1})))
    check_step(merged, [frozenset({alit(4, {3: 0}), alit(4, {3: 1})})], f, IRMCALC)
    overlap = ProofStep(3, frozenset(), RES, (1, 2),
                        ResAux(alit(4), ((3, 0),), ((3, 0),)))
    with pytest.raises(RuleViolation) as e:
        check_step(overlap, [frozenset({alit(4, {3: 0})}), frozenset({alit(-4, {3: 0})})],
                   f, IRMCALC)
    assert e.value.code == "DOMAINS_NOT_DISJOINT"


@pytest.mark.parametrize("name", golden_names())
def test_goldens_are_valid(name):
    _, t = load_golden(name)
    assert check_refutation(t).valid


@pytest.mark.parametrize("name", golden_names())
def test_sub_calculus_monotonicity(name):
    _, t = load_golden(name)
    stronger = IRMCALC if t.is_expansion else LQUPLUS
    assert check_refutation(t, calculus=stronger).valid


def test_family_override_is_rejected():
    _, t = load_golden("xut4")
    with pytest.raises(QbfiError) as e:
        check_refutation(t, calculus=IRCALC)
    assert e.value.code == "CALCULUS_FAMILY"


@pytest.mark.parametrize("m", mutations(), ids=lambda m: f"{m.golden}-{m.step}-{m.label}")
def test_mutation_fails_with_label(m):
    f, _ = load_golden(m.golden)
    try:
        t = parse_trace(m.apply(), f)
    except QbfiError as e:
        assert e.code == m.label
        return
    rep = check_refutation(t)
    assert not rep.valid
    assert rep.first_failure[1] == m.label


def test_classification_on_chain():
    f, t = load_golden("chain2")
    labels = classify_all(t)
    by_id = t.by_id()
    for sid, lab in labels.items():
        vs = {l.var for l in by_id[sid].conclusion}
        if vs & {3}:
            assert lab == Q_CLAUSE
        if vs & {4, 5, 6}:
            assert lab == R_CLAUSE
    # (1 2) comes from A-axioms only, (-1) from B-axioms only
    assert classify_clause(7, t) == Q_CLAUSE
    assert classify_clause(9, t) == R_CLAUSE
    # the root mixes both sides
    assert classify_clause(t.root, t) == MIXED


def test_classification_mixed_content_and_b_literals():
    f, t = load_golden("fb_bpivot")
    labels = classify_all(t)
    assert labels[1] == Q_CLAUSE      # (p v b)
    assert labels[2] == R_CLAUSE      # (r v -b)
    assert labels[4] == R_CLAUSE      # (p v r)


def test_classification_needs_partition():
    _, t = load_golden("xut4")
    with pytest.raises(QbfiError) as e:
        classify_all(t)
    assert e.value.code == "NO_PARTITION"
