import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qbfi.checker import check_refutation
from qbfi.circuit import CONST0, CONST1, Circuit, Gate
from qbfi.errors import QbfiError
from qbfi.generators import gen_clique_noclique, gen_fb
from qbfi.goldens import load_golden
from qbfi.oracle import (check_interpolant, eval_qbf, find_qres_refutation, side_formula,
                         verify_b_strategy)

from helpers import qbf


@pytest.mark.parametrize("prefix, clauses, want", [
    ("a1", [(1,)], False),
    ("e1", [(1,)], True),
    ("a1 e2", [(1, 2), (-1, -2)], True),
    ("e2 a1", [(1, 2), (-1, -2)], False),
    ("e1 a2 e3", [(1, 2, 3), (1, 2, -3), (-1, -2, 3), (-1, -2, -3)], False),
    ("e1 e2", [], True),
    ("e1", [()], False),
])
def test_small_examples(prefix, clauses, want):
    assert eval_qbf(qbf(prefix, clauses)) is want


def test_partial_assignment():
    f = qbf("e1 e2", [(1, 2), (-1,)])
    assert eval_qbf(f, {1: 0})
    assert not eval_qbf(f, {1: 0, 2: 0})


cnfs = st.lists(st.lists(st.integers(1, 5).flatmap(lambda v: st.sampled_from([v, -v])),
                         min_size=1, max_size=3, unique_by=abs), max_size=10)


@settings(max_examples=150)
@given(cnfs)
def test_sat_agrees_with_brute_force(cls):
    f = qbf("e1 e2 e3 e4 e5", cls)
    brute = any(all(any((x > 0) == bool(bits[abs(x) - 1]) for x in c) for c in cls)
                for bits in itertools.product((0, 1), repeat=5))
    assert eval_qbf(f) == brute


@settings(max_examples=100)
@given(cnfs, st.lists(st.sampled_from("ea"), min_size=5, max_size=5))
def test_qbf_agrees_with_expansion(cls, quants):
    prefix = " ".join(f"{q}{i}" for i, q in enumerate(quants, 1))

    def expand(i, alpha):
        if i > 5:
            return all(any((x > 0) == bool(alpha[abs(x)]) for x in c) for c in cls)
        vals = (expand(i + 1, {**alpha, i: b}) for b in (0, 1))
        return any(vals) if quants[i - 1] == "e" else all(vals)

    assert eval_qbf(qbf(prefix, cls)) == expand(1, {})


def test_cap(monkeypatch):
    f = qbf("e1 e2 e3", [(1, 2, 3)])
    with pytest.raises(QbfiError) as e:
        eval_qbf(f, cap=2)
    assert e.value.code == "CAP_EXCEEDED"
    assert eval_qbf(f, {1: 0}, cap=2)
    monkeypatch.setenv("QBFI_CAP", "2")
    with pytest.raises(QbfiError):
        eval_qbf(f)


def test_prover_finds_short_refutation():
    f, _ = load_golden("xut4")
    t = find_qres_refutation(f)
    assert len(t) <= 64
    assert check_refutation(t).valid


def test_prover_on_true_formula():
    with pytest.raises(QbfiError) as e:
        find_qres_refutation(qbf("a1 e2", [(1, 2), (-1, -2)]))
    assert e.value.code == "EXHAUSTED"


def test_prover_budget():
    f = gen_clique_noclique(4)
    with pytest.raises(QbfiError) as e:
        find_qres_refutation(f, budget=3)
    assert e.value.code == "EXHAUSTED"


def test_side_formula_fixes_b():
    f = gen_fb(qbf("e1 e2 e3", [(1, 2), (-1, 3)], {"p": [1], "q": [2], "r": [3]}))
    a_side = side_formula(f, "A", {1: 0})
    b_side = side_formula(f, "B", {1: 1})
    assert [v for _, v in a_side.prefix] == [2]
    assert [v for _, v in b_side.prefix] == [3]
    assert eval_qbf(a_side) and eval_qbf(b_side)


F = qbf("e1 e2 e3", [(1, 2), (1, -2), (-1, 3), (-1, -3)], {"p": [1], "q": [2], "r": [3]})


def const(k):
    return Circuit((1,), (Gate(1, k),), 1)


@pytest.mark.parametrize("kind, bad", [(CONST0, 1), (CONST1, 1)])
def test_constant_circuits_fail_somewhere(kind, bad):
    rep = check_interpolant(const(kind), F)
    assert rep.checked == 2 and len(rep.counterexamples) == bad
    assert rep.summary().startswith("FAIL")


def test_interpolant_errors():
    with pytest.raises(QbfiError) as e:
        check_interpolant(const(CONST0), F, cap=0)
    assert e.value.code == "TOO_MANY_P_VARS"
    with pytest.raises(QbfiError) as e:
        check_interpolant(Circuit((9,), (Gate(1, CONST0),), 1), F)
    assert e.value.code == "INPUT_MISMATCH"


def test_b_strategy_verdicts():
    g = qbf("e1 e2 e3", [(1, 2), (1, -2), (-1, 3), (-1, -3)], {"p": [1], "q": [2], "r": [3]})
    fb = gen_fb(g)
    good = Circuit((1,), (Gate(1, "INPUT", (1,)),), 1)
    assert verify_b_strategy(good, fb).summary() == "OK 2 assignments"
    assert not verify_b_strategy(const(CONST1), fb).ok
    with pytest.raises(QbfiError) as e:
        verify_b_strategy(good, g)
    assert e.value.code == "B_NOT_MARKED"


def test_empty_clause_side_is_false_everywhere():
    # the A side holds the empty clause, so CONST0 is always right
    f = qbf("e1 e2 e3", [(), (-1, 3)], {"p": [1], "q": [2], "r": [3]})
    assert check_interpolant(const(CONST0), f).ok
