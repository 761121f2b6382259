import pytest
from hypothesis import given, strategies as st

from qbfi.circuit import (AND2, CONST0, CONST1, ID, INPUT, MONO3, OR2, SEL, Circuit, Gate,
                          eval_circuit, eval_gates, read_circuit, to_dot, write_circuit)
from qbfi.errors import FormatError, QbfiError


def sel_circuit(kind=SEL):
    gates = (Gate(1, CONST0), Gate(2, CONST1), Gate(3, kind, (7, 1, 2)))
    return Circuit((7,), gates, 3)


@pytest.mark.parametrize("x, want", [(0, 0), (1, 1)])
def test_sel_picks_branch(x, want):
    assert eval_circuit(sel_circuit(), {7: x}) == want


@pytest.mark.parametrize("x, a, b, want", [
    (0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (0, 1, 1, 1),
    (1, 0, 0, 0), (1, 0, 1, 1), (1, 1, 0, 0), (1, 1, 1, 1),
])
def test_mono3_truth_table(x, a, b, want):
    gates = (Gate(1, CONST1 if a else CONST0), Gate(2, CONST1 if b else CONST0),
             Gate(3, MONO3, (5, 1, 2)))
    assert eval_circuit(Circuit((5,), gates, 3), {5: x}) == want


@pytest.mark.parametrize("kind, a, b, want", [
    (OR2, 0, 0, 0), (OR2, 0, 1, 1), (AND2, 1, 0, 0), (AND2, 1, 1, 1),
])
def test_binary_gates(kind, a, b, want):
    gates = (Gate(1, INPUT, (1,)), Gate(2, INPUT, (2,)), Gate(3, kind, (1, 2)), Gate(4, ID, (3,)))
    assert eval_circuit(Circuit((1, 2), gates, 4), {1: a, 2: b}) == want


def test_constants_and_all_gate_values():
    c = sel_circuit()
    assert eval_gates(c, {7: 1}) == {1: 0, 2: 1, 3: 1}


def test_partial_assignment():
    with pytest.raises(QbfiError) as e:
        eval_circuit(sel_circuit(), {})
    assert e.value.code == "PARTIAL_ASSIGNMENT"


def test_monotone_kinds():
    assert not sel_circuit().is_monotone()
    assert sel_circuit(MONO3).is_monotone()


@pytest.mark.parametrize("gates, out", [
    ((Gate(1, "XOR", ()),), 1),
    ((Gate(1, ID, ()),), 1),
    ((Gate(1, ID, (2,)), Gate(2, CONST0)), 1),
    ((Gate(1, SEL, (9, 1, 1)),), 1),
    ((Gate(1, CONST0), Gate(1, CONST1)), 1),
    ((Gate(1, CONST0),), 2),
])
def test_bad_circuits(gates, out):
    with pytest.raises(QbfiError) as e:
        Circuit((7,), gates, out)
    assert e.value.code == "BAD_GATE"


def test_parse_sel_line():
    c = read_circuit("INPUT 3\nGATE 5 CONST0 # 5\nGATE 6 CONST1\nGATE 7 SEL 3 5 6 # 7\nOUTPUT 7\n")
    g = c.gates[-1]
    assert (g.id, g.kind, g.var, g.operands, g.provenance) == (7, SEL, 3, (5, 6), 7)
    assert c.gates[1].provenance is None
    assert [eval_circuit(c, {3: x}) for x in (0, 1)] == [0, 1]


@pytest.mark.parametrize("text", [
    "INPUT 1\nGATE 1 CONST0\n",
    "INPUT x\nGATE 1 CONST0\nOUTPUT 1\n",
    "INPUT 1\nGATE 1 NAND 1 1\nOUTPUT 1\n",
    "INPUT 1\nGATE 1 CONST0\nOUTPUT 1\nOUTPUT 1\n",
    "INPUT 1\nGATE 2 ID 1\nOUTPUT 2\n",
    "WIRE 1\n",
])
def test_read_errors(text):
    with pytest.raises(FormatError) as e:
        read_circuit(text)
    assert e.value.code == "SYNTAX"


@st.composite
def circuits(draw):
    inputs = tuple(range(1, draw(st.integers(1, 4)) + 1))
    gates = []
    for gid in range(1, draw(st.integers(1, 12)) + 1):
        prev = [g.id for g in gates]
        kinds = [CONST0, CONST1, INPUT] + ([ID, OR2, AND2, SEL, MONO3] if prev else [])
        kind = draw(st.sampled_from(kinds))
        nv, ng = {CONST0: (0, 0), CONST1: (0, 0), INPUT: (1, 0), ID: (0, 1)}.get(kind, (0, 2))
        if kind in (SEL, MONO3):
            nv = 1
        args = tuple(draw(st.sampled_from(inputs)) for _ in range(nv))
        args += tuple(draw(st.sampled_from(prev)) for _ in range(ng))
        prov = draw(st.one_of(st.none(), st.integers(1, 99)))
        gates.append(Gate(gid, kind, args, prov))
    return Circuit(inputs, tuple(gates), draw(st.sampled_from([g.id for g in gates])))


@given(circuits(), st.data())
def test_netlist_round_trip(c, data):
    back = read_circuit(write_circuit(c))
    assert back == c
    a = {v: data.draw(st.integers(0, 1)) for v in c.inputs}
    assert eval_circuit(back, a) == eval_circuit(c, a)


def test_dot_output():
    dot = to_dot(sel_circuit())
    assert dot.startswith("digraph circuit {")
    assert "in7 -> g3 [style=dashed];" in dot
    assert "g1 -> g3;" in dot and "g2 -> g3;" in dot
    assert "g3 [shape=doublecircle" in dot
