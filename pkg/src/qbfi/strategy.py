"""Strategies for the fresh universal ``b`` of a b-transformed formula.

A refutation of the transformed formula yields a circuit ``sigma(p)`` that
tells the universal player how to set ``b``; every winning ``sigma`` is an
interpolant of the original formula.  Extraction reuses the interpolation
gate table, with resolution on ``b`` wired to the first antecedent.
"""

from .errors import QbfiError
from .interpolation import GENERAL, extract_circuit, restrict_proof
from .oracle import DEFAULT_P_CAP, verify_b_strategy


def _require_b(f):
    if f.partition is None or f.b_var is None:
        raise QbfiError("B_NOT_MARKED", "formula has no b variable")


def extract_b_strategy(trace, formula=None, mode=GENERAL):
    f = formula if formula is not None else trace.formula
    _require_b(f)
    return extract_circuit(trace, f, mode)


def restrict_proof_fb(trace, formula, circuit, a):
    """Restricted one-sided refutation; it may end with a reduction of ``b``."""
    f = formula if formula is not None else trace.formula
    _require_b(f)
    return restrict_proof(trace, f, circuit, a)


__all__ = ["extract_b_strategy", "restrict_proof_fb", "verify_b_strategy", "DEFAULT_P_CAP"]
