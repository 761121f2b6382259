"""Checking QBF resolution proofs and extracting interpolants and b-strategies."""

from .checker import CheckReport, check_refutation, classify_all, classify_clause
from .circuit import Circuit, Gate, eval_circuit, read_circuit, to_dot, write_circuit
from .errors import FormatError, InvariantError, QbfiError, RuleViolation
from .formats import (ProofStep, ProofTrace, parse_qdimacs, parse_trace, write_qdimacs,
                      write_trace)
from .generators import gen_clique_noclique, gen_fb
from .interpolation import (GENERAL, MONOTONE, Q_SIDE, R_SIDE, RestrictedProof, extract_circuit,
                            restrict_proof, verify_interpolant)
from .model import Lit, AnnLit, Qbf, preceq_annotated, preceq_clause
from .oracle import eval_qbf, find_qres_refutation, side_formula, verify_b_strategy
from .strategy import extract_b_strategy, restrict_proof_fb

__version__ = "0.1.0"
