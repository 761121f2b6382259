"""The clique-no-clique formula for n=4 and its monotone interpolant.

Generates Phi_4, confirms it is false, finds a Q-Res refutation with the
saturation prover (about a minute), and tabulates the monotone circuit
against the 2-clique function.  Pass --quick to load the bundled
refutation instead of searching.
"""

import sys
import time

from qbfi import extract_circuit, gen_clique_noclique, verify_interpolant
from qbfi.circuit import eval_circuit
from qbfi.generators import CliqueLayout, clique_a_families
from qbfi.goldens import load_golden
from qbfi.interpolation import MONOTONE
from qbfi.oracle import eval_qbf, find_qres_refutation, p_assignments


def main(argv):
    f = gen_clique_noclique(4)
    lay = CliqueLayout(4)
    fam = {k: len(v) for k, v in clique_a_families(4).items()}
    print(f"Phi_4: {len(f.variables)} variables, A families {fam}, {len(f.b_clauses)} B clauses")
    print("oracle:", "TRUE" if eval_qbf(f) else "FALSE")
    t0 = time.perf_counter()
    if "--quick" in argv:
        _, t = load_golden("phi4")
    else:
        t = find_qres_refutation(f, budget=10**6)
    print(f"refutation: {len(t)} steps ({time.perf_counter() - t0:.1f} s)")
    c = extract_circuit(t, f, MONOTONE)
    print(f"monotone circuit: {len(c)} gates, kinds {sorted(c.kinds())}")
    print("oracle check:", verify_interpolant(c, f).summary())
    wrong = 0
    for a in p_assignments(f.p_vars):
        chosen = [uv for uv in lay.pairs if a[lay.p(*uv)]]
        wrong += eval_circuit(c, a) != int(bool(chosen))
    print(f"disagreements with the 2-clique function: {wrong}/64")


if __name__ == "__main__":
    main(sys.argv[1:])
