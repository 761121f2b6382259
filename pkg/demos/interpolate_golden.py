"""Walk one golden refutation through check, extract, verify and restrict.

    python3 demos/interpolate_golden.py [golden-name]
"""

import sys

from qbfi import check_refutation, extract_circuit, restrict_proof, verify_interpolant
from qbfi.circuit import eval_circuit, write_circuit
from qbfi.goldens import load_golden
from qbfi.oracle import p_assignments


def main(name="chain2"):
    f, t = load_golden(name)
    print(f"{name}: {t.calculus}, {len(t)} steps, p = {f.p_vars}")
    print("check:", check_refutation(t).summary())
    c = extract_circuit(t)
    print(write_circuit(c), end="")
    print("oracle:", verify_interpolant(c, f).summary())
    for a in p_assignments(f.p_vars):
        rp = restrict_proof(t, f, c, a)
        bits = "".join(str(a[v]) for v in f.p_vars)
        print(f"  p={bits} gate={eval_circuit(c, a)} -> {rp.side} refutation "
              f"in {len(rp.trace)} steps: {rp.check().summary()}")


if __name__ == "__main__":
    main(*sys.argv[1:])
