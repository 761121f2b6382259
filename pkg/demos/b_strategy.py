"""Strategy for the fresh universal b on a b-transformed formula.

Builds F^b from a small partitioned formula, refutes it, extracts the
circuit that tells the universal player how to set b, and shows that
circuit is an interpolant of the original formula.
"""

from qbfi import extract_b_strategy, find_qres_refutation, gen_fb, verify_b_strategy
from qbfi.circuit import eval_circuit, write_circuit
from qbfi.formats import write_qdimacs
from qbfi.goldens import load_golden
from qbfi.oracle import eval_qbf, p_assignments
from qbfi.strategy import restrict_proof_fb


def main():
    f, _ = load_golden("chain2")
    fb = gen_fb(f)
    print(write_qdimacs(fb), end="")
    print("F false:", not eval_qbf(f), " F^b false:", not eval_qbf(fb))
    t = find_qres_refutation(fb)
    s = extract_b_strategy(t, fb)
    print(write_circuit(s), end="")
    print("strategy check:", verify_b_strategy(s, fb).summary())
    for a in p_assignments(fb.p_vars):
        rp = restrict_proof_fb(t, fb, s, a)
        bits = "".join(str(a[v]) for v in fb.p_vars)
        print(f"  p={bits} b={eval_circuit(s, a)} {rp.side}: {rp.check().summary()}")


if __name__ == "__main__":
    main()
