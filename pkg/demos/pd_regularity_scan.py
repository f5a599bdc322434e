"""Quartic-root family: rod structure, corner closed forms, exclusion scans.

Run with: python3 demos/pd_regularity_scan.py
"""

import numpy as np

from todkit import curvature, pd


def main():
    params = pd.PdParams(roots=(0.2, 0.4, 2.0, 6.25))
    print(f"roots {params.roots} (product "
          f"{float(np.prod([float(r) for r in params.roots])):.1f})")
    print(f"  flat: {params.flat}, palindromic: {params.selfdual}")

    # Metric spot checks inside the (p, q) rectangle.
    p, q = 0.9, 0.3
    g = pd.pd_metric(params, p, q)
    gv = g.values()
    det = gv[0, 0] * gv[1, 1] - gv[0, 1] ** 2
    target = -float(params.quartic(p) * params.quartic(q)) / (p - q) ** 4
    print(f"\nat (p, q) = ({p}, {q}):")
    print(f"  Killing determinant {det:.9f} vs -P(p)P(q)/(p-q)^4 "
          f"= {target:.9f}")
    pack = curvature.curvature_pack(g)
    norms = curvature.invariant_norms(pack)
    print(f"  |Ric|/|Riem| = {norms['ricci'] / norms['riemann']:.2e}")

    # Corner relations in closed form: m, n must both be integers.
    reg = pd.pd_regularity(params)
    print(f"\ncorner closed forms: eps = {float(reg.eps):.6f}, "
          f"epsbar = {float(reg.epsbar):.6f}")
    print(f"  m = {float(reg.m):.6f} (= 32/3), n = {float(reg.n):.6f}")
    print(f"  regular: {reg.ok}")

    # Random scans: every case dies with a named certificate.
    print("\nscans (1000 samples each):")
    for case in ("i", "ii", "iii", "a", "b"):
        res = pd.pd_scan(case, samples=1000, seed=11)
        tally = ", ".join(f"{k}: {v}" for k, v in sorted(
            res.certificates.items()))
        print(f"  case {case}: admissible {res.admissible}  [{tally}]")

    # Palindromic root sets come with exact opposite-pair certificates.
    for case, u, v in (("a", 0.3, 0.6), ("b", -2.5, 0.7)):
        cert = pd.pd_selfdual_check(
            pd.PdParams(roots=pd.selfdual_roots(case, u, v)))
        print(f"\npalindromic case {case}: opposite rods "
              f"{cert['opposite_pair']}, pair identity residual "
              f"{cert['pair_identity_residual']:.2e}, "
              f"regular: {cert['regular']}")


if __name__ == "__main__":
    main()
