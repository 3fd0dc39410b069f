"""
The bound, term by term
=======================

For one constraint system, compute the exact deviation from I(n)/q^m, the
type I and type II character sums for each nontrivial character, and the
rank-weighted quantities S1, S2 that control them.  The right-hand side
carries unknown constants, so the ratio deviation/RHS is data rather than
a pass/fail test.
"""

from coeffsieve import CoeffPoly, ConstraintSystem, make_field
from coeffsieve.report import csv_text, full_report

F = make_field(5)
R = CoeffPoly(F, 4, {(2, 0, 0, 0): 1, (0, 1, 1, 0): 1})
sys = ConstraintSystem(F, 4, (R,))

rep = full_report(sys, [0.25, 0.5, 1.0], sys_id="q5_n4_a0^2+a1a2")
print(rep.exact["I_n"], rep.exact["expected"], rep.exact["deviation"])

for t in rep.tuples:
    sums = ", ".join(f"(u,v)=({p['u']},{p['v']}): S1={p['sigma1']:.1f} S2={p['sigma2']:.1f}"
                     for p in t["params"])
    print(f"{t['psi']:>8s} |sum Lambda psi| = {t['vaughan_lhs']:7.2f}  {sums}")

for r in rep.rhs:
    print(f"c = {r['c']}: RHS = {r['rhs']:.4g} at (u,v) = {tuple(r['argmin'])}, ratio = {r['ratio']:.3g}")

print(csv_text([rep]))
