"""Floating-point LP oracle (scipy HiGHS) for the t-vector feasibility scans.

Variables t_k >= 0 for k in allowed, t_m >= 1; constraints:
  sum C(k,2) t_k = C(s,2)
  t2 + 3/4 t3 - sum_{k>4} (k-4) t_k >= s
  t2 >= 2 sum t_k - m (s-m) - 2
"""
import sys
from math import comb

from scipy.optimize import linprog


def feasible(m, allowed, t2_zero, s):
    ks = [k for k in allowed if not (t2_zero and k == 2)]
    A_eq = [[comb(k, 2) for k in ks]]
    b_eq = [comb(s, 2)]
    hz = [(1 if k == 2 else 0.75 if k == 3 else -(k - 4) if k > 4 else 0) for k in ks]
    at = [(2 - 1 if k == 2 else 2) for k in ks]
    A_ub = [[-c for c in hz], at]
    b_ub = [-s, m * (s - m) + 2]
    bounds = [(1 if k == m else 0, None) for k in ks]
    r = linprog([0] * len(ks), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    return r.status == 0


def scan(m, allowed, t2_zero, lo, hi):
    return [s for s in range(lo, hi + 1) if feasible(m, allowed, t2_zero, s)]


if __name__ == "__main__":
    print("m=3 {3}", scan(3, [3], True, 3, 200))
    print("m=4 {3,4}", scan(4, [3, 4], True, 4, 200))
    print("m=5 {3,4,5}", scan(5, [3, 4, 5], True, 6, 60))
    print("m=5 {2..5} t2 free s<=30", scan(5, [2, 3, 4, 5], False, 6, 30))
    r = scan(100, list(range(3, 101)), True, 101, 7500)
    print("m=100", r[0] if r else None, r[-1] if r else None, len(r))
