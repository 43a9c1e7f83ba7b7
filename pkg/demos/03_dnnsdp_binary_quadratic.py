# -*- coding: utf-8 -*-
"""Solving a binary-quadratic relaxation with certified residuals.

Builds the order n+1 doubly nonnegative relaxation of a random binary
quadratic instance, solves it, prints the residual certificate, and
compares the bound against exhaustive enumeration. Then adds the valid
cut inequalities (the 4-block form) and shows the bound tightening.
"""

from cadmm.dnnsdp import SolverConfig, cadmm_solve
from cadmm.problems import (brute_force_biq, build_biq, build_ext_biq,
                            family_objective, random_biq)

n, seed = 12, 4
data = random_biq(n, seed)
exact = brute_force_biq(data)
print(f"binary instance: n={n}, exact minimum by enumeration = {exact}")

print("\n== plain relaxation (3 blocks) ==")
prob = build_biq(data)
res = cadmm_solve(prob, SolverConfig(tol=1e-7))
print(f"status={res.status} iterations={res.iterations} "
      f"wall={res.wall_seconds:.2f}s")
print("residual components:")
for name, value in res.report.components().items():
    print(f"  {name:10} = {value:.2e}")
bound = family_objective(prob, res.x)
print(f"relaxation bound {bound:.6f} <= exact {exact}")

print("\n== with valid cuts (4 blocks) ==")
ext = build_ext_biq(data)
print(f"inequality rows: {ext.A_I.m}")
res_ext = cadmm_solve(ext, SolverConfig(tol=1e-6))
bound_ext = family_objective(ext, res_ext.x)
print(f"status={res_ext.status} iterations={res_ext.iterations} "
      f"eta={res_ext.report.eta:.2e}")
print(f"tightened bound {bound_ext:.6f} (plain {bound:.6f}, exact {exact})")
print(f"gap closed: {100 * (bound_ext - bound) / (exact - bound):.1f}%"
      if exact > bound else "plain relaxation already tight")
