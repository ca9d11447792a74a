"""Calibrate the regular-gaussian preset and bound ratios (scratch)."""
import time

import numpy as np

import qsispace.recovery as rec
from qsispace.kernels import make_kernel
from qsispace.nodes import make_nodes
from qsispace.space import random_function

t0 = time.time()
sinc = make_kernel("sinc")
tri = make_kernel("triangle-spectrum")

for J in (16, 24):
    Z = make_nodes("lattice", J)
    al = (1.0, 1.5, 2.0, 2.5, 3.0, 3.5)
    gens = [make_kernel("gaussian", a) for a in al]
    for seed in (0, 3):
        f = random_function(sinc, Z, seed)
        rep = rec.recovery_sweep(f, gens, al, Z, seed=seed)
        print(f"J={J} seed={seed}  ({time.time()-t0:.1f}s)")
        for r in rep.rows:
            print(f"  a={r.alpha:4.1f} l2={r.l2_error:.6e} sup={r.sup_error:.6e}"
                  f" kappa={r.kappa:.2e} |a|={r.coeff_norm:.2e} {r.note[:40]}")
        l2 = [r.l2_error for r in rep.rows]
        print(f"  final/initial={l2[-1]/l2[0]:.4f} bound_ratio={rep.norm_bound_ratio:.4f}")

# per-row bound ratios for the regular preset: recompute row-wise
from qsispace.fourier import torus_norm
from qsispace.interpolation import assemble, solve
from qsispace.space import fourier_transform, sample
from qsispace.nodes import riesz_estimate

J = 24
Z = make_nodes("lattice", J)
f = random_function(sinc, Z, 0)
data = sample(f, Z)
c_x = riesz_estimate(Z).raw_constant
fhat = torus_norm(fourier_transform(f), osc=float(J))
print(f"\nper-row bound ratios J=24 (c_raw={c_x:.4f}, |fhat|={fhat:.4f}):")
for a in (1.0, 1.5, 2.0, 2.5, 3.0):
    gen = make_kernel("gaussian", a)
    it = solve(assemble(gen, Z, rhs=data))
    ih = torus_norm(fourier_transform(it.as_function()), osc=float(J))
    ratio_g = rec.kernel_constants(gen)[1]
    ratio_t = rec.kernel_constants(sinc)[1]
    bound = (1 + c_x**4 * ratio_g) * (1 + c_x**4 * ratio_t) * fhat
    print(f"  a={a:4.1f} |ihat|={ih:.4f} bound={bound:.4f} ratio={ih/bound:.4f}"
          f" C_gauss={ratio_g:.4f}")

# AI-conv preset J=24 bound ratio, counterexample-run ratios
K24 = make_nodes("kadec-alternating:0.2", 24)
spec = rec.FamilySpec("dilated-approx-identity", (1.0, 2.0, 4.0, 8.0, 16.0),
                      tri, K24, K24)
rep = rec.run_family_sweep(spec, seed=5)
print(f"\nAI-conv preset bound ratio: {rep.norm_bound_ratio:.6e}")
ce = rec.counterexample_run()
print(f"counterexample bound ratios: "
      f"{[f'{r.norm_bound_ratio:.3e}' for r in ce.runs]} "
      f"control {ce.control.norm_bound_ratio:.3e}")
print(f"sup errors control: {[f'{r.sup_error:.3e}' for r in ce.control.rows]}")
print(f"sup errors seed0: {[f'{r.sup_error:.3e}' for r in ce.runs[0].rows]}")
print(f"total {time.time()-t0:.1f}s")
