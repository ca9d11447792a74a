"""Calibration run for the recovery module (scratch, not shipped)."""
import math
import time

import numpy as np

import qsispace.recovery as rec
from qsispace.fourier import LineGrid, TorusGrid, torus_rule
from qsispace.kernels import convolve, dilated, make_kernel
from qsispace.nodes import make_nodes, exponential_synthesis
from qsispace.space import QsisFunction, random_function

t0 = time.time()


def stamp(msg):
    print(f"[{time.time() - t0:7.2f}s] {msg}")


# --- flattener ---------------------------------------------------------
sinc = make_kernel("sinc")
tri = make_kernel("triangle-spectrum")
g1 = make_kernel("gaussian", 1.0)
p2 = make_kernel("poisson", 2.0)

xi, w = torus_rule(12.0)
rng = np.random.default_rng(0)
vals = rng.standard_normal(xi.size) + 1j * rng.standard_normal(xi.size)
out = rec.apply_flattener(sinc, vals, xi)
stamp(f"sinc flattener max dev from identity: {np.max(np.abs(out - vals)):.3e}")

for k in (g1, p2, tri):
    out = rec.apply_flattener(k, vals, xi)
    n_in = math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))
    n_out = math.sqrt(float(np.sum(w * np.abs(out) ** 2)))
    stamp(f"{k.label} flattener norm ratio: {n_out / n_in:.6f}")

# --- cell multiplier ---------------------------------------------------
out = rec.apply_cell_multiplier(tri, 2, vals, xi)
stamp(f"triangle cell-2 multiplier max: {np.max(np.abs(out)):.3e}")
for k in (g1, p2, tri):
    delta, ratio, sup0 = rec.kernel_constants(k)
    total = 0.0
    for kk in range(-16, 17):
        if kk == 0:
            continue
        o = rec.apply_cell_multiplier(k, kk, vals, xi)
        total += math.sqrt(float(np.sum(w * np.abs(o) ** 2)))
    n_in = math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))
    stamp(f"{k.label}: T-sum/norm = {total / n_in:.6f} vs C = {ratio:.6f}")

# --- alias dual route --------------------------------------------------
X = make_nodes("kadec-alternating:0.2", 6)
Y = make_nodes("sqrt2-swap", 6)
grid = TorusGrid(256)
for k in (tri, g1, p2):
    c = rng.standard_normal(len(X))
    c /= np.linalg.norm(c)
    via_fn = rec.apply_alias(k, c, X, Y, grid)
    mat = rec.alias_matrix(k, X, Y)
    via_mat = exponential_synthesis(mat @ c, Y)(grid.nodes)
    stamp(f"{k.label}: alias dual-route gap {np.max(np.abs(via_fn - via_mat)):.3e}")

mat = rec.alias_matrix(sinc, X, Y)
stamp(f"sinc alias matrix max: {np.max(np.abs(mat)):.3e}")
for cells in ([2], [3], [2, 5]):
    m2 = rec.alias_matrix(tri, X, Y, cells=cells)
    stamp(f"triangle alias cells={cells} max: {np.max(np.abs(m2)):.3e}")

for k in (tri, g1, p2):
    repn = rec.alias_operator_norm(k, X, Y)
    stamp(f"{k.label} X->Y alias norm {repn.measured:.4f} vs bound {repn.bound:.4f}")
    repn = rec.alias_operator_norm(k, X, X)
    stamp(f"{k.label} X->X alias norm {repn.measured:.4f} vs bound {repn.bound:.4f}")

# --- mismatch series ---------------------------------------------------
stamp("mismatch: triangle target, AI-convolution family, kadec(0.2) J=8")
XX = make_nodes("kadec-alternating:0.2", 8)
alphas = (1.0, 4.0, 16.0, 64.0)
gens = [convolve(dilated(make_kernel("gaussian-ai"), a), tri) for a in alphas]
rep = rec.check_mismatch_series(tri, gens, alphas, XX)
stamp(f"  depth={rep.depth} tail={rep.tail_bound:.3e} cond={rep.expansion_condition:.3e}")
stamp(f"  target maxima: {[f'{v:.4e}' for v in rep.target_maxima]}")
stamp(f"  family maxima: {[f'{v:.4e}' for v in rep.family_maxima]}")
stamp(f"  verdicts: target={rep.target_verdict} family={rep.family_verdict}")

stamp("mismatch: sinc target (vacuous target series), regular gaussians")
gg = [make_kernel("gaussian", a) for a in (1.0, 2.0, 4.0)]
Z8 = make_nodes("lattice", 8)
rep2 = rec.check_mismatch_series(sinc, gg, (1.0, 2.0, 4.0), Z8, depth=4)
stamp(f"  target maxima: {[f'{v:.4e}' for v in rep2.target_maxima]}")
stamp(f"  family maxima: {[f'{v:.4e}' for v in rep2.family_maxima]}")

stamp("mismatch: constant family (triangle itself)")
rep3 = rec.check_mismatch_series(tri, [tri, tri, tri], (1.0, 2.0, 3.0), XX)
stamp(f"  target maxima: {[f'{v:.3e}' for v in rep3.target_maxima]}")
stamp(f"  family maxima: {[f'{v:.3e}' for v in rep3.family_maxima]}")

# --- finite cell -------------------------------------------------------
alphas = (1.0, 4.0, 16.0, 64.0)
bases = [make_kernel("poisson", a) for a in alphas]
fc = rec.check_finite_cell(bases, tri, alphas)
stamp(f"poisson finite-cell sups: {[f'{v:.8f}' for v in fc.finite_cell_sups]}")
stamp(f"  closed form 3+pi^2/a^2:  {[f'{3 + math.pi**2 / a**2:.8f}' for a in alphas]}")
stamp(f"  ratio constants: {[f'{v:.3e}' for v in fc.ratio_constants]}")
stamp(f"  flatten dists: {[f'{v:.4e}' for v in fc.flattening_distances]}")
stamp(f"  verdicts: limit={fc.limit_verdict} flatten={fc.flattening_verdict}")

ai_bases = [dilated(make_kernel("gaussian-ai"), a) for a in alphas]
fc2 = rec.check_finite_cell(ai_bases, tri, alphas)
stamp(f"AI finite-cell dists: {[f'{v:.6e}' for v in fc2.flattening_distances]}")
closed = [(math.exp(math.pi**2 / (4 * a * a)) - 1)
          + 2 * (1 - math.exp(-2 * math.pi**2 / (a * a))) for a in alphas]
stamp(f"  closed form:        {[f'{v:.6e}' for v in closed]}")
stamp(f"  monotone == general: {np.allclose(fc2.flattening_distances, fc2.monotone_distances)}")

# --- regular interpolator ---------------------------------------------
alphas = (1.0, 2.0, 4.0, 8.0)
gg = [make_kernel("gaussian", a) for a in alphas]
rr = rec.check_regular_interpolator(gg, alphas)
stamp(f"gaussian ratio maxima: {[f'{v:.6e}' for v in rr.ratio_maxima]}")
frm = [math.exp(-a * a * math.pi**2 * (1 - 0.81) / 4) for a in alphas]
stamp(f"  formula edge 0.9pi:  {[f'{v:.6e}' for v in frm]}")
stamp(f"  verdict: {rr.verdict}")
rs = rec.check_regular_interpolator([sinc, sinc, sinc], (1.0, 2.0, 3.0))
stamp(f"sinc ratios: {rs.ratio_maxima} verdict={rs.verdict}")

# --- sweeps ------------------------------------------------------------
stamp("sweep: regular gaussian on sinc, lattice")
for J, al in ((12, (1.0, 1.5, 2.0, 2.5, 3.0)), (8, (1.0, 2.0, 4.0, 8.0))):
    Z = make_nodes("lattice", J)
    spec = rec.FamilySpec("regular-gaussian", al, sinc, Z, Z)
    t1 = time.time()
    rep = rec.run_family_sweep(spec, seed=3)
    for r in rep.rows:
        stamp(f"  J={J} a={r.alpha:5.2f} l2={r.l2_error:.6e} sup={r.sup_error:.6e} "
              f"kappa={r.kappa:.3e} |a|={r.coeff_norm:.3e} {r.note[:60]}")
    stamp(f"  bound ratio {rep.norm_bound_ratio:.4f}  ({time.time() - t1:.2f}s)")

stamp("sweep: AI-convolution on triangle, kadec(0.2) J=24")
K24 = make_nodes("kadec-alternating:0.2", 24)
spec = rec.FamilySpec("dilated-approx-identity", (1.0, 2.0, 4.0, 8.0, 16.0),
                      tri, K24, K24)
t1 = time.time()
rep = rec.run_family_sweep(spec, seed=5)
for r in rep.rows:
    stamp(f"  a={r.alpha:5.2f} l2={r.l2_error:.6e} sup={r.sup_error:.6e} "
          f"kappa={r.kappa:.3e} |a|={r.coeff_norm:.3e} {r.note[:60]}")
stamp(f"  bound ratio {rep.norm_bound_ratio:.4f}  ({time.time() - t1:.2f}s)")
stamp(f"  final/initial = {rep.final_over_initial:.5f} nonincr={rep.errors_nonincreasing}")

stamp("sweep: constant family (triangle) same geometry")
spec = rec.FamilySpec("dilated-approx-identity", (1.0, 2.0, 3.0), tri, K24, K24)
rep0 = rec.recovery_sweep(random_function(tri, K24, 7), [tri, tri, tri],
                          (1.0, 2.0, 3.0), K24)
for r in rep0.rows:
    stamp(f"  a={r.alpha:5.2f} l2={r.l2_error:.3e} kappa={r.kappa:.3e}")

# --- counterexample ----------------------------------------------------
stamp("counterexample run")
t1 = time.time()
ce = rec.counterexample_run()
for i, run in enumerate(ce.runs):
    errs = [f"{r.l2_error:.4e}" for r in run.rows]
    stamp(f"  seed {run.seed}: {errs} ratio={run.final_over_initial:.4f}")
ctrl = [f"{r.l2_error:.4e}" for r in ce.control.rows]
stamp(f"  control: {ctrl} ratio={ce.control.final_over_initial:.6f}")
stamp(f"  floor={ce.floor_verdict} control={ce.control_verdict} ({time.time() - t1:.2f}s)")

# --- half shift --------------------------------------------------------
hs = rec.half_shift_conditioning()
stamp(f"half-shift kappas: {[f'{v:.5g}' for v in hs.kappas]}")
stamp(f"control kappas: {[f'{v:.6f}' for v in hs.control_kappas]}")
stamp(f"control limit: {hs.control_limit:.6f} growth={hs.growth_verdict} "
      f"ctrl={hs.control_verdict}")

# --- fourier side ------------------------------------------------------
Z6 = make_nodes("lattice", 6)
c = np.zeros(13)
c[6 + 2] = 1.0
f = QsisFunction(g1, Z6, c)
stamp(f"fourier-side single translate: {rec.fourier_side_sample_check(f, Z6):.3e}")
ftri = random_function(tri, make_nodes("kadec-alternating:0.2", 6), 11)
stamp(f"fourier-side triangle random: {rec.fourier_side_sample_check(ftri, Z6):.3e}")

from qsispace.interpolation import assemble, solve
from qsispace.space import sample
fs = random_function(sinc, Z6, 4)
it = solve(assemble(g1, Z6, rhs=sample(fs, Z6)))
gap = rec.fourier_side_sample_check(it, Z6)
stamp(f"fourier-side interpolant identity: {gap:.3e}")

stamp("done")
