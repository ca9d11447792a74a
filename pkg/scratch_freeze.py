"""Final freeze measurements for tests/test_recovery.py (scratch)."""
import math
import time

import numpy as np

import qsispace.recovery as rec
from qsispace.errors import DomainError, SolvabilityError, UsageError
from qsispace.fourier import TorusGrid, torus_rule
from qsispace.kernels import convolve, dilated, make_kernel
from qsispace.nodes import make_nodes, exponential_synthesis
from qsispace.space import QsisFunction, random_function, sample

t0 = time.time()


def stamp(msg):
    print(f"[{time.time() - t0:7.2f}s] {msg}")


sinc = make_kernel("sinc")
tri = make_kernel("triangle-spectrum")
g1 = make_kernel("gaussian", 1.0)
p2 = make_kernel("poisson", 2.0)

# 1. flattener contraction across seeds
xi, w = torus_rule(12.0)
worst = 0.0
for k in (g1, p2, tri):
    for s in range(10):
        rng = np.random.default_rng(s)
        vals = rng.standard_normal(xi.size) + 1j * rng.standard_normal(xi.size)
        out = rec.apply_flattener(k, vals, xi)
        r = math.sqrt(float(np.sum(w * np.abs(out) ** 2))) / \
            math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))
        worst = max(worst, r)
stamp(f"flattener worst contraction ratio over 30 runs: {worst:.12f}")

# sinc constants
d, r, s0 = rec.kernel_constants(sinc)
stamp(f"sinc constants delta={d!r} ratio={r!r} sup0={s0!r}")
d, r, s0 = rec.kernel_constants(tri)
stamp(f"triangle constants delta={d!r} ratio={r!r} sup0={s0!r}")
# gaussian delta ratio at 0
for a in (1.0, 2.0):
    g = make_kernel("gaussian", a)
    d = rec.kernel_constants(g)[0]
    ratio0 = d / float(g.spectrum(np.array([0.0]))[0])
    stamp(f"gaussian({a}) delta/spec(0) = {ratio0:.15e} vs "
          f"exp(-a^2 pi^2/4) = {math.exp(-a * a * math.pi**2 / 4):.15e}")

try:
    rec.kernel_constants(make_kernel("hardy-multiquadric"))
    stamp("hardy: NO ERROR (!!)")
except DomainError as e:
    stamp(f"hardy DomainError: {str(e)[:60]}")

# 2. T-sums with 8 digits
rng = np.random.default_rng(0)
vals = rng.standard_normal(xi.size) + 1j * rng.standard_normal(xi.size)
n_in = math.sqrt(float(np.sum(w * np.abs(vals) ** 2)))
for k in (g1, p2, tri):
    delta, ratio, sup0 = rec.kernel_constants(k)
    total = 0.0
    for kk in range(-16, 17):
        if kk == 0:
            continue
        o = rec.apply_cell_multiplier(k, kk, vals, xi)
        total += math.sqrt(float(np.sum(w * np.abs(o) ** 2)))
    o0 = rec.apply_cell_multiplier(k, 0, vals, xi)
    r0 = math.sqrt(float(np.sum(w * np.abs(o0) ** 2))) / n_in
    stamp(f"{k.label}: T-sum/norm={total / n_in:.8f} C={ratio:.8f} "
          f"k0-ratio={r0:.8f} sup0/delta={sup0 / delta:.8f}")

# 3. alias norms, 6 digits
X = make_nodes("kadec-alternating:0.2", 6)
Y = make_nodes("sqrt2-swap", 6)
for k in (tri, g1, p2):
    rp = rec.alias_operator_norm(k, X, Y)
    rp2 = rec.alias_operator_norm(k, X, X)
    stamp(f"{k.label}: XY norm={rp.measured:.6f} bound={rp.bound:.6f} "
          f"XX norm={rp2.measured:.6f} bound={rp2.bound:.6f}")
rp = rec.alias_operator_norm(sinc, X, Y)
stamp(f"sinc alias norm: {rp.measured!r} within={rp.within_bound}")

# conditioning propagation: near-collision outer window
try:
    from qsispace.nodes import NodeSet
    bad = NodeSet(np.array([-1.0, 0.0, 1e-9, 1.0]))
    stamp(f"built bad NodeSet directly: {bad.x}")
except Exception as e:
    stamp(f"NodeSet direct build failed: {type(e).__name__}: {str(e)[:70]}")

# 4. mismatch with alpha up to 128
XX = make_nodes("kadec-alternating:0.2", 8)
alphas = (1.0, 4.0, 16.0, 128.0)
gens = [convolve(dilated(make_kernel("gaussian-ai"), a), tri) for a in alphas]
t1 = time.time()
rep = rec.check_mismatch_series(tri, gens, alphas, XX)
stamp(f"mismatch 128: depth={rep.depth} tail={rep.tail_bound!r} "
      f"cond={rep.expansion_condition:.6e} ({time.time() - t1:.1f}s)")
stamp(f"  target maxima: {[f'{v:.8e}' for v in rep.target_maxima]}")
stamp(f"  family maxima: {[f'{v:.8e}' for v in rep.family_maxima]}")
stamp(f"  verdicts: target={rep.target_verdict} family={rep.family_verdict}")

# 5. finite cell: poisson alphas (1,2,4,16)
al = (1.0, 2.0, 4.0, 16.0)
bases = [make_kernel("poisson", a) for a in al]
fc = rec.check_finite_cell(bases, tri, al)
stamp(f"poisson fc sups: {[f'{v:.12e}' for v in fc.finite_cell_sups]}")
stamp(f"  closed:        "
      f"{[f'{3 + math.pi**2 / a**2:.12e}' for a in al]}")
stamp(f"  offcenter: {[f'{v:.12e}' for v in fc.offcenter_stats]}")
stamp(f"  ratio consts: {[f'{v:.3e}' for v in fc.ratio_constants]}")
stamp(f"  flatten: {[f'{v:.6e}' for v in fc.flattening_distances]}")
stamp(f"  cell_count={fc.cell_count} limit={fc.limit_value} "
      f"limit_verdict={fc.limit_verdict} flatten_verdict={fc.flattening_verdict}")

al2 = (1.0, 4.0, 16.0, 64.0)
ai_bases = [dilated(make_kernel("gaussian-ai"), a) for a in al2]
fc2 = rec.check_finite_cell(ai_bases, tri, al2)
closed = [(math.exp(math.pi**2 / (4 * a * a)) - 1)
          + 2 * (1 - math.exp(-2 * math.pi**2 / (a * a))) for a in al2]
stamp(f"AI fc dists:  {[f'{v:.10e}' for v in fc2.flattening_distances]}")
stamp(f"   closed:    {[f'{v:.10e}' for v in closed]}")
stamp(f"   monotone==general: "
      f"{np.allclose(fc2.flattening_distances, fc2.monotone_distances, rtol=1e-13)}")
stamp(f"   sups: {[f'{v:.8f}' for v in fc2.finite_cell_sups]} "
      f"limit_verdict={fc2.limit_verdict} flatten_verdict={fc2.flattening_verdict}")
try:
    rec.check_finite_cell(bases, g1, al)
    stamp("finite-cell gaussian target: NO ERROR (!!)")
except UsageError as e:
    stamp(f"finite-cell gaussian target UsageError: {str(e)[:60]}")

# 6. regular interpolator alphas (1,2,4)
al3 = (1.0, 2.0, 4.0)
gg = [make_kernel("gaussian", a) for a in al3]
rr = rec.check_regular_interpolator(gg, al3)
frm = [math.exp(-a * a * math.pi**2 * (1 - 0.81) / 4) for a in al3]
stamp(f"gaussian regular maxima: {[f'{v:.12e}' for v in rr.ratio_maxima]}")
stamp(f"  formula:               {[f'{v:.12e}' for v in frm]}")
stamp(f"  verdict={rr.verdict}")
rs = rec.check_regular_interpolator([sinc, sinc, sinc], (1.0, 2.0, 3.0))
stamp(f"sinc regular maxima: {rs.ratio_maxima} verdict={rs.verdict}")

# 7. family spec fast path dual route
fam = rec.FamilySpec("dilated-approx-identity", (1.0, 2.0, 4.0),
                     make_kernel("gaussian", 1.0),
                     make_nodes("lattice", 6), make_nodes("lattice", 6))
gen_fast = fam.generator(2.0)
gen_slow = convolve(dilated(make_kernel("gaussian-ai"), 2.0),
                    make_kernel("gaussian", 1.0))
xs = np.linspace(-3.0, 3.0, 41)
gap_space = np.max(np.abs(gen_fast.space(xs) - gen_slow.space(xs)))
xis = np.linspace(-2.5, 2.5, 41)
gap_spec = np.max(np.abs(gen_fast.spectrum(xis) - gen_slow.spectrum(xis)))
stamp(f"fast-path gaps: space={gap_space:.3e} spectrum={gap_spec:.3e} "
      f"fast name={gen_fast.name}")

# 8. sweeps: re-pin preset rows at 10 digits with fixed code
K24 = make_nodes("kadec-alternating:0.2", 24)
spec = rec.FamilySpec("dilated-approx-identity", (1.0, 2.0, 4.0, 8.0, 16.0),
                      tri, K24, K24)
t1 = time.time()
rep = rec.run_family_sweep(spec, seed=5)
stamp(f"AI preset ({time.time() - t1:.1f}s) bound_ratio={rep.norm_bound_ratio:.6e}")
for r in rep.rows:
    stamp(f"  a={r.alpha:5.1f} l2={r.l2_error:.10e} sup={r.sup_error:.10e} "
          f"kappa={r.kappa:.6e}")
stamp(f"  final/initial={rep.final_over_initial:.8f} "
      f"nonincr={rep.errors_nonincreasing}")

Z24 = make_nodes("lattice", 24)
spec2 = rec.FamilySpec("regular-gaussian", (1.0, 1.5, 2.0, 2.5), sinc, Z24, Z24)
t1 = time.time()
rep2 = rec.run_family_sweep(spec2, seed=0)
stamp(f"regular preset ({time.time() - t1:.1f}s) "
      f"bound_ratio={rep2.norm_bound_ratio:.6e}")
for r in rep2.rows:
    stamp(f"  a={r.alpha:4.1f} l2={r.l2_error:.10e} sup={r.sup_error:.10e} "
          f"kappa={r.kappa:.6e}")
stamp(f"  final/initial={rep2.final_over_initial:.8f} "
      f"nonincr={rep2.errors_nonincreasing}")

# constant family
rep0 = rec.recovery_sweep(random_function(tri, K24, 7), [tri, tri, tri],
                          (1.0, 2.0, 3.0), K24)
stamp(f"constant-family max l2: {max(r.l2_error for r in rep0.rows):.3e}")

# NaN row: singular third member
Z8 = make_nodes("lattice", 8)
f8 = random_function(g1, Z8, 2)
repn = rec.recovery_sweep(f8, [g1, make_kernel("gaussian", 1.5),
                               make_kernel("gaussian", 1e9)],
                          (1.0, 2.0, 3.0), Z8)
last = repn.rows[-1]
stamp(f"NaN row: l2={last.l2_error!r} note={last.note[:60]!r}")
stamp(f"  nonincr={repn.errors_nonincreasing} "
      f"final/init={repn.final_over_initial!r} "
      f"bound_ratio={repn.norm_bound_ratio:.3e}")

# 9. screening assembled
t1 = time.time()
fam = rec.FamilySpec("dilated-approx-identity", (1.0, 4.0, 16.0, 128.0),
                     tri, XX, XX)
cr = rec.screen_family(fam)
stamp(f"screen AI-conv ({time.time() - t1:.1f}s): verdicts={cr.verdicts} "
      f"screened={cr.screened}")
stamp(f"  deltas={[f'{v:.4e}' for v in cr.deltas]} "
      f"bound={cr.family_ratio_bound:.4e} regular={cr.regular}")

t1 = time.time()
fam2 = rec.FamilySpec("multiquadric-cardinal", (1.0, 2.0, 4.0), sinc,
                      make_nodes("lattice", 6), make_nodes("lattice", 6))
cr2 = rec.screen_family(fam2)
stamp(f"screen multiquadric ({time.time() - t1:.1f}s): "
      f"verdicts={cr2.verdicts} screened={cr2.screened} "
      f"mismatch_none={cr2.mismatch is None}")

t1 = time.time()
fam3 = rec.FamilySpec("regular-gaussian", (1.0, 2.0, 4.0), sinc,
                      make_nodes("lattice", 8), make_nodes("lattice", 8))
cr3 = rec.screen_family(fam3)
stamp(f"screen regular-gaussian ({time.time() - t1:.1f}s): "
      f"verdicts={cr3.verdicts} screened={cr3.screened}")

# 10. counterexample (re-pin, verify against fixed verdicts)
t1 = time.time()
ce = rec.counterexample_run()
stamp(f"counterexample ({time.time() - t1:.1f}s): "
      f"floors={[f'{v:.8f}' for v in ce.floor_ratios]}")
stamp(f"  control final/init={ce.control.final_over_initial:.10f} "
      f"floor={ce.floor_verdict} ctrl={ce.control_verdict}")
sup_ctrl = [r.sup_error for r in ce.control.rows]
stamp(f"  control sups decreasing: "
      f"{all(b < a for a, b in zip(sup_ctrl, sup_ctrl[1:]))}")
stamp(f"  seed0 l2 first={ce.runs[0].rows[0].l2_error:.8e} "
      f"last={ce.runs[0].rows[-1].l2_error:.8e}")

# direct node-residual check on the counterexample geometry
from qsispace.interpolation import interpolate
Xs = make_nodes("sqrt2-swap", 24)
swap = int(np.argmin(np.abs(Xs.x - math.sqrt(2.0))))
c = np.zeros(len(Xs))
c[swap] = 1.0
fswap = QsisFunction(g1, Xs, c)
member = rec.ai_gaussian_convolution(16.0)
Z24b = make_nodes("lattice", 24)
it = interpolate(member, Z24b, sample(fswap, Z24b))
node_gap = np.max(np.abs(it.as_function()(Z24b.x) - sample(fswap, Z24b)))
mid = np.max(np.abs(it.as_function()(np.array([math.sqrt(2.0)]))
                    - fswap(np.array([math.sqrt(2.0)]))))
stamp(f"counterexample member: node residual={node_gap:.3e} "
      f"gap at sqrt2={mid:.5f} kappa={it.kappa:.3e}")

# 11. half-shift with fixed verdict
hs = rec.half_shift_conditioning()
stamp(f"half-shift kappas: {[f'{v:.8f}' for v in hs.kappas]}")
stamp(f"  control: {[f'{v:.10f}' for v in hs.control_kappas]}")
stamp(f"  limit={hs.control_limit:.12f} growth={hs.growth_verdict} "
      f"ctrl={hs.control_verdict}")
n = np.arange(-40, 41)
limit_oracle = float(np.sum(np.exp(-n**2)) / np.sum((-1.0)**n * np.exp(-n**2)))
stamp(f"  limit oracle: {limit_oracle:.12f}")

# 12. fourier side
Z6 = make_nodes("lattice", 6)
c = np.zeros(13)
c[8] = 1.0
f = QsisFunction(g1, Z6, c)
stamp(f"fourier-side translate: {rec.fourier_side_sample_check(f, Z6):.6e}")
ftri = random_function(tri, make_nodes("kadec-alternating:0.2", 6), 11)
stamp(f"fourier-side tri random: {rec.fourier_side_sample_check(ftri, Z6):.6e}")
fs = random_function(sinc, Z6, 4)
it2 = interpolate(g1, Z6, sample(fs, Z6))
stamp(f"fourier-side interpolant: {rec.fourier_side_sample_check(it2, Z6):.6e}")

stamp("done")
