"""Cardinal interpolators: generators renormalized to Kronecker data.

Dividing a generator's spectrum by its own lattice periodization produces
the cardinal spectrum

    Lhat(xi) = (1/sqrt(2 pi)) * phihat(xi) / sum_{|k| <= K} phihat(xi + 2 pi k),

whose inverse transform L equals 1 at the origin and 0 at every other
integer.  Interpolating lattice samples then needs no linear solve at all:
the interpolant is the plain weighted sum ``sum_j f(j) L(x - j)``.  The
ratio is scale-free — rescaling or smoothing the generator cancels between
numerator and denominator — so very different-looking generators can share
one cardinal limit even while the generators themselves stay far apart.

Evaluation routes.  The transform of the cardinal spectrum is computed by
certified quadrature whenever the spectrum's tail can be truncated at a
practical cutoff (bandlimited and fast-decaying generators).  Spectra with
only polynomial tails (the double-exponential family decays like 1/xi^2)
would need cutoffs near 1e9 for usual tolerances, so for generators that
carry a closed-form periodization and a closed space form the evaluator
switches to the reciprocal-symbol series

    L(x) = sum_n r_n phi(x - n),
    r_n  = Fourier coefficients of 1/(sqrt(2 pi) sigma(xi)),

which is an exact identity (the coefficients decay at the symbol's
analyticity rate) rather than a numerical shortcut.  Either way the result
is tolerance-certified, and no interpolation between cached values is ever
used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AccuracyError, DegeneracyError, UsageError
from .fourier import (
    SQRT_TWO_PI,
    TWO_PI,
    LineGrid,
    TorusGrid,
    inverse_ft,
    l2_norm_line,
    periodize,
)
from .kernels import (
    Kernel,
    RegularityReport,
    SpectralEnvelope,
    regularity_report,
)

__all__ = [
    "CardinalFunction",
    "CardinalSweepPoint",
    "cardinal_spectrum",
    "make_cardinal",
    "cardinal_eval",
    "cardinal_regularity",
    "lattice_interpolant_via_cardinal",
    "cardinal_convergence_sweep",
    "space_table_csv",
    "spectrum_table_csv",
]

_PI = math.pi
# Denominators smaller than this cannot be certified positive in doubles.
_DENOMINATOR_FLOOR = 1e-14
# Largest quadrature cutoff (as a multiple of pi) the direct route accepts.
_MAX_CUTOFF_PI = 512
# Window around lattice points where a growing generator's spectrum ratio is
# replaced by its (removable-singularity) limit.
_ORIGIN_PAD = 1e-6
# Reciprocal-symbol series: coefficients are computed for |n| <= this and the
# outer quarter must have decayed to numerical zero.
_SERIES_HALF_WIDTH = 64


def _fold(xi: np.ndarray) -> np.ndarray:
    """Reduce frequencies to the fundamental cell (periodization argument)."""
    return xi - TWO_PI * np.round(xi / TWO_PI)


def cardinal_spectrum(kernel: Kernel, xi, depth: int):
    """Truncated cardinal spectrum, literally as defined.

    Returns ``(1/sqrt(2 pi)) phihat(xi) / sum_{|k| <= depth} phihat(xi + 2
    pi k)``; scalar in, scalar out.  A denominator below 1e-14 in magnitude
    cannot be certified away from zero and raises a degeneracy error.  Note
    the truncation window is centered at ``k = 0``: for frequencies outside
    the first few cells a small ``depth`` misses the cells that carry the
    periodization's mass (use :class:`CardinalFunction`, which folds the
    denominator argument onto the fundamental cell, for wide-band work).
    """
    depth = int(depth)
    if depth < 0:
        raise UsageError("cardinal_spectrum needs depth >= 0")
    scalar = np.isscalar(xi) or (isinstance(xi, np.ndarray) and xi.ndim == 0)
    xs = np.atleast_1d(np.asarray(xi, dtype=float))
    numer = kernel.spectrum(xs)
    denom = periodize(kernel.spectrum, xs, depth)
    bad = np.abs(denom) < _DENOMINATOR_FLOOR
    if np.any(bad):
        where = xs[bad][0]
        raise DegeneracyError(
            f"{kernel.label}: periodized denominator {denom[bad][0]:.3e} at "
            f"xi={where:.6g} is below the positivity floor "
            f"{_DENOMINATOR_FLOOR:g} (depth={depth})")
    vals = numer / (SQRT_TWO_PI * denom)
    return float(vals[0]) if scalar else vals


@dataclass(frozen=True)
class CardinalFunction:
    """A generator's cardinal interpolator on the integer lattice.

    Attributes
    ----------
    kernel : Kernel
        The base generator.
    depth : int or None
        Periodization truncation; ``None`` means the generator's exact
        closed-form periodization is used.
    torus : TorusGrid
        Grid on the fundamental cell carrying the denominator values.
    sigma : ndarray
        Periodization values on the torus nodes (``nan`` at a growing
        generator's singular origin node).
    line_grid : LineGrid
        Grid for the cached space-side table (:attr:`space_values`).
    """

    kernel: Kernel
    depth: Optional[int]
    torus: TorusGrid
    sigma: np.ndarray
    line_grid: LineGrid

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float).copy()
        s.flags.writeable = False
        object.__setattr__(self, "sigma", s)

    # -- denominator --------------------------------------------------------

    @property
    def sigma_floor(self) -> float:
        """Smallest denominator magnitude seen on the torus grid."""
        finite = self.sigma[np.isfinite(self.sigma)]
        return float(np.min(np.abs(finite)))

    def _denominator(self, folded: np.ndarray) -> np.ndarray:
        if self.depth is None:
            return np.asarray(self.kernel.symbol(folded), dtype=float)
        return periodize(self.kernel.spectrum, folded, self.depth)

    # -- spectrum ------------------------------------------------------------

    def spectrum(self, xi):
        """Cardinal spectrum values; scalar in, scalar out.

        The denominator argument is folded onto the fundamental cell, so
        values are correct at every frequency, not only in the first cells.
        For growing generators (spectrum singular at the origin) the ratio's
        removable limits are used near lattice points: 1/sqrt(2 pi) at the
        origin, 0 at nonzero multiples of 2 pi.
        """
        scalar = (np.isscalar(xi)
                  or (isinstance(xi, np.ndarray) and xi.ndim == 0))
        xs = np.atleast_1d(np.asarray(xi, dtype=float))
        folded = _fold(xs)
        out = np.empty(xs.size)
        if self.kernel.singular_at_origin:
            near = np.abs(folded) <= _ORIGIN_PAD
            at_origin = near & (np.abs(xs) <= _ORIGIN_PAD)
            out[at_origin] = 1.0 / SQRT_TWO_PI
            out[near & ~at_origin] = 0.0
            rest = ~near
        else:
            rest = np.ones(xs.size, dtype=bool)
        if np.any(rest):
            numer = self.kernel.spectrum(xs[rest])
            denom = self._denominator(folded[rest])
            bad = np.abs(denom) < _DENOMINATOR_FLOOR
            if np.any(bad):
                raise DegeneracyError(
                    f"{self.kernel.label}: periodization fell below the "
                    f"positivity floor at xi={xs[rest][bad][0]:.6g}")
            out[rest] = numer / (SQRT_TWO_PI * denom)
        return float(out[0]) if scalar else out

    @cached_property
    def spectrum_values(self) -> np.ndarray:
        """Cardinal spectrum on the torus grid nodes."""
        vals = self.spectrum(self.torus.nodes)
        vals.flags.writeable = False
        return vals

    def _envelope(self) -> SpectralEnvelope:
        """Decreasing majorant of the cardinal spectrum."""
        floor = self.sigma_floor
        base = self.kernel.envelope
        peak = 1.0 / SQRT_TWO_PI

        def value(t: float) -> float:
            return min(base.value(t) / (SQRT_TWO_PI * floor), peak)

        def tail(t: float) -> float:
            return base.tail(t) / (SQRT_TWO_PI * floor)

        return SpectralEnvelope(value=value, tail=tail)

    # -- space side ----------------------------------------------------------

    def _quadrature_cutoff(self, tol: float) -> Optional[float]:
        """Smallest certified cutoff, or None when truncation is infeasible."""
        if self.kernel.bandlimited:
            return self.kernel.support
        env = self._envelope()
        hi = 1
        while env.inverse_ft_tail(hi * _PI) > tol:
            hi *= 2
            if hi > _MAX_CUTOFF_PI:
                return None
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if env.inverse_ft_tail(mid * _PI) > tol:
                lo = mid
            else:
                hi = mid
        return hi * _PI

    def _translate_series(self, xs: np.ndarray, tol: float) -> np.ndarray:
        if self.kernel.space is None or self.kernel.symbol is None:
            raise AccuracyError(
                f"{self.kernel.label}: cardinal spectrum tail cannot be "
                f"truncated below a practical cutoff and the generator has "
                "no closed periodization/space pair for the series route")
        recip = 1.0 / (SQRT_TWO_PI * self.sigma)
        ns = np.arange(-_SERIES_HALF_WIDTH, _SERIES_HALF_WIDTH + 1)
        phases = np.exp(-1j * np.outer(ns, self.torus.nodes))
        coeffs = (phases @ recip).real / self.torus.m
        outer_band = np.abs(ns) >= (3 * _SERIES_HALF_WIDTH) // 4
        if np.max(np.abs(coeffs[outer_band])) > 1e-15 * np.max(np.abs(coeffs)):
            raise AccuracyError(
                f"{self.kernel.label}: reciprocal-symbol coefficients have "
                "not decayed to numerical zero within the series window")
        diffs = xs[:, None] - ns[None, :]
        table = self.kernel.space(diffs.ravel()).reshape(diffs.shape)
        return table @ coeffs

    def eval(self, x, *, cutoff: Optional[float] = None, tol: float = 1e-8):
        """Space-side values L(x); scalar in, scalar out.

        Uses certified spectral quadrature when the cardinal spectrum can be
        truncated at a practical cutoff (always the case for bandlimited
        generators), and the exact reciprocal-symbol series otherwise.  An
        explicit ``cutoff`` forces the quadrature route.
        """
        scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        chosen = cutoff if cutoff is not None else self._quadrature_cutoff(
            0.2 * tol)
        if chosen is not None:
            tail = (0.0 if self.kernel.bandlimited and cutoff is None
                    else self._envelope().inverse_ft_tail(chosen))
            vals = inverse_ft(
                self.spectrum,
                xs,
                chosen,
                kinks=self.kernel.kinks,
                tail_estimate=tail,
                tail_tol=tol,
            )
        else:
            vals = self._translate_series(xs, tol)
        return float(vals[0]) if scalar else vals

    def __call__(self, x):
        return self.eval(x)

    @cached_property
    def space_values(self) -> np.ndarray:
        """Cached evaluation table on :attr:`line_grid` (exact node values)."""
        vals = self.eval(self.line_grid.nodes)
        vals.flags.writeable = False
        return vals

    def __repr__(self) -> str:
        route = "closed-symbol" if self.depth is None else f"depth={self.depth}"
        return f"CardinalFunction({self.kernel.label}, {route})"

    # -- reuse as a generator --------------------------------------------------

    def as_kernel(self) -> Kernel:
        """Wrap the cardinal as a generator in its own right.

        Its lattice periodization is exactly the constant 1/sqrt(2 pi) (the
        numerator's periodization reproduces the denominator), which is
        recorded as the closed-form symbol.
        """
        peak = 1.0 / SQRT_TWO_PI

        def symbol(xi):
            return np.full(np.shape(np.asarray(xi)), peak)

        return Kernel(
            name=f"cardinal-{self.kernel.name}",
            label=f"cardinal[{self.kernel.label}]",
            alpha=self.kernel.alpha,
            spectrum=self.spectrum,
            envelope=self._envelope(),
            space=lambda xs: np.atleast_1d(self.eval(xs)),
            support=self.kernel.support,
            analytic_fourier=False,
            symbol=symbol,
            kinks=self.kernel.kinks,
            jumps=self.kernel.jumps,
        )


def _default_depth(kernel: Kernel, torus: TorusGrid) -> int:
    """Smallest truncation whose discarded cells are negligible against the
    denominator's minimum (relative 1e-12)."""
    if kernel.bandlimited:
        return kernel.bandlimit_cells
    nodes = torus.nodes
    if kernel.singular_at_origin:
        nodes = nodes[np.abs(nodes) > _ORIGIN_PAD]
    depth = 4
    while depth <= 256:
        sigma = periodize(kernel.spectrum, nodes, depth)
        floor = float(np.min(np.abs(sigma)))
        if floor > 0.0 and kernel.envelope.amalgam_tail(depth) <= 1e-12 * floor:
            return depth
        depth *= 2
    raise AccuracyError(
        f"{kernel.label}: periodization tail cannot be certified below "
        "1e-12 of the denominator by truncation; a closed-form symbol is "
        "required")


def make_cardinal(
    kernel: Kernel,
    *,
    depth: Optional[int] = None,
    torus_points: int = 1024,
    line_grid: Optional[LineGrid] = None,
) -> CardinalFunction:
    """Build the cardinal interpolator for a generator.

    ``depth=None`` selects the generator's closed-form periodization when it
    has one and otherwise the smallest truncation certified against the
    denominator minimum; an explicit ``depth`` forces truncation.  The
    denominator is validated on the torus grid: values must be bounded away
    from zero and of one sign (growing generators have negative spectra; the
    sign cancels in the ratio).
    """
    if torus_points < 16 or torus_points % 2:
        raise UsageError("torus_points must be an even number >= 16")
    torus = TorusGrid(torus_points)
    if line_grid is None:
        line_grid = LineGrid(16.0, 1.0 / 8.0)

    if depth is not None:
        depth = int(depth)
        if depth < 0:
            raise UsageError("periodization depth must be >= 0")
    elif kernel.symbol is None:
        depth = _default_depth(kernel, torus)

    nodes = torus.nodes
    singular = np.zeros(nodes.size, dtype=bool)
    if kernel.singular_at_origin:
        singular = np.abs(nodes) <= _ORIGIN_PAD
    sigma = np.full(nodes.size, np.nan)
    live = nodes[~singular]
    if depth is None:
        sigma[~singular] = np.asarray(kernel.symbol(live), dtype=float)
    else:
        sigma[~singular] = periodize(kernel.spectrum, live, depth)

    finite = sigma[~singular]
    if not np.all(np.isfinite(finite)):
        raise DegeneracyError(
            f"{kernel.label}: periodization is not finite on the torus grid")
    if np.min(finite) > 0.0:
        pass
    elif np.max(finite) < 0.0:
        if not kernel.singular_at_origin:
            raise DegeneracyError(
                f"{kernel.label}: periodization is negative; only growing "
                "generators (singular spectra) may carry a negative sign")
    else:
        raise DegeneracyError(
            f"{kernel.label}: periodization changes sign on the torus grid; "
            "the denominator cannot be certified away from zero")
    if np.min(np.abs(finite)) < _DENOMINATOR_FLOOR:
        raise DegeneracyError(
            f"{kernel.label}: periodization minimum {np.min(np.abs(finite)):.3e} "
            f"is below the positivity floor {_DENOMINATOR_FLOOR:g}")

    return CardinalFunction(kernel, depth, torus, sigma, line_grid)


def cardinal_eval(kernel: Kernel, x, *, depth: Optional[int] = None,
                  cutoff: Optional[float] = None, tol: float = 1e-8):
    """One-shot cardinal evaluation (builds the cardinal, then evaluates)."""
    return make_cardinal(kernel, depth=depth).eval(x, cutoff=cutoff, tol=tol)


def cardinal_regularity(
    kernel: Kernel,
    *,
    cells: int = 8,
    grid_points: int = 1024,
    torus_points: int = 1024,
) -> RegularityReport:
    """Regularity report for the cardinal of a generator.

    For generators with positive summable spectra the cardinal's offcenter
    mass is also checked against the transfer bound

        C_L <= C_phi * (sup_cell0 |phihat| / delta_phi + C_phi),

    with the cardinal's side taken as an honest upper value (tail included)
    and the generator's constants likewise; a violation raises an accuracy
    error.  Growing generators skip the check (their own constants are not
    defined), but still get their cardinal's report.
    """
    cardinal = make_cardinal(kernel, torus_points=torus_points)
    report = regularity_report(cardinal.as_kernel(), cells=cells,
                               grid_points=grid_points)
    if not kernel.singular_at_origin:
        base = regularity_report(kernel, cells=cells, grid_points=grid_points)
        if base.pass_positive and base.pass_summable:
            c_phi = (base.amalgam_offcenter + base.tail_bound) / base.delta
            allowed = c_phi * (base.cell_sups[0] / base.delta + c_phi)
            measured = (report.amalgam_offcenter
                        + report.tail_bound) / report.delta
            if measured > allowed * (1.0 + 1e-12):
                raise AccuracyError(
                    f"{kernel.label}: cardinal offcenter ratio {measured:.6g} "
                    f"exceeds the transfer bound {allowed:.6g}")
    return report


def lattice_interpolant_via_cardinal(
    samples: Sequence[float],
    kernel: Kernel,
    x,
    *,
    depth: Optional[int] = None,
    tol: float = 1e-8,
    cardinal: Optional[CardinalFunction] = None,
):
    """Interpolate integer-lattice samples: ``sum_j f(j) L(x - j)``.

    ``samples`` covers the centered window ``j = -(n-1)//2 .. n//2``.  Pass
    a prebuilt ``cardinal`` to amortize construction over many calls.
    """
    values = np.asarray(samples, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise UsageError("samples must be a nonempty one-dimensional window")
    if not np.all(np.isfinite(values)):
        raise UsageError("samples must be finite")
    scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not values.any():
        out = np.zeros(xs.size)
        return float(out[0]) if scalar else out
    if cardinal is None:
        cardinal = make_cardinal(kernel, depth=depth)
    offsets = np.arange(values.size, dtype=float) - (values.size - 1) // 2
    diffs = xs[:, None] - offsets[None, :]
    table = cardinal.eval(diffs.ravel(), tol=tol).reshape(diffs.shape)
    out = table @ values
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class CardinalSweepPoint:
    """One row of a cardinal convergence sweep."""

    alpha: float
    l2_error: float
    sup_error: float
    generator_sup_distance: float

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "l2_error": float(self.l2_error),
            "sup_error": float(self.sup_error),
            "generator_sup_distance": float(self.generator_sup_distance),
        }


def cardinal_convergence_sweep(
    family: Callable[[float], Kernel],
    reference: Kernel,
    alphas: Sequence[float],
    grid: Optional[LineGrid] = None,
    *,
    tol: float = 1e-8,
) -> list:
    """Distances between family cardinals and a reference cardinal.

    For each shape parameter the sweep records the L2 and sup distance of
    the family member's cardinal from the reference kernel's cardinal on the
    grid, alongside the sup distance between the generators themselves —
    the pair of tracks shows that cardinal closeness does not force
    generator closeness.
    """
    if grid is None:
        grid = LineGrid(16.0, 1.0 / 8.0)
    base = make_cardinal(reference)
    base_vals = base.eval(grid.nodes, tol=tol)
    base_gen = reference.eval_space(grid.nodes)
    points = []
    for alpha in alphas:
        kernel = family(float(alpha))
        if not isinstance(kernel, Kernel):
            raise UsageError("family must map each shape parameter to a kernel")
        member = make_cardinal(kernel)
        vals = member.eval(grid.nodes, tol=tol)
        gen_vals = kernel.eval_space(grid.nodes)
        points.append(CardinalSweepPoint(
            alpha=float(alpha),
            l2_error=l2_norm_line(vals - base_vals, grid),
            sup_error=float(np.max(np.abs(vals - base_vals))),
            generator_sup_distance=float(np.max(np.abs(gen_vals - base_gen))),
        ))
    return points


def space_table_csv(cardinal: CardinalFunction) -> str:
    """CSV export of the cached space table, columns ``x,L``."""
    lines = ["x,L"]
    lines.extend(
        f"{x:.17g},{v:.17g}"
        for x, v in zip(cardinal.line_grid.nodes, cardinal.space_values))
    return "\n".join(lines) + "\n"


def spectrum_table_csv(cardinal: CardinalFunction) -> str:
    """CSV export of the spectrum on the torus grid, columns ``xi,Lhat``."""
    lines = ["xi,Lhat"]
    lines.extend(
        f"{x:.17g},{v:.17g}"
        for x, v in zip(cardinal.torus.nodes, cardinal.spectrum_values))
    return "\n".join(lines) + "\n"
