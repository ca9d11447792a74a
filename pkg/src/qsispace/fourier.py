"""Fourier-side grids, quadrature, and norms.

Conventions
-----------
The transform normalization used across the package is

    fhat(xi) = (1 / sqrt(2*pi)) * integral f(x) * exp(-i*xi*x) dx,

so the inverse reads ``f(x) = (1 / sqrt(2*pi)) * integral fhat(xi) *
exp(+i*x*xi) dxi`` and Plancherel holds with constant one.  The fundamental
frequency cell is ``T = [-pi, pi)``.

Grids and quadrature
--------------------
Uniform grids (:class:`TorusGrid`, :class:`LineGrid`) carry trapezoid weights
and serve as the representation and serialization format.  They are spectrally
accurate for smooth periodic integrands (torus) and for smooth rapidly
decaying or bandlimited integrands (line), which covers the pointwise algebra
and norm computations in the rest of the package.

Integrals of smooth but *non-periodic* integrands on the frequency cell --
inner products against complex exponentials ``exp(i*x*xi)`` with non-integer
``x``, and inverse transforms of kernel spectra -- are a different matter: a
uniform rule has O(h) endpoint error there, far short of the 1e-8..1e-12
targets used by the calling modules.  Those integrals run on composite
Gauss-Legendre panels (:func:`composite_rule`, :func:`torus_rule`) whose panel
breakpoints sit on the pi-lattice, where the catalog spectra have kinks or
jumps, and whose per-panel node counts scale with an oscillation hint at the
classical rate of roughly pi nodes per wavelength plus a safety margin.

Grid-sample inputs are still accepted in the precision paths: the samples are
resampled onto the Gauss-Legendre nodes with sliding local Lagrange
interpolation (:func:`resample_uniform`).  The integrands handled here are
entire of modest exponential type, which the default grids oversample by more
than an order of magnitude, so resampling contributes well below the target
tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import ceil, comb, floor, pi, sqrt

import numpy as np

from .errors import AccuracyError, UsageError

__all__ = [
    "TWO_PI",
    "SQRT_TWO_PI",
    "TorusGrid",
    "LineGrid",
    "composite_rule",
    "torus_rule",
    "torus_inner",
    "torus_norm",
    "inverse_ft",
    "periodize",
    "l2_norm_line",
    "l2_norm_torus",
    "resample_uniform",
]

TWO_PI = 2.0 * pi
SQRT_TWO_PI = sqrt(TWO_PI)

# Per-panel Gauss-Legendre sizing: n = ceil(_NODES_PER_UNIT_PHASE * phase) +
# _NODE_MARGIN, where phase = osc * width / 2 is the phase excursion across
# the panel.  The coefficient is a measured envelope: the minimal n reaching
# 1e-14 relative error on exp(i*phase*t) over [-1, 1] is n/phase = 1.25 at
# phase 20 falling toward 0.75 by phase 100, and the margin covers the small-
# phase end.
_NODES_PER_UNIT_PHASE = 0.75
_NODE_MARGIN = 12
_MIN_NODES = 16
_MAX_NODES = 72


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid on the fundamental cell ``T = [-pi, pi)``.

    Node ``i`` sits at ``-pi + 2*pi*i/m`` for ``i = 0 .. m-1`` and carries
    weight ``2*pi/m``.  The rule is exact to machine precision for smooth
    2*pi-periodic integrands; use :func:`torus_rule` for non-periodic ones.

    Parameters
    ----------
    m : int
        Number of nodes; must be even and at least 8.
    """

    m: int

    def __post_init__(self):
        if self.m < 8 or self.m % 2 != 0:
            raise UsageError(f"TorusGrid needs an even m >= 8, got {self.m}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return -pi + TWO_PI * np.arange(self.m) / self.m

    @property
    def weight(self) -> float:
        return TWO_PI / self.m


@dataclass(frozen=True)
class LineGrid:
    """Uniform grid on ``[-X, X]`` with spacing ``h`` and trapezoid weights.

    ``X/h`` must be an integer so the node count ``2*X/h + 1`` is odd and the
    origin is a node.  End nodes carry half weight.

    Parameters
    ----------
    half_width : float
        Window half-width ``X``.
    spacing : float
        Node spacing ``h``.
    """

    half_width: float
    spacing: float

    def __post_init__(self):
        if self.half_width <= 0 or self.spacing <= 0:
            raise UsageError("LineGrid needs positive half_width and spacing")
        ratio = self.half_width / self.spacing
        if abs(ratio - round(ratio)) > 1e-9:
            raise UsageError(
                f"LineGrid half_width/spacing must be integral, got {ratio!r}"
            )

    @property
    def n_half(self) -> int:
        return int(round(self.half_width / self.spacing))

    @cached_property
    def nodes(self) -> np.ndarray:
        n = self.n_half
        return self.spacing * np.arange(-n, n + 1)

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.full(2 * self.n_half + 1, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


@lru_cache(maxsize=None)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_n(width: float, osc: float) -> int:
    phase = 0.5 * osc * width
    n = int(ceil(_NODES_PER_UNIT_PHASE * phase)) + _NODE_MARGIN
    return max(_MIN_NODES, min(n, _MAX_NODES))


def composite_rule(
    a: float,
    b: float,
    osc: float = 0.0,
    kinks: tuple[float, ...] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on ``[a, b]``.

    Panel breakpoints are placed at every multiple of pi inside the interval
    (where catalog spectra have kinks or jumps) plus any extra ``kinks``;
    panels are then subdivided so the per-panel node count stays moderate
    while resolving integrands that oscillate like ``exp(i*osc*xi)``.

    Parameters
    ----------
    a, b : float
        Integration interval endpoints, ``a < b``.
    osc : float, optional
        Oscillation hint: the largest ``|x|`` such that a factor
        ``exp(i*x*xi)`` (or a feature of comparable scale) appears in the
        integrand.
    kinks : tuple of float, optional
        Additional breakpoint locations.

    Returns
    -------
    nodes, weights : ndarray
        Quadrature nodes and weights.
    """
    if not b > a:
        raise UsageError(f"composite_rule needs a < b, got [{a}, {b}]")
    osc = max(float(osc), 0.0)
    lo = ceil(a / pi - 1e-12)
    hi = floor(b / pi + 1e-12)
    breaks = [a, b]
    breaks.extend(pi * k for k in range(lo, hi + 1))
    breaks.extend(float(k) for k in kinks if a < k < b)
    breaks = np.unique(np.asarray(breaks, dtype=float))
    breaks = breaks[np.concatenate(([True], np.diff(breaks) > 1e-9))]
    if breaks[0] > a:
        breaks[0] = a
    if breaks[-1] < b:
        breaks[-1] = b

    width_cap = pi
    if osc > 0:
        # Keep per-panel phase under what _MAX_NODES can resolve.
        width_cap = min(pi, 2.0 * (_MAX_NODES - _NODE_MARGIN)
                        / (_NODES_PER_UNIT_PHASE * osc))

    xs: list[np.ndarray] = []
    ws: list[np.ndarray] = []
    for p, q in zip(breaks[:-1], breaks[1:]):
        parts = max(1, int(ceil((q - p) / width_cap - 1e-12)))
        edges = np.linspace(p, q, parts + 1)
        for u, v in zip(edges[:-1], edges[1:]):
            n = _panel_n(v - u, osc)
            gx, gw = _leggauss(n)
            half = 0.5 * (v - u)
            xs.append(half * gx + 0.5 * (u + v))
            ws.append(half * gw)
    return np.concatenate(xs), np.concatenate(ws)


_TORUS_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def torus_rule(osc: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on ``[-pi, pi]`` sized for oscillation ``osc``.

    Rules are cached by oscillation bucket (multiples of 8), so repeated
    calls with similar hints share nodes and spectra evaluated on them can be
    reused by callers.
    """
    bucket = int(8 * ceil(max(float(osc), 1.0) / 8.0))
    rule = _TORUS_RULES.get(bucket)
    if rule is None:
        rule = composite_rule(-pi, pi, float(bucket))
        _TORUS_RULES[bucket] = rule
    return rule


def _as_values(fn_or_values, nodes: np.ndarray) -> np.ndarray:
    if callable(fn_or_values):
        return np.asarray(fn_or_values(nodes))
    values = np.asarray(fn_or_values)
    if values.shape != nodes.shape:
        raise UsageError(
            "value array shape does not match quadrature nodes; pass a "
            "callable or values sampled on the matching grid"
        )
    return values


def torus_inner(fn, xs, *, osc_extra: float = 0.0) -> np.ndarray:
    """Inner products ``integral_T fn(xi) * exp(i*x*xi) dxi`` for each ``x``.

    Parameters
    ----------
    fn : callable
        Vectorized integrand on ``[-pi, pi]``.
    xs : array_like
        Modulation frequencies ``x``.
    osc_extra : float, optional
        Additional oscillation carried by ``fn`` itself (for example the
        largest node magnitude in an exponential sum).

    Returns
    -------
    ndarray
        Complex inner products, one per entry of ``xs``.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    osc = (np.max(np.abs(xs)) if xs.size else 0.0) + osc_extra
    nodes, weights = torus_rule(osc)
    vals = _as_values(fn, nodes) * weights
    return np.exp(1j * np.outer(xs, nodes)) @ vals


def torus_norm(fn, *, osc: float = 0.0) -> float:
    """L2 norm of ``fn`` over the fundamental cell ``[-pi, pi]``.

    ``osc`` is the oscillation of ``fn`` itself; the rule is sized for the
    squared integrand, which oscillates twice as fast.
    """
    nodes, weights = torus_rule(2.0 * osc)
    vals = _as_values(fn, nodes)
    return float(sqrt(np.sum(weights * np.abs(vals) ** 2).real))


def inverse_ft(
    spectrum,
    x,
    xi_max: float,
    *,
    osc_extra: float = 0.0,
    kinks: tuple[float, ...] = (),
    budget: int | None = None,
    tail_estimate: float | None = None,
    tail_tol: float = 1e-9,
    expect_even: bool = True,
    chunk: int = 4096,
):
    """Inverse transform ``(1/sqrt(2*pi)) * integral spectrum * e^{i*x*xi} dxi``.

    The integral runs over ``[-xi_max, xi_max]`` on a composite
    Gauss-Legendre rule with breakpoints on the pi-lattice.  For even real
    spectra the result is real; the imaginary residue is checked against
    1e-9 and reported as an accuracy failure if exceeded.

    Parameters
    ----------
    spectrum : callable
        Vectorized spectrum evaluator.
    x : float or array_like
        Evaluation points on the line.
    xi_max : float
        Truncation half-width of the frequency integral.
    osc_extra : float, optional
        Extra oscillation carried by the spectrum itself.
    kinks : tuple of float, optional
        Spectrum kink locations off the pi-lattice.
    budget : int, optional
        Cap on the total quadrature node count; exceeding it raises
        :class:`~qsispace.errors.AccuracyError` rather than silently
        degrading.
    tail_estimate : float, optional
        Caller-supplied bound on the neglected ``|xi| > xi_max`` mass; if it
        exceeds ``tail_tol`` an accuracy error is raised.
    expect_even : bool, optional
        Verify that the imaginary part is negligible (default True).
    chunk : int, optional
        Evaluation points per matrix block (memory control).

    Returns
    -------
    float or ndarray
        Real inverse-transform values, scalar when ``x`` is scalar.
    """
    if tail_estimate is not None and tail_estimate > tail_tol:
        raise AccuracyError(
            f"spectrum tail beyond xi_max={xi_max:g} is ~{tail_estimate:.3g}, "
            f"above the {tail_tol:.3g} tolerance; widen the integration window"
        )
    scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    osc = (np.max(np.abs(xs)) if xs.size else 0.0) + osc_extra
    nodes, weights = composite_rule(-xi_max, xi_max, osc, kinks)
    if budget is not None and nodes.size > budget:
        raise AccuracyError(
            f"quadrature needs {nodes.size} nodes, over the budget {budget}; "
            "raise the budget or reduce the evaluation range"
        )
    svals = np.asarray(spectrum(nodes)) * weights
    out = np.empty(xs.size, dtype=complex)
    for start in range(0, xs.size, chunk):
        block = xs[start:start + chunk]
        out[start:start + chunk] = np.exp(1j * np.outer(block, nodes)) @ svals
    out /= SQRT_TWO_PI
    if expect_even:
        residue = float(np.max(np.abs(out.imag), initial=0.0))
        scale = max(1.0, float(np.max(np.abs(out.real), initial=0.0)))
        if residue > 1e-9 * scale:
            raise AccuracyError(
                f"imaginary residue {residue:.3g} exceeds 1e-9 for a "
                "supposedly even spectrum"
            )
    result = out.real
    return float(result[0]) if scalar else result


def periodize(spectrum, grid, k_cells: int) -> np.ndarray:
    """Periodization ``sigma(xi) = sum_{|k| <= K} spectrum(xi + 2*pi*k)``.

    Parameters
    ----------
    spectrum : callable
        Vectorized spectrum evaluator.
    grid : TorusGrid or array_like
        Evaluation nodes on the fundamental cell.
    k_cells : int
        Truncation depth ``K``.

    Returns
    -------
    ndarray
        Periodized values on the grid nodes.
    """
    if k_cells < 0:
        raise UsageError("periodize needs k_cells >= 0")
    xi = grid.nodes if isinstance(grid, TorusGrid) else np.asarray(grid, dtype=float)
    sigma = np.array(spectrum(xi), dtype=float, copy=True)
    for k in range(1, k_cells + 1):
        sigma += spectrum(xi + TWO_PI * k)
        sigma += spectrum(xi - TWO_PI * k)
    return sigma


def l2_norm_line(samples, grid: LineGrid) -> float:
    """L2 norm of samples on a :class:`LineGrid` (trapezoid weights)."""
    samples = np.asarray(samples)
    if samples.shape != grid.nodes.shape:
        raise UsageError("sample count does not match the line grid")
    return float(sqrt(np.sum(grid.weights * np.abs(samples) ** 2)))


def l2_norm_torus(values, grid: TorusGrid) -> float:
    """L2 norm of values on a :class:`TorusGrid` (periodic uniform weights)."""
    values = np.asarray(values)
    if values.shape != grid.nodes.shape:
        raise UsageError("value count does not match the torus grid")
    return float(sqrt(grid.weight * np.sum(np.abs(values) ** 2)))


def resample_uniform(
    values,
    grid: TorusGrid,
    targets,
    degree: int = 12,
) -> np.ndarray:
    """Interpolate uniform-grid samples at arbitrary targets in ``[-pi, pi]``.

    Sliding local Lagrange interpolation of the given ``degree`` on the
    uniform grid (one-sided stencils near the cell ends, no periodic wrap, so
    non-periodic sample sets are handled correctly).  The integrands this
    package puts on torus grids are entire of type well below the grid
    Nyquist rate, so the interpolation error is negligible against the
    package tolerances.

    Parameters
    ----------
    values : array_like
        Samples on ``grid.nodes``.
    grid : TorusGrid
        The uniform source grid.
    targets : array_like
        Target locations in ``[-pi, pi]``.
    degree : int, optional
        Local polynomial degree (stencil size ``degree + 1``).

    Returns
    -------
    ndarray
        Interpolated values at the targets.
    """
    values = np.asarray(values)
    if values.shape != grid.nodes.shape:
        raise UsageError("value count does not match the torus grid")
    if degree + 1 > grid.m:
        raise UsageError("interpolation degree exceeds the grid size")
    t = np.atleast_1d(np.asarray(targets, dtype=float))
    h = grid.weight
    pos = (t + pi) / h
    base = np.clip(np.round(pos).astype(int) - degree // 2, 0, grid.m - 1 - degree)
    offsets = np.arange(degree + 1)
    idx = base[:, None] + offsets[None, :]
    s = pos[:, None] - idx
    bary = np.array([(-1.0) ** i * comb(degree, i) for i in offsets])

    out = np.empty(t.size, dtype=values.dtype)
    exact = np.abs(s) < 1e-12
    hit = exact.any(axis=1)
    if hit.any():
        cols = np.argmax(exact[hit], axis=1)
        out[hit] = values[idx[hit, cols]]
    miss = ~hit
    if miss.any():
        terms = bary / s[miss]
        weights = terms / terms.sum(axis=1, keepdims=True)
        out[miss] = np.sum(weights * values[idx[miss]], axis=1)
    return out
