"""Generator catalog: kernels with exact Fourier pairs and regularity reports.

Every kernel here is a square-integrable generator ``psi`` whose translates
span a shift-invariant space.  The catalog stores both sides of the Fourier
pair under the project normalization

    psihat(xi) = (1/sqrt(2*pi)) * integral psi(x) * exp(-i*xi*x) dx,

together with everything downstream code needs to reason rigorously about
truncations:

* a decreasing spectral majorant with closed-form tail integrals
  (:class:`SpectralEnvelope`), used to pick quadrature cutoffs and to bound
  the discarded cells in amalgam sums;
* the exact periodization ``sigma(xi) = sum_k psihat(xi + 2*pi*k)`` where a
  closed form exists (sinc, triangle, Poisson);
* flags for bandlimitedness, closed-form evaluators, and origin
  singularities.

:func:`regularity_report` measures the constants that decide whether the
translates form a well-conditioned system: the torus infimum ``delta`` of the
spectrum, the Wiener-amalgam cell sums, and their ratio.  Grids include both
cell endpoints, so for even spectra that decrease away from the origin the
reported values are exact rather than near-miss grid approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bessel import Z_MAX as _BESSEL_Z_MAX
from .bessel import bessel_k
from .errors import AccuracyError, DomainError, UsageError
from .fourier import SQRT_TWO_PI, inverse_ft

__all__ = [
    "SpectralEnvelope",
    "Kernel",
    "RegularityReport",
    "sinc_kernel",
    "gaussian",
    "gaussian_ai",
    "poisson",
    "inverse_multiquadric",
    "triangle_kernel",
    "hardy_multiquadric",
    "dilated",
    "convolve",
    "make_kernel",
    "KERNEL_NAMES",
    "regularity_report",
    "cells_for_tolerance",
]

_PI = math.pi


# ---------------------------------------------------------------------------
# Spectral envelopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralEnvelope:
    """Decreasing majorant of a kernel spectrum with integrable tail.

    Attributes
    ----------
    value : callable
        ``value(t) >= sup_{|xi| >= t} |psihat(xi)|`` for ``t >= 0``, and
        ``value`` is nonincreasing.
    tail : callable
        ``tail(t) >= integral_t^inf value(s) ds`` (one-sided).
    """

    value: Callable[[float], float]
    tail: Callable[[float], float]

    def amalgam_tail(self, cells: int) -> float:
        """Bound the discarded cell sups ``sum_{|k| > cells} sup_cell |psihat|``.

        Uses the nearest-point bound ``sup_{cell k} <= value((2|k|-1)*pi)``
        and an integral comparison for the remaining terms.
        """
        a = (2 * cells + 1) * _PI
        return 2.0 * (self.value(a) + self.tail(a) / (2.0 * _PI))

    def inverse_ft_tail(self, cutoff: float) -> float:
        """Bound the inverse-transform mass beyond ``|xi| > cutoff``."""
        return 2.0 * self.tail(cutoff) / SQRT_TWO_PI


def _compact_envelope(peak: float, half_width: float) -> SpectralEnvelope:
    """Envelope for a spectrum bounded by ``peak`` on ``[-half_width, half_width]``."""

    def value(t: float) -> float:
        return peak if t <= half_width else 0.0

    def tail(t: float) -> float:
        return peak * max(half_width - t, 0.0)

    return SpectralEnvelope(value=value, tail=tail)


# ---------------------------------------------------------------------------
# Kernel type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Kernel:
    """A generator with its exact Fourier pair and truncation metadata.

    Attributes
    ----------
    name : str
        Family tag (``"gaussian"``, ``"poisson"``, ...).
    label : str
        Human-readable identity including shape parameters.
    alpha : float or None
        Shape parameter, when the family has one.
    spectrum : callable
        Vectorized ``xi -> psihat(xi)`` (ndarray in, ndarray out).
    envelope : SpectralEnvelope
        Decreasing spectral majorant with tail integrals.
    space : callable or None
        Vectorized ``x -> psi(x)`` closed form; ``None`` means space-side
        values come from inverse-Fourier quadrature.
    support : float
        Half-width ``A`` of ``supp(psihat)``; ``inf`` when not bandlimited.
    analytic_fourier : bool
        True when ``spectrum`` is a closed form (vs quadrature-backed).
    symbol : callable or None
        Exact lattice periodization ``sigma(xi) = sum_k psihat(xi + 2*pi*k)``
        when a closed form exists (as an a.e./L2 object: jump points of a
        discontinuous spectrum carry the one-sided value, not the
        double-counted grid sum).
    kinks : tuple of float
        Points where the spectrum is not smooth; quadratures split panels
        there.
    jumps : tuple of float
        Jump discontinuities of the spectrum.  Cell scans replace an exact
        hit on a jump that sits on a cell boundary by the one-sided limit
        from inside the cell, matching essential-sup semantics.
    singular_at_origin : bool
        True when ``|psihat|`` diverges at 0 (spectrum-only kernels of
        polynomial growth); such kernels have no space evaluator.
    parts : tuple of Kernel
        Factor kernels, for convolutions.
    """

    name: str
    label: str
    alpha: Optional[float]
    spectrum: Callable[[np.ndarray], np.ndarray]
    envelope: SpectralEnvelope
    space: Optional[Callable[[np.ndarray], np.ndarray]] = None
    support: float = math.inf
    analytic_fourier: bool = True
    symbol: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kinks: tuple = ()
    jumps: tuple = ()
    singular_at_origin: bool = False
    parts: tuple = ()

    def __repr__(self) -> str:  # keep callables out of the repr
        return f"Kernel({self.label})"

    @property
    def bandlimited(self) -> bool:
        return math.isfinite(self.support)

    @property
    def bandlimit_cells(self) -> int:
        """Number of torus cells ``N = ceil(A / (2*pi))`` covering the support."""
        if not self.bandlimited:
            raise UsageError(f"{self.label} is not bandlimited")
        return int(math.ceil(self.support / (2.0 * _PI) - 1e-12))

    # -- evaluation ---------------------------------------------------------

    def eval_fourier(self, xi):
        """Spectrum value(s) ``psihat(xi)``; scalar in, scalar out."""
        scalar = np.isscalar(xi) or (isinstance(xi, np.ndarray) and xi.ndim == 0)
        xs = np.atleast_1d(np.asarray(xi, dtype=float))
        if xs.size and not np.all(np.isfinite(xs)):
            raise UsageError("eval_fourier requires finite frequencies")
        vals = self.spectrum(xs)
        return float(vals[0]) if scalar else vals

    def eval_space(self, x, *, tol: float = 1e-9):
        """Space value(s) ``psi(x)``; closed form or inverse-Fourier quadrature.

        Raises
        ------
        UsageError
            For spectrum-only kernels (polynomial growth in space).
        AccuracyError
            When the quadrature route cannot certify ``tol``.
        """
        if self.singular_at_origin:
            raise UsageError(
                f"{self.label} grows polynomially; it has no space-side "
                "evaluator (only its cardinal function is usable)"
            )
        scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if self.space is not None:
            vals = self.space(xs)
        else:
            cutoff = self.fourier_cutoff(0.1 * tol)
            vals = inverse_ft(
                self.spectrum,
                xs,
                cutoff,
                kinks=self.kinks,
                tail_estimate=self.envelope.inverse_ft_tail(cutoff),
                tail_tol=tol,
            )
        return float(vals[0]) if scalar else vals

    def fourier_cutoff(self, tol: float = 1e-11) -> float:
        """Smallest pi-multiple ``X`` with certified spectral mass beyond
        ``|xi| > X`` at most ``tol`` (exactly the support when bandlimited)."""
        if self.bandlimited:
            return self.support
        if self.envelope.inverse_ft_tail(_PI) <= tol:
            return _PI
        lo, hi = 1, 2
        while self.envelope.inverse_ft_tail(hi * _PI) > tol:
            lo, hi = hi, 2 * hi
            if hi * _PI > 1e8:
                raise AccuracyError(
                    f"{self.label}: spectral tail cannot reach {tol:g} below "
                    "a practical cutoff; use the closed space form or a "
                    "looser tolerance"
                )
        while hi - lo > 1:  # first pi-multiple meeting tol
            mid = (lo + hi) // 2
            if self.envelope.inverse_ft_tail(mid * _PI) > tol:
                lo = mid
            else:
                hi = mid
        return hi * _PI


# ---------------------------------------------------------------------------
# Catalog families
# ---------------------------------------------------------------------------

def _require_positive(alpha: float, family: str) -> float:
    alpha = float(alpha)
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(f"{family} needs a positive finite shape parameter, "
                          f"got {alpha!r}")
    return alpha


def sinc_kernel() -> Kernel:
    """``psi(x) = sin(pi*x)/(pi*x)``: the unit bandlimited generator.

    Spectrum ``psihat = chi_[-pi,pi] / sqrt(2*pi)`` with the closed-interval
    convention at the edges, so reports on closed grids see the exact torus
    infimum ``1/sqrt(2*pi)``.
    """
    peak = 1.0 / SQRT_TWO_PI

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return np.where(np.abs(xi) <= _PI, peak, 0.0)

    def symbol(xi: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(xi, dtype=float), peak)

    return Kernel(
        name="sinc",
        label="sinc",
        alpha=None,
        spectrum=spectrum,
        envelope=_compact_envelope(peak, _PI),
        space=lambda x: np.sinc(x),
        support=_PI,
        symbol=symbol,
        kinks=(-_PI, _PI),
        jumps=(-_PI, _PI),
    )


def gaussian(alpha: float) -> Kernel:
    """``psi(x) = exp(-(x/alpha)^2)``, spectrum ``(alpha/sqrt(2)) e^{-(alpha xi)^2/4}``."""
    a = _require_positive(alpha, "gaussian")
    amp = a / math.sqrt(2.0)

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return amp * np.exp(-0.25 * np.square(a * xi))

    def space(x: np.ndarray) -> np.ndarray:
        return np.exp(-np.square(x / a))

    env = SpectralEnvelope(
        value=lambda t: amp * math.exp(-0.25 * (a * t) ** 2),
        tail=lambda t: math.sqrt(_PI / 2.0) * math.erfc(0.5 * a * t),
    )
    return Kernel(
        name="gaussian",
        label=f"gaussian(alpha={a:g})",
        alpha=a,
        spectrum=spectrum,
        envelope=env,
        space=space,
    )


def gaussian_ai() -> Kernel:
    """Unit-mass Gaussian ``phi(x) = exp(-x^2)/sqrt(pi)``.

    Spectrum ``(1/sqrt(2*pi)) e^{-xi^2/4}``; dilating this kernel produces the
    approximate-identity family ``alpha*phi(alpha*x)`` whose spectra flatten.
    """
    amp = 1.0 / SQRT_TWO_PI

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return amp * np.exp(-0.25 * np.square(xi))

    def space(x: np.ndarray) -> np.ndarray:
        return np.exp(-np.square(x)) / math.sqrt(_PI)

    env = SpectralEnvelope(
        value=lambda t: amp * math.exp(-0.25 * t * t),
        tail=lambda t: math.erfc(0.5 * t) / math.sqrt(2.0),
    )
    return Kernel(
        name="gaussian-ai",
        label="gaussian-ai",
        alpha=None,
        spectrum=spectrum,
        envelope=env,
        space=space,
    )


def poisson(alpha: float) -> Kernel:
    """``psi(x) = exp(-alpha*|x|)``, spectrum ``sqrt(2/pi)*alpha/(alpha^2+xi^2)``.

    The lattice periodization has the exact closed form
    ``sigma(xi) = sqrt(2/pi) * sinh(alpha) / (2*(cosh(alpha) - cos(xi)))``.
    """
    a = _require_positive(alpha, "poisson")
    amp = math.sqrt(2.0 / _PI) * a

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return amp / (a * a + np.square(xi))

    def space(x: np.ndarray) -> np.ndarray:
        return np.exp(-a * np.abs(x))

    def symbol(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if a < 300.0:
            return (math.sqrt(2.0 / _PI) * math.sinh(a)
                    / (2.0 * (math.cosh(a) - np.cos(xi))))
        # Large alpha: divide through by sinh to stay in double range.
        csch = 2.0 * math.exp(-a) / (1.0 - math.exp(-2.0 * a))
        coth = 1.0 / math.tanh(a)
        return math.sqrt(2.0 / _PI) / (2.0 * (coth - np.cos(xi) * csch))

    env = SpectralEnvelope(
        value=lambda t: amp / (a * a + t * t),
        tail=lambda t: math.sqrt(2.0 / _PI) * math.atan2(a, t),
    )
    return Kernel(
        name="poisson",
        label=f"poisson(alpha={a:g})",
        alpha=a,
        spectrum=spectrum,
        envelope=env,
        space=space,
        symbol=symbol,
    )


# Below this frequency the inverse-multiquadric spectrum uses its continuous
# origin limit; the Bessel route would need z -> 0 where its integrand
# overflows for large orders.  No quadrature node lands inside (0, 1e-10).
_IMQ_XI_FLOOR = 1e-10


def inverse_multiquadric(alpha: float) -> Kernel:
    """``psi(x) = (1 + x^2)^(-alpha)`` for ``alpha in [1, 40.5]``.

    Spectrum ``(2^(1-alpha)/Gamma(alpha)) |xi|^(alpha-1/2) K_(alpha-1/2)(|xi|)``,
    extended continuously to the origin value
    ``Gamma(alpha-1/2)/(sqrt(2)*Gamma(alpha))``; the origin is a genuine
    singularity only for ``alpha <= 1/2``, below this catalog's range.  The
    order window comes from the validated range of :func:`qsispace.bessel.bessel_k`.
    """
    a = float(alpha)
    if not 1.0 <= a <= 40.5:
        raise DomainError(
            f"inverse-multiquadric alpha={a:g} outside [1, 40.5] (order "
            "alpha-1/2 must sit in the validated Bessel window; alpha <= 1/2 "
            "would genuinely diverge at the origin)"
        )
    nu = a - 0.5
    coef = 2.0 ** (1.0 - a) / math.gamma(a)
    origin = math.gamma(nu) / (math.sqrt(2.0) * math.gamma(a))

    def _point(z: float) -> float:
        if z <= _IMQ_XI_FLOOR:
            return origin
        if z > _BESSEL_Z_MAX:
            return 0.0  # below 1e-40 of the peak; tails handled by envelope
        return coef * z ** nu * bessel_k(nu, z)

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return np.array([_point(abs(float(v))) for v in np.atleast_1d(xi)])

    def space(x: np.ndarray) -> np.ndarray:
        return (1.0 + np.square(x)) ** (-a)

    # K_nu(z) <= sqrt(2*pi/z) * exp(-z + nu^2/(2z)) (cosh bounds in the
    # integral representation), giving a closed-form majorant usable past the
    # Bessel window; below t0 fall back on monotonicity of the spectrum.
    t0 = max(2.0 * nu, 10.0)

    def _majorant(t: float) -> float:
        return coef * t ** nu * math.sqrt(2.0 * _PI / t) * math.exp(
            -t + nu * nu / (2.0 * t))

    def env_value(t: float) -> float:
        if t <= 90.0:
            return _point(max(t, 0.0))
        return min(_point(90.0), _majorant(t))

    def env_tail(t: float) -> float:
        if t < t0:
            return (t0 - t) * env_value(t) + env_tail(t0)
        # integral_t^inf s^(nu-1/2) e^{-s} ds <= t^(nu-1/2) e^{-t} / (1-(nu-1/2)/t)
        slack = 1.0 - (nu - 0.5) / t
        return (coef * math.sqrt(2.0 * _PI) * math.exp(nu * nu / (2.0 * t))
                * t ** (nu - 0.5) * math.exp(-t) / slack)

    return Kernel(
        name="inverse-multiquadric",
        label=f"inverse-multiquadric(alpha={a:g})",
        alpha=a,
        spectrum=spectrum,
        envelope=SpectralEnvelope(value=env_value, tail=env_tail),
        space=space,
        analytic_fourier=False,
        kinks=(0.0,),
    )


def triangle_kernel() -> Kernel:
    """Bandlimited generator with triangle spectrum ``psihat = max(2*pi - |xi|, 0)``.

    Space side ``psi(x) = (4*pi^2/sqrt(2*pi)) * sinc(x)^2``; support half-width
    ``A = 2*pi`` (two torus cells), exact symbol ``sigma == 2*pi``.
    """
    two_pi = 2.0 * _PI

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return np.maximum(two_pi - np.abs(xi), 0.0)

    def space(x: np.ndarray) -> np.ndarray:
        return (4.0 * _PI * _PI / SQRT_TWO_PI) * np.square(np.sinc(x))

    def symbol(xi: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(xi, dtype=float), two_pi)

    env = SpectralEnvelope(
        value=lambda t: max(two_pi - t, 0.0),
        tail=lambda t: 0.5 * max(two_pi - t, 0.0) ** 2,
    )
    return Kernel(
        name="triangle-spectrum",
        label="triangle-spectrum",
        alpha=None,
        spectrum=spectrum,
        envelope=env,
        space=space,
        support=two_pi,
        symbol=symbol,
        kinks=(-two_pi, 0.0, two_pi),
    )


def hardy_multiquadric(alpha: float = 0.5) -> Kernel:
    """Spectrum-only kernel for ``(1 + x^2)^(+alpha)``, ``alpha in (0,1)`` noninteger.

    The generalized transform away from the origin continues the
    inverse-multiquadric formula to negative exponent: it is sign-definite
    (negative for ``alpha in (0,1)``) and diverges like ``|xi|^(-2*alpha-1)``
    at 0, so only ratio-based objects (cardinal functions) consume it.  The
    space side grows polynomially and is deliberately not evaluable.
    """
    b = float(alpha)
    if not (0.0 < b < 1.0):
        raise DomainError(
            f"hardy-multiquadric alpha={b:g} outside (0, 1); only the "
            "classical sub-linear growth orders are supported"
        )
    nu = b + 0.5  # in (0.5, 1.5): inside the Bessel window
    coef = 2.0 ** (1.0 + b) / math.gamma(-b)  # negative for b in (0,1)

    def _point(z: float) -> float:
        if z <= _IMQ_XI_FLOOR:
            raise DomainError(
                "hardy-multiquadric spectrum diverges at the origin "
                f"(|xi|^(-{2 * b + 1:g})); evaluate away from 0"
            )
        if z > _BESSEL_Z_MAX:
            return 0.0
        return coef * z ** (-nu) * bessel_k(nu, z)

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return np.array([_point(abs(float(v))) for v in np.atleast_1d(xi)])

    def env_value(t: float) -> float:
        if t <= _IMQ_XI_FLOOR:
            return math.inf
        if t <= 90.0:
            return abs(_point(t))
        return abs(coef) * t ** (-nu) * math.sqrt(2.0 * _PI / t) * math.exp(
            -t + nu * nu / (2.0 * t))

    def env_tail(t: float) -> float:
        t0 = 10.0
        if t < t0:
            return (t0 - t) * env_value(t) + env_tail(t0)
        slack = 1.0 + (nu + 0.5) / t  # decreasing power only helps; keep margin
        return abs(coef) * math.sqrt(2.0 * _PI) * t ** (-nu - 0.5) * math.exp(
            nu * nu / (2.0 * t) - t) * slack

    return Kernel(
        name="hardy-multiquadric",
        label=f"hardy-multiquadric(alpha={b:g})",
        alpha=b,
        spectrum=spectrum,
        envelope=SpectralEnvelope(value=env_value, tail=env_tail),
        analytic_fourier=False,
        kinks=(0.0,),
        singular_at_origin=True,
    )


def dilated(base: Kernel, alpha: float) -> Kernel:
    """Mass-preserving dilation ``psi_alpha(x) = alpha * base(alpha * x)``.

    The spectrum rescales as ``psihat_alpha(xi) = basehat(xi / alpha)``:
    dilating an integrable bump flattens its spectrum toward the constant
    ``basehat(0)`` (approximate-identity behavior).
    """
    a = _require_positive(alpha, "dilated")
    if base.singular_at_origin:
        raise UsageError(f"cannot dilate spectrum-only kernel {base.label}")
    base_spectrum, base_space, base_env = base.spectrum, base.space, base.envelope

    def spectrum(xi: np.ndarray) -> np.ndarray:
        return base_spectrum(np.asarray(xi, dtype=float) / a)

    space = None
    if base_space is not None:
        def space(x: np.ndarray) -> np.ndarray:
            return a * base_space(a * np.asarray(x, dtype=float))

    env = SpectralEnvelope(
        value=lambda t: base_env.value(t / a),
        tail=lambda t: a * base_env.tail(t / a),
    )
    return Kernel(
        name="dilated",
        label=f"dilated({base.label}, alpha={a:g})",
        alpha=a,
        spectrum=spectrum,
        envelope=env,
        space=space,
        support=base.support * a,
        analytic_fourier=base.analytic_fourier,
        kinks=tuple(a * k for k in base.kinks),
        jumps=tuple(a * j for j in base.jumps),
        parts=(base,),
    )


def convolve(phi: Kernel, psi: Kernel) -> Kernel:
    """Kernel whose spectrum is the pointwise product ``phihat * psihat``.

    Under the project normalization this object equals ``(phi * psi)
    convolved / sqrt(2*pi)``; all conditioning ratios are scale-invariant, so
    the normalization choice only moves absolute spectrum values.  The space
    evaluator is quadrature-backed unless a factor list makes a closed form
    available elsewhere; support intersects (bandlimited if either factor is).
    """
    if phi.singular_at_origin or psi.singular_at_origin:
        raise UsageError("cannot convolve spectrum-only kernels")
    f, g = phi.spectrum, psi.spectrum

    def spectrum(xi: np.ndarray) -> np.ndarray:
        xs = np.asarray(xi, dtype=float)
        return f(xs) * g(xs)

    env_f, env_g = phi.envelope, psi.envelope
    env = SpectralEnvelope(
        value=lambda t: env_f.value(t) * env_g.value(t),
        tail=lambda t: min(env_f.value(t) * env_g.tail(t),
                           env_g.value(t) * env_f.tail(t)),
    )
    return Kernel(
        name="convolution",
        label=f"convolution({phi.label}, {psi.label})",
        alpha=None,
        spectrum=spectrum,
        envelope=env,
        space=None,
        support=min(phi.support, psi.support),
        analytic_fourier=phi.analytic_fourier and psi.analytic_fourier,
        kinks=tuple(sorted(set(phi.kinks) | set(psi.kinks))),
        jumps=tuple(sorted(set(phi.jumps) | set(psi.jumps))),
        parts=(phi, psi),
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_NO_PARAMETER = {"sinc", "triangle-spectrum", "gaussian-ai"}

KERNEL_NAMES = (
    "sinc",
    "gaussian",
    "poisson",
    "inverse-multiquadric",
    "triangle-spectrum",
    "gaussian-ai",
    "dilated-gaussian-ai",
    "hardy-multiquadric",
)


def make_kernel(name: str, alpha: Optional[float] = None) -> Kernel:
    """Construct a catalog kernel from its config-text name.

    ``"dilated-gaussian-ai"`` builds the approximate-identity family
    ``alpha * phi(alpha x)`` over the unit Gaussian; other compound kernels
    are built with :func:`dilated` and :func:`convolve` directly.
    """
    if name in _NO_PARAMETER:
        if alpha is not None:
            raise UsageError(f"kernel {name!r} takes no shape parameter")
        if name == "sinc":
            return sinc_kernel()
        if name == "triangle-spectrum":
            return triangle_kernel()
        return gaussian_ai()
    if name == "hardy-multiquadric":
        return hardy_multiquadric(0.5 if alpha is None else alpha)
    if alpha is None:
        raise UsageError(f"kernel {name!r} needs a shape parameter alpha")
    if name == "gaussian":
        return gaussian(alpha)
    if name == "poisson":
        return poisson(alpha)
    if name == "inverse-multiquadric":
        return inverse_multiquadric(alpha)
    if name == "dilated-gaussian-ai":
        return dilated(gaussian_ai(), alpha)
    raise UsageError(
        f"unknown kernel {name!r}; available: {', '.join(KERNEL_NAMES)}"
    )


# ---------------------------------------------------------------------------
# Regularity reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityReport:
    """Measured conditioning constants of a kernel's lattice cells.

    ``delta`` is the grid minimum of ``|psihat|`` over the central cell
    ``[-pi, pi]``; ``cell_sups[k]`` the grid maximum over cell ``k``;
    ``amalgam_offcenter`` the sum over ``k != 0``; ``amalgam_full`` adds the
    central cell; ``offcenter_ratio = amalgam_offcenter / delta``.
    ``tail_bound`` bounds every discarded cell beyond ``|k| > cells_used``
    from the kernel's decay envelope.  ``pass_positive`` witnesses spectrum
    nonnegativity on the grid; ``pass_summable`` requires a positive ``delta``
    and a truncation tail small next to the off-center sum.
    """

    kernel: str
    delta: float
    amalgam_full: float
    amalgam_offcenter: float
    offcenter_ratio: float
    tail_bound: float
    cells_used: int
    grid_points_per_cell: int
    pass_positive: bool
    pass_summable: bool
    cell_sups: dict = field(repr=False, default_factory=dict)

    def to_dict(self) -> dict:
        """JSON-ready mapping with stable field names."""
        return {
            "kernel": self.kernel,
            "delta": self.delta,
            "amalgam_full": self.amalgam_full,
            "amalgam_offcenter": self.amalgam_offcenter,
            "offcenter_ratio": self.offcenter_ratio,
            "tail_bound": self.tail_bound,
            "cells_used": self.cells_used,
            "grid_points_per_cell": self.grid_points_per_cell,
            "pass_positive": self.pass_positive,
            "pass_summable": self.pass_summable,
            "cell_sups": [[k, self.cell_sups[k]] for k in sorted(self.cell_sups)],
        }


def regularity_report(kernel: Kernel, cells: int = 8, grid_points: int = 1024,
                      tail_fraction: float = 0.05) -> RegularityReport:
    """Measure ``delta``, cell sups, amalgam sums, and truncation tail.

    Parameters
    ----------
    kernel : Kernel
    cells : int
        Cells each side of center (``K >= 1``); cells ``-K..K`` are scanned.
    grid_points : int
        Grid resolution ``M >= 2`` per cell.  Grids contain both endpoints
        (``M + 1`` points per cell), so even spectra monotone beyond the
        central cell attain their cell sups exactly.
    tail_fraction : float
        ``pass_summable`` demands ``tail_bound`` at most this fraction of the
        off-center sum (or of ``delta`` when the off-center sum vanishes).

    The report is always produced; failures show up in the flags, never as
    exceptions.
    """
    if cells < 1:
        raise UsageError(f"need at least one cell each side, got {cells}")
    if grid_points < 2:
        raise UsageError(f"need at least 2 grid points per cell, got {grid_points}")

    base = np.linspace(-_PI, _PI, grid_points + 1)
    if kernel.singular_at_origin:
        base = base[np.abs(base) > 1e-9]

    cell_sups: dict[int, float] = {}
    delta = math.inf
    positive = True
    for k in range(-cells, cells + 1):
        shifted = base + 2.0 * _PI * k
        vals = np.array(kernel.spectrum(shifted), dtype=float)
        # A jump landing exactly on a cell boundary takes its one-sided
        # limit from inside the cell (cell sups/infs are essential sups).
        for j in kernel.jumps:
            for end, inward in ((shifted[0], 1e-9), (shifted[-1], -1e-9)):
                if abs(j - end) < 1e-12:
                    vals[np.abs(shifted - end) < 1e-12] = kernel.spectrum(
                        np.array([j + inward]))[0]
        if np.min(vals) < -1e-13 * max(np.max(np.abs(vals)), 1.0):
            positive = False
        cell_sups[k] = float(np.max(np.abs(vals)))
        if k == 0:
            delta = float(np.min(np.abs(vals)))

    offcenter = float(sum(v for k, v in cell_sups.items() if k != 0))
    full = offcenter + cell_sups[0]
    ratio = offcenter / delta if delta > 0.0 else math.inf
    tail = kernel.envelope.amalgam_tail(cells)
    gate = tail_fraction * (offcenter if offcenter > 0.0 else delta)
    summable = bool(delta > 0.0 and math.isfinite(full) and tail <= gate)
    return RegularityReport(
        kernel=kernel.label,
        delta=delta,
        amalgam_full=full,
        amalgam_offcenter=offcenter,
        offcenter_ratio=ratio,
        tail_bound=tail,
        cells_used=cells,
        grid_points_per_cell=grid_points,
        pass_positive=positive,
        pass_summable=summable,
        cell_sups=cell_sups,
    )


def cells_for_tolerance(kernel: Kernel, tol: float, max_cells: int = 256) -> int:
    """Smallest cell count whose discarded amalgam tail is at most ``tol``."""
    for cells in range(1, max_cells + 1):
        if kernel.envelope.amalgam_tail(cells) <= tol:
            return cells
    raise AccuracyError(
        f"{kernel.label}: amalgam tail stays above {tol:g} even with "
        f"{max_cells} cells each side"
    )
