"""qsispace: sampling, interpolation, and recovery in shift-invariant spaces.

The package studies spaces spanned by the translates of a single generating
kernel along a (possibly perturbed) integer lattice: which kernels generate
well-behaved spaces, how functions in them are recovered from samples by
kernel interpolation, when a family of interpolating kernels reproduces the
space in the limit, and how cardinal interpolants mediate between kernels
that look very different but interpolate identically.
"""

from __future__ import annotations

__version__ = "0.1.0"
