"""Hartley-Fourier, Hartley and Fourier convolutions, direct and spectral.

Conventions (first argument first)::

    HF      (f * g)(x) = 1/(2 sqrt(2pi)) int g(y) [f(x+y) + f(x-y) + i f(-x-y) - i f(-x+y)] dy
    H1H1    (f * g)(x) = 1/(2 sqrt(2pi)) int f(y) [g(x+y) + g(x-y) + g(-x+y) - g(-x-y)] dy
    H2H2    same integral as H1H1; it factorises under H2 instead of H1
    FOURIER (f * g)(x) = 1/sqrt(2pi) int f(y) g(x-y) dy

The direct engine evaluates the integral by the trapezoidal rule in ``y``.
On a uniform grid every shifted argument ``+-x_j +- y_k`` is again a node
(or falls outside the window, where the integrand is taken as zero), so each
of the four shifted sums is one full linear convolution or correlation,
computed by :func:`numpy.convolve` in O(N^2).

The spectral engine multiplies transforms on the frequency grid and inverts:

    H1(f *HF g)   = H1(f) F(g)
    Hv(f *HvHv g) = Hv(f) Hv(g)
    F(f *F g)     = F(f) F(g)
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .grid import (
    ConfigurationError,
    DecayWarning,
    Grid,
    SampledFunction,
    check_decay,
    lp_norm,
    trapezoid_weights,
)
from .transforms import TransformKind, inverse_transform, transform

__all__ = [
    "ConvKind",
    "Engine",
    "ConvResult",
    "conv_direct",
    "conv_spectral",
    "convolve",
    "engine_compare",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_TINY = 1e-300


class ConvKind(enum.Enum):
    HF = "HF"
    H1H1 = "H1H1"
    H2H2 = "H2H2"
    FOURIER = "FOURIER"

    @classmethod
    def coerce(cls, kind) -> "ConvKind":
        if isinstance(kind, cls):
            return kind
        name = str(kind).upper()
        aliases = {"H": "H1H1", "H1": "H1H1", "H2": "H2H2", "F": "FOURIER"}
        try:
            return cls(aliases.get(name, name))
        except ValueError:
            raise ConfigurationError(f"unknown convolution kind {kind!r}") from None

    @classmethod
    def hartley(cls, variant: int) -> "ConvKind":
        if variant not in (1, 2):
            raise ConfigurationError(f"Hartley variant must be 1 or 2, got {variant!r}")
        return cls.H1H1 if variant == 1 else cls.H2H2


class Engine(enum.Enum):
    DIRECT = "DIRECT"
    SPECTRAL = "SPECTRAL"

    @classmethod
    def coerce(cls, engine) -> "Engine":
        if isinstance(engine, cls):
            return engine
        try:
            return cls(str(engine).upper())
        except ValueError:
            raise ConfigurationError(f"unknown engine {engine!r}") from None


@dataclass(frozen=True)
class ConvResult:
    output: SampledFunction
    engine: Engine
    tail_warning: bool = False
    engine_disagreement: float | None = None


def _check_inputs(f: SampledFunction, g: SampledFunction) -> tuple[Grid, bool]:
    if not isinstance(f.grid, Grid) or not isinstance(g.grid, Grid):
        raise ConfigurationError("convolution inputs must live on a spatial Grid")
    if f.grid != g.grid:
        raise ConfigurationError(f"grid mismatch: {f.grid} vs {g.grid}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        tail = check_decay(f, "first argument") | check_decay(g, "second argument")
    if tail:
        warnings.warn(
            "convolution input does not decay at the window edges; "
            "out-of-window values are treated as zero",
            DecayWarning,
            stacklevel=3,
        )
    return f.grid, tail


def _shift_sums(plain: np.ndarray, shifted: np.ndarray, weights: np.ndarray):
    """Trapezoidal sums ``sum_k w_k plain_k shifted(+-x_j +- y_k)``.

    Returns the four sums for the arguments ``x+y, x-y, -x-y, -x+y``.
    """
    n = plain.size
    c = n // 2
    b = weights * plain
    conv = np.convolve(b, shifted)
    corr = np.convolve(b[::-1], shifted)
    j = np.arange(n)
    s_xpy = corr[j + c - 1]
    s_xmy = conv[j + c]
    s_mxmy = conv[3 * c - j]
    s_mxpy = corr[3 * c - 1 - j]
    return s_xpy, s_xmy, s_mxmy, s_mxpy


def conv_direct(f: SampledFunction, g: SampledFunction, kind) -> ConvResult:
    """Evaluate the defining integral by trapezoidal quadrature (O(N^2))."""
    kind = ConvKind.coerce(kind)
    grid, tail = _check_inputs(f, g)
    w = trapezoid_weights(grid.points)
    h = grid.spacing

    if kind is ConvKind.FOURIER:
        n, c = grid.points, grid.points // 2
        full = np.convolve(w * f.values, g.values)
        out = (h / _SQRT_2PI) * full[c:c + n]
    elif kind is ConvKind.HF:
        s_xpy, s_xmy, s_mxmy, s_mxpy = _shift_sums(g.values, f.values, w)
        out = (h / (2 * _SQRT_2PI)) * (s_xpy + s_xmy + 1j * s_mxmy - 1j * s_mxpy)
    else:
        s_xpy, s_xmy, s_mxmy, s_mxpy = _shift_sums(f.values, g.values, w)
        out = (h / (2 * _SQRT_2PI)) * (s_xpy + s_xmy + s_mxpy - s_mxmy)
    return ConvResult(SampledFunction(grid, out), Engine.DIRECT, tail)


_SPECTRAL_FACTORS = {
    ConvKind.HF: (TransformKind.H1, TransformKind.F, TransformKind.H1),
    ConvKind.H1H1: (TransformKind.H1, TransformKind.H1, TransformKind.H1),
    ConvKind.H2H2: (TransformKind.H2, TransformKind.H2, TransformKind.H2),
    ConvKind.FOURIER: (TransformKind.F, TransformKind.F, TransformKind.F),
}


def conv_spectral(f: SampledFunction, g: SampledFunction, kind) -> ConvResult:
    """Pointwise product of transforms, inverted on the spatial grid (O(N log N))."""
    kind = ConvKind.coerce(kind)
    _, tail = _check_inputs(f, g)
    kf, kg, kout = _SPECTRAL_FACTORS[kind]
    product = transform(f, kf) * transform(g, kg)
    return ConvResult(inverse_transform(product, kout), Engine.SPECTRAL, tail)


def convolve(f: SampledFunction, g: SampledFunction, kind, engine="SPECTRAL") -> SampledFunction:
    """Convenience wrapper returning only the output function."""
    if Engine.coerce(engine) is Engine.DIRECT:
        return conv_direct(f, g, kind).output
    return conv_spectral(f, g, kind).output


def engine_compare(f: SampledFunction, g: SampledFunction, kind) -> float:
    """``||direct - spectral||_inf / max(||direct||_inf, tiny)``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        direct = conv_direct(f, g, kind).output
        spectral = conv_spectral(f, g, kind).output
    scale = max(lp_norm(direct, math.inf), _TINY)
    return lp_norm(direct - spectral, math.inf) / scale
