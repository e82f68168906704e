"""Uniform discretisation of a truncated real line, sampled functions and norms.

Every integral over the real line is replaced by a trapezoidal sum on the
window ``[-L, L)`` sampled at ``N`` equispaced nodes ``x_k = -L + k*h`` with
``h = 2L/N``.  ``N`` is even so that ``x = 0`` is a node (index ``N/2``),
which keeps the kink of ``exp(-|x|)`` on a node.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Mapping, Union

import numpy as np

__all__ = [
    "INF",
    "ConfigurationError",
    "DecayWarning",
    "Grid",
    "FrequencyGrid",
    "SampledFunction",
    "WeightFunction",
    "ExponentTriple",
    "ClosedForm",
    "CLOSED_FORMS",
    "make_grid",
    "sample",
    "quadrature",
    "trapezoid_weights",
    "lp_norm",
    "weighted_lp_norm",
    "tail_ratio",
    "check_decay",
    "DECAY_GUARD",
]

INF = math.inf

# Relative amplitude at the window edges above which decay is considered violated.
DECAY_GUARD = 1e-6

_EXPONENT_TOL = 1e-12


class ConfigurationError(ValueError):
    """Invalid grid, exponent or function configuration."""


class DecayWarning(UserWarning):
    """A sampled function does not decay towards the edges of the window."""


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on ``[-L, L)`` with ``N`` nodes."""

    half_width: float
    points: int

    def __post_init__(self):
        if not (isinstance(self.points, (int, np.integer)) and not isinstance(self.points, bool)):
            raise ConfigurationError(f"point count must be an integer, got {self.points!r}")
        if self.points < 8:
            raise ConfigurationError(f"point count must be at least 8, got {self.points}")
        if self.points % 2:
            raise ConfigurationError(f"point count must be even, got {self.points}")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ConfigurationError(f"half width must be positive, got {self.half_width}")
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "points", int(self.points))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    h = spacing

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -self.half_width + self.spacing * np.arange(self.points)
        x.flags.writeable = False
        return x

    @property
    def frequencies(self) -> "FrequencyGrid":
        """The conjugate frequency grid with spacing ``pi / L``."""
        return FrequencyGrid(self.half_width, self.points)


@dataclass(frozen=True)
class FrequencyGrid:
    """Angular frequencies ``y_m = m*pi/L`` for ``m = -N/2 .. N/2-1``.

    Stored in increasing order, index ``j`` holding ``m = j - N/2``.  With
    this spacing ``x_k * y_j = 2*pi*(k - N/2)*(j - N/2)/N``, so a trapezoidal
    transform sampled here is exactly a centred length-``N`` DFT.
    """

    half_width: float
    points: int

    def __post_init__(self):
        Grid(self.half_width, self.points)  # same validation
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "points", int(self.points))

    @property
    def spacing(self) -> float:
        return math.pi / self.half_width

    @cached_property
    def nodes(self) -> np.ndarray:
        y = self.spacing * (np.arange(self.points) - self.points // 2)
        y.flags.writeable = False
        return y

    @property
    def spatial(self) -> Grid:
        return Grid(self.half_width, self.points)


AnyGrid = Union[Grid, FrequencyGrid]


def make_grid(half_width: float = 20.0, points: int = 4096) -> Grid:
    """Build a :class:`Grid`; raises :class:`ConfigurationError` on bad input."""
    return Grid(half_width, points)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on a spatial or frequency grid.

    Values are stored as ``complex128`` even for real functions and are
    read-only after construction.
    """

    grid: AnyGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.grid.points,):
            raise ConfigurationError(
                f"expected {self.grid.points} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("sampled values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, grid: AnyGrid) -> "SampledFunction":
        return cls(grid, np.zeros(grid.points))

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag

    def is_real(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= atol))

    def _check_same_grid(self, other: "SampledFunction"):
        if self.grid != other.grid:
            raise ConfigurationError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same_grid(other)
            return SampledFunction(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same_grid(other)
            return SampledFunction(self.grid, self.values - other.values)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            self._check_same_grid(other)
            return SampledFunction(self.grid, self.values * other.values)
        if isinstance(other, WeightFunction):
            if other.grid != self.grid:
                raise ConfigurationError("grid mismatch between function and weight")
            return SampledFunction(self.grid, self.values * other.values)
        if np.isscalar(other):
            return SampledFunction(self.grid, self.values * other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)

    def reflect(self) -> "SampledFunction":
        """Samples of ``x -> f(-x)``.

        Node ``k`` maps to ``N - k``; the left edge ``-L`` maps onto itself
        (its mirror ``+L`` is the periodic image of ``-L``).
        """
        return SampledFunction(self.grid, _reflect(self.values))

    def conj(self) -> "SampledFunction":
        return SampledFunction(self.grid, np.conj(self.values))

    def to_csv(self, path) -> Path:
        """Write ``x,re,im`` rows with 17 significant digits."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "re", "im"])
            for x, v in zip(self.nodes, self.values):
                writer.writerow([f"{x:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
        return path

    @classmethod
    def from_csv(cls, path, grid: AnyGrid) -> "SampledFunction":
        with Path(path).open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != ["x", "re", "im"]:
                raise ConfigurationError(f"unexpected CSV header {header}")
            rows = np.array([[float(c) for c in row] for row in reader])
        if rows.shape != (grid.points, 3):
            raise ConfigurationError(f"CSV has {rows.shape[0]} rows, grid has {grid.points}")
        if not np.allclose(rows[:, 0], grid.nodes, rtol=0, atol=1e-12 * grid.half_width):
            raise ConfigurationError("CSV nodes do not match the grid")
        return cls(grid, rows[:, 1] + 1j * rows[:, 2])


def _reflect(values: np.ndarray) -> np.ndarray:
    out = np.empty_like(values)
    out[0] = values[0]
    out[1:] = values[:0:-1]
    return out


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Nonnegative real weight sampled on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (self.grid.points,):
            raise ConfigurationError(f"expected {self.grid.points} weight samples")
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("weight values must be finite")
        if np.any(vals < 0):
            k = int(np.argmin(vals))
            raise ConfigurationError(f"weight is negative at node {k} (x={self.grid.nodes[k]:g})")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f: SampledFunction, atol: float = 1e-12) -> "WeightFunction":
        if not f.is_real(atol=atol * max(1.0, np.abs(f.values).max())):
            raise ConfigurationError("weight must be real-valued")
        return cls(f.grid, f.real)

    @classmethod
    def ones(cls, grid: Grid) -> "WeightFunction":
        return cls(grid, np.ones(grid.points))

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.values > 0))

    def as_function(self) -> SampledFunction:
        return SampledFunction(self.grid, self.values)


@dataclass(frozen=True)
class ExponentTriple:
    """Exponents for the Young/Hoelder-type bounds.

    ``mode`` fixes which constraint the exponents satisfy:

    ``HOLDER``  ``1/p + 1/q + 1/r = 2``
    ``YOUNG``   ``1/p + 1/q = 1 + 1/r``
    ``CONJ``    ``1/p + 1/q = 1``  (``r`` is ``INF``)
    ``FOUR``    ``1/p + 1/q + 1/r = 2 + 1/s``
    """

    p: float
    q: float
    r: float = INF
    s: float | None = None
    mode: str = "HOLDER"
    validate: bool = field(default=True, repr=False, compare=False)

    MODES = ("HOLDER", "YOUNG", "CONJ", "FOUR")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise ConfigurationError(f"unknown exponent mode {self.mode!r}")
        if self.validate:
            problem = self.violation()
            if problem:
                raise ConfigurationError(problem)

    @classmethod
    def holder(cls, p, q, r):
        return cls(p, q, r, mode="HOLDER")

    @classmethod
    def young(cls, p, q, r):
        return cls(p, q, r, mode="YOUNG")

    @classmethod
    def conjugate(cls, p, q=None):
        if q is None:
            q = INF if p == 1 else p / (p - 1)
        return cls(p, q, INF, mode="CONJ")

    @classmethod
    def four(cls, p, q, r, s, validate=True):
        return cls(p, q, r, s, mode="FOUR", validate=validate)

    def violation(self) -> str | None:
        """Return a description of the violated hypothesis, or ``None``."""
        inv = lambda t: 0.0 if t == INF else 1.0 / t  # noqa: E731
        finite = [("p", self.p), ("q", self.q)]
        if self.mode != "CONJ":
            finite.append(("r", self.r))
        if self.mode == "FOUR":
            if self.s is None:
                return "FOUR mode needs the exponent s"
            finite.append(("s", self.s))
        for name, val in finite:
            if not (1 < val < INF):
                return f"exponent {name}={val} must lie in (1, inf)"
        if self.mode == "HOLDER":
            lhs, rhs = inv(self.p) + inv(self.q) + inv(self.r), 2.0
        elif self.mode == "YOUNG":
            lhs, rhs = inv(self.p) + inv(self.q), 1.0 + inv(self.r)
        elif self.mode == "CONJ":
            if self.r != INF:
                return "CONJ mode requires r = inf"
            lhs, rhs = inv(self.p) + inv(self.q), 1.0
        else:
            lhs, rhs = inv(self.p) + inv(self.q) + inv(self.r), 2.0 + inv(self.s)
        if abs(lhs - rhs) > _EXPONENT_TOL:
            return f"{self.mode} exponents violate their constraint: {lhs!r} != {rhs!r}"
        return None

    @property
    def hypothesis_ok(self) -> bool:
        return self.violation() is None

    @staticmethod
    def _conj(t):
        if t == INF:
            return 1.0
        if t == 1:
            return INF
        return t / (t - 1.0)

    @property
    def p1(self):
        return self._conj(self.p)

    @property
    def q1(self):
        return self._conj(self.q)

    @property
    def r1(self):
        return self._conj(self.r)

    def as_dict(self) -> dict:
        out = {"p": _jsonable(self.p), "q": _jsonable(self.q), "r": _jsonable(self.r)}
        if self.s is not None:
            out["s"] = _jsonable(self.s)
        return out


def _jsonable(t):
    return "inf" if t == INF else t


# -- closed-form function library -------------------------------------------------


def _exp_abs(x, a=1.0, c=1.0, mu=0.0):
    return a * np.exp(-c * np.abs(x - mu))


def _gaussian(x, a=1.0, s=1.0, mu=0.0):
    return a * np.exp(-((x - mu) ** 2) / (2.0 * s * s))


def _x_gaussian(x, a=1.0, s=1.0, mu=0.0):
    return a * (x - mu) * np.exp(-((x - mu) ** 2) / (2.0 * s * s))


def _one_sided_exp(x, a=1.0, c=1.0, mu=0.0):
    t = x - mu
    return np.where(t >= 0, a * np.exp(-c * np.abs(t)), 0.0)


def _zero(x):
    return np.zeros_like(x)


def _constant(x, a=1.0):
    return np.full_like(x, a, dtype=float)


CLOSED_FORMS: dict[str, Callable[..., np.ndarray]] = {
    "exp_abs": _exp_abs,
    "gaussian": _gaussian,
    "gauss": _gaussian,
    "x_gaussian": _x_gaussian,
    "one_sided_exp": _one_sided_exp,
    "zero": _zero,
    "constant": _constant,
}


@dataclass(frozen=True)
class ClosedForm:
    """A named closed-form function with keyword parameters.

    >>> ClosedForm.parse("exp_abs:a=1.2533,c=1")
    ClosedForm(name='exp_abs', params=(('a', 1.2533), ('c', 1.0)))
    """

    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in CLOSED_FORMS:
            known = ", ".join(sorted(CLOSED_FORMS))
            raise ConfigurationError(f"unknown function {self.name!r} (known: {known})")
        if isinstance(self.params, Mapping):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))

    @classmethod
    def of(cls, name: str, **params) -> "ClosedForm":
        return cls(name, tuple(sorted((k, float(v)) for k, v in params.items())))

    @classmethod
    def parse(cls, spec: str) -> "ClosedForm":
        """Parse ``name`` or ``name:key=val,key=val``."""
        name, _, rest = spec.strip().partition(":")
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ConfigurationError(f"malformed parameter {item!r} in {spec!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise ConfigurationError(f"parameter {key!r} is not a number: {val!r}") from None
        return cls.of(name.strip(), **params)

    def __call__(self, x):
        try:
            return CLOSED_FORMS[self.name](np.asarray(x, dtype=float), **dict(self.params))
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for {self.name!r}: {exc}") from None

    def __str__(self):
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v!r}" for k, v in self.params)


def sample(expr, grid: Grid) -> SampledFunction:
    """Evaluate a closed form (``ClosedForm``, spec string or callable) at the nodes."""
    if isinstance(expr, str):
        expr = ClosedForm.parse(expr)
    return SampledFunction(grid, expr(grid.nodes))


# -- quadrature and norms ----------------------------------------------------------


def trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def quadrature(f: SampledFunction) -> complex:
    """Trapezoidal rule ``h*(f_0/2 + f_1 + ... + f_{N-2} + f_{N-1}/2)``."""
    v = f.values
    return complex(f.grid.spacing * (v.sum() - 0.5 * (v[0] + v[-1])))


def _real_quadrature(grid: AnyGrid, values: np.ndarray) -> float:
    return float(grid.spacing * (values.sum() - 0.5 * (values[0] + values[-1])))


def lp_norm(f: SampledFunction, p: float) -> float:
    """Discrete ``L_p`` norm; ``p = INF`` gives the maximum modulus."""
    if not p >= 1:
        raise ConfigurationError(f"norm exponent must be >= 1, got {p}")
    a = np.abs(f.values)
    if p == INF:
        return float(a.max())
    if p == 1:
        return _real_quadrature(f.grid, a)
    # factor out the peak so large p cannot overflow
    peak = a.max()
    if peak == 0:
        return 0.0
    return float(peak * _real_quadrature(f.grid, (a / peak) ** p) ** (1.0 / p))


def weighted_lp_norm(f: SampledFunction, p: float, w: WeightFunction) -> float:
    """``(int |f|^p w dx)^(1/p)`` for finite ``p >= 1``."""
    if not (1 <= p < INF):
        raise ConfigurationError(f"weighted norm exponent must be finite and >= 1, got {p}")
    if w.grid != f.grid:
        raise ConfigurationError("grid mismatch between function and weight")
    a = np.abs(f.values)
    peak = a.max()
    if peak == 0:
        return 0.0
    return float(peak * _real_quadrature(f.grid, (a / peak) ** p * w.values) ** (1.0 / p))


def tail_ratio(f: SampledFunction) -> float:
    """Largest edge modulus relative to the peak modulus (0 for the zero function)."""
    a = np.abs(f.values)
    peak = a.max()
    if peak == 0:
        return 0.0
    return float(max(a[0], a[-1]) / peak)


def check_decay(f: SampledFunction, name: str = "function", guard: float = DECAY_GUARD) -> bool:
    """Warn with :class:`DecayWarning` if ``f`` is not small at the window edges.

    Returns True when a warning was emitted.
    """
    ratio = tail_ratio(f)
    if ratio > guard:
        warnings.warn(
            f"{name} does not decay at the window edges "
            f"(edge/peak = {ratio:.3g} > {guard:g}); truncation may be inaccurate",
            DecayWarning,
            stacklevel=3,
        )
        return True
    return False
