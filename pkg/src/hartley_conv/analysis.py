"""Numerical checks of the Young-type, weighted and ring inequalities.

Every checker evaluates both sides of one inequality on the grid and returns
an :class:`InequalityReport`.  An instance counts as satisfied when
``lhs <= rhs * (1 + 1e-9)``; the slack covers quadrature error when the
margin is close to zero.

The random families used by the sweeps are finite gaussian mixtures
``sum a_i exp(-((x - c_i)/w_i)^2)`` with centres in ``[-L/4, L/4]``, widths
in ``[0.3, 3]`` and amplitudes in ``[-2, 2]``; weights are positive sums of
``exp(-c|x|)``.
"""

from __future__ import annotations

import math
import warnings
import zlib
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .convolve import ConvKind, convolve
from .grid import (
    INF,
    ConfigurationError,
    DecayWarning,
    ExponentTriple,
    Grid,
    SampledFunction,
    WeightFunction,
    lp_norm,
    quadrature,
    weighted_lp_norm,
)

__all__ = [
    "SQRT_2_OVER_PI",
    "VIOLATION_TOL",
    "INEQUALITY_IDS",
    "InequalityReport",
    "SearchExhausted",
    "young_triple",
    "young_norm",
    "l1_bound",
    "linf_bound",
    "saitoh_weighted",
    "saitoh_corollary",
    "noncommutativity_witness",
    "submultiplicativity_check",
    "titchmarsh_trivial",
    "random_mixture",
    "random_weight",
    "random_exponents",
    "sweep",
    "SWEEPS",
]

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
VIOLATION_TOL = 1e-9

INEQUALITY_IDS = (
    "YOUNG_TRIPLE_HF",
    "YOUNG_NORM_HF",
    "L1_HF",
    "LINF_HF",
    "YOUNG_TRIPLE_H",
    "YOUNG_NORM_H",
    "L1_H",
    "SAITOH",
    "SAITOH_COR",
    "SUBMULT_HF",
)


class SearchExhausted(RuntimeError):
    """No non-commuting pair found in the candidate family."""


@dataclass
class InequalityReport:
    inequality_id: str
    lhs: float
    rhs: float
    exponents: ExponentTriple | None = None
    grid: Grid | None = None
    seed: int | None = None
    hypothesis_ok: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + VIOLATION_TOL)

    def to_dict(self) -> dict:
        out = {
            "inequality_id": self.inequality_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "exponents": self.exponents.as_dict() if self.exponents else None,
            "satisfied": self.satisfied,
            "grid": (
                {"L": self.grid.half_width, "N": self.grid.points} if self.grid else None
            ),
            "seed": self.seed,
        }
        if not self.hypothesis_ok:
            out["hypothesis_ok"] = False
        out.update(self.extra)
        return out


def _require_mode(e: ExponentTriple, mode: str):
    if e.mode != mode:
        raise ConfigurationError(f"expected {mode} exponents, got {e.mode}")


def _hartley_kind(kind) -> tuple[ConvKind, str]:
    k = str(kind).upper()
    if k == "HF":
        return ConvKind.HF, "HF"
    if k in ("H", "H1", "H1H1"):
        return ConvKind.H1H1, "H"
    if k in ("H2", "H2H2"):
        return ConvKind.H2H2, "H"
    raise ConfigurationError(f"kind must be HF or H, got {kind!r}")


def _conv(f, g, kind, engine):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        return convolve(f, g, kind, engine)


def young_triple(f, g, h, e: ExponentTriple, kind="HF", engine="DIRECT") -> InequalityReport:
    """``|int (f * g) h dx| <= sqrt(2/pi) ||.||_p ||.||_q ||h||_r``.

    The plain (unshifted) argument carries ``p`` and the shifted one ``q``:
    for HF that is ``g`` in ``L_p`` and ``f`` in ``L_q``; for the Hartley
    convolution ``f`` in ``L_p`` and ``g`` in ``L_q``.
    """
    _require_mode(e, "HOLDER")
    ckind, tag = _hartley_kind(kind)
    c = _conv(f, g, ckind, engine)
    lhs = abs(quadrature(c * h))
    plain, shifted = (g, f) if tag == "HF" else (f, g)
    rhs = SQRT_2_OVER_PI * lp_norm(plain, e.p) * lp_norm(shifted, e.q) * lp_norm(h, e.r)
    return InequalityReport(f"YOUNG_TRIPLE_{tag}", lhs, rhs, e, f.grid)


def young_norm(f, g, e: ExponentTriple, kind="HF", engine="DIRECT") -> InequalityReport:
    """``||f * g||_r <= sqrt(2/pi) ||.||_p ||.||_q`` with ``1/p + 1/q = 1 + 1/r``."""
    _require_mode(e, "YOUNG")
    ckind, tag = _hartley_kind(kind)
    lhs = lp_norm(_conv(f, g, ckind, engine), e.r)
    plain, shifted = (g, f) if tag == "HF" else (f, g)
    rhs = SQRT_2_OVER_PI * lp_norm(plain, e.p) * lp_norm(shifted, e.q)
    return InequalityReport(f"YOUNG_NORM_{tag}", lhs, rhs, e, f.grid)


def l1_bound(f, g, kind="HF", engine="DIRECT") -> InequalityReport:
    """``||f * g||_1 <= sqrt(2/pi) ||f||_1 ||g||_1``."""
    ckind, tag = _hartley_kind(kind)
    lhs = lp_norm(_conv(f, g, ckind, engine), 1)
    rhs = SQRT_2_OVER_PI * lp_norm(f, 1) * lp_norm(g, 1)
    return InequalityReport(f"L1_{tag}", lhs, rhs, None, f.grid)


def linf_bound(f, g, e: ExponentTriple, engine="DIRECT") -> InequalityReport:
    """``||f *HF g||_inf <= sqrt(2/pi) ||g||_p ||f||_q`` for conjugate ``p, q``."""
    _require_mode(e, "CONJ")
    lhs = lp_norm(_conv(f, g, ConvKind.HF, engine), INF)
    rhs = SQRT_2_OVER_PI * lp_norm(g, e.p) * lp_norm(f, e.q)
    return InequalityReport("LINF_HF", lhs, rhs, e, f.grid)


def _check_weight(rho: WeightFunction, name: str):
    if not rho.is_positive:
        k = int(np.argmin(rho.values))
        raise ConfigurationError(
            f"{name} must be strictly positive; it is {rho.values[k]:g} at node {k} "
            f"(x={rho.grid.nodes[k]:g})"
        )


def saitoh_weighted(F1, F2, rho1: WeightFunction, rho2: WeightFunction, p: float,
                    variant: int = 1, engine="DIRECT") -> InequalityReport:
    """Weighted bound for the Hartley convolution::

        ||(F1 rho1 * F2 rho2) (rho1 * rho2)^(1/p - 1)||_p
            <= sqrt(2/pi) ||F1||_{L_p(rho1)} ||F2||_{L_p(rho2)}
    """
    if not 1 < p < INF:
        raise ConfigurationError(f"p must lie in (1, inf), got {p}")
    _check_weight(rho1, "rho1")
    _check_weight(rho2, "rho2")
    kind = ConvKind.hartley(variant)
    weight_conv = _conv(rho1.as_function(), rho2.as_function(), kind, engine)
    wc = weight_conv.real
    if np.any(wc <= 0):
        k = int(np.argmin(wc))
        raise ConfigurationError(
            f"weight convolution is not positive at node {k} "
            f"(x={weight_conv.grid.nodes[k]:g}, value {wc[k]:g})"
        )
    num = _conv(F1 * rho1, F2 * rho2, kind, engine)
    lhs = lp_norm(num * SampledFunction(num.grid, wc ** (1.0 / p - 1.0)), p)
    rhs = SQRT_2_OVER_PI * weighted_lp_norm(F1, p, rho1) * weighted_lp_norm(F2, p, rho2)
    return InequalityReport("SAITOH", lhs, rhs, ExponentTriple.conjugate(p), F1.grid)


def saitoh_corollary(F1, rho1: WeightFunction, F2, p: float, variant: int = 1,
                     engine="DIRECT") -> InequalityReport:
    """Single-weight bound obtained by taking ``rho2 = 1``::

        ||F1 rho1 * F2||_p <= (1/pi) (2 pi)^(1/(2p)) ||rho1||_1^(1 - 1/p)
                              ||F1||_{L_p(rho1)} ||F2||_p
    """
    if not 1 < p < INF:
        raise ConfigurationError(f"p must lie in (1, inf), got {p}")
    _check_weight(rho1, "rho1")
    kind = ConvKind.hartley(variant)
    lhs = lp_norm(_conv(F1 * rho1, F2, kind, engine), p)
    rho_l1 = lp_norm(rho1.as_function(), 1)
    const = (2.0 * math.pi) ** (0.5 / p) / math.pi
    rhs = const * rho_l1 ** (1.0 - 1.0 / p) * weighted_lp_norm(F1, p, rho1) * lp_norm(F2, p)
    return InequalityReport("SAITOH_COR", lhs, rhs, ExponentTriple.conjugate(p), F1.grid)


def _relative_gap(f, g, engine) -> tuple[float, float]:
    fg = _conv(f, g, ConvKind.HF, engine)
    gf = _conv(g, f, ConvKind.HF, engine)
    scale = lp_norm(fg, INF)
    if scale == 0:
        return 0.0, 0.0
    return lp_norm(fg - gf, INF) / scale, scale


def _witness_family(grid: Grid) -> list[tuple[str, SampledFunction]]:
    x = grid.nodes
    fam = []
    for mu in (0.0, 0.5, 1.0, -1.5, 2.0):
        fam.append((f"gaussian(mu={mu})", SampledFunction(grid, np.exp(-((x - mu) ** 2)))))
    for c in (1.0, 2.0):
        fam.append((f"one_sided_exp(c={c})", SampledFunction(grid, np.where(x >= 0, np.exp(-c * x), 0.0))))
        fam.append((f"one_sided_exp(c={c}, left)", SampledFunction(grid, np.where(x <= 0, np.exp(c * x), 0.0))))
    return fam


def noncommutativity_witness(seed: int = 0, grid: Grid | None = None, threshold: float = 0.1,
                             engine="DIRECT"):
    """Find ``f, g`` with ``||f*g - g*f||_inf > threshold * ||f*g||_inf`` (HF).

    Candidate pairs from a small family of shifted gaussians and one-sided
    exponentials are visited in a seed-determined order; the first pair
    above ``threshold`` is returned as ``(f, g, gap)``.
    """
    grid = grid or Grid(20.0, 4096)
    fam = _witness_family(grid)
    pairs = [(i, j) for i in range(len(fam)) for j in range(len(fam)) if i != j]
    order = np.random.default_rng(seed).permutation(len(pairs))
    for idx in order:
        i, j = pairs[idx]
        gap, _ = _relative_gap(fam[i][1], fam[j][1], engine)
        if gap > threshold:
            return fam[i][1], fam[j][1], gap
    raise SearchExhausted(f"no pair with relative gap > {threshold} in {len(pairs)} candidates")


def submultiplicativity_check(f, g, engine="DIRECT") -> InequalityReport:
    """``||f *HF g||' <= ||f||' ||g||'`` with ``||u||' = (2/pi)^(1/4) ||u||_1``."""
    c = (2.0 / math.pi) ** 0.25
    lhs = c * lp_norm(_conv(f, g, ConvKind.HF, engine), 1)
    rhs = c * lp_norm(f, 1) * c * lp_norm(g, 1)
    return InequalityReport("SUBMULT_HF", lhs, rhs, None, f.grid)


def titchmarsh_trivial(f, kind="HF", engine="DIRECT") -> bool:
    """Convolving with the zero function gives exactly zero (both orders)."""
    zero = SampledFunction.zeros(f.grid)
    a = _conv(f, zero, kind, engine)
    b = _conv(zero, f, kind, engine)
    return bool(np.all(a.values == 0) and np.all(b.values == 0))


# -- random instances ---------------------------------------------------------------


def random_mixture(grid: Grid, rng: np.random.Generator, terms: int | None = None,
                   complex_valued: bool = False) -> SampledFunction:
    x = grid.nodes
    quarter = grid.half_width / 4.0
    if terms is None:
        terms = int(rng.integers(1, 5))
    vals = np.zeros(grid.points, dtype=complex)
    for _ in range(terms):
        c = rng.uniform(-quarter, quarter)
        w = rng.uniform(0.3, 3.0)
        a = rng.uniform(-2.0, 2.0)
        if complex_valued:
            a = a + 1j * rng.uniform(-2.0, 2.0)
        vals += a * np.exp(-(((x - c) / w) ** 2))
    if not np.any(vals):
        vals[grid.points // 2] = 1.0
    return SampledFunction(grid, vals)


def random_weight(grid: Grid, rng: np.random.Generator) -> WeightFunction:
    """Positive even weight ``sum a_i exp(-c_i |x|)``, ``c_i`` in ``[0.3, 1.5]``."""
    x = np.abs(grid.nodes)
    vals = np.zeros(grid.points)
    for _ in range(int(rng.integers(1, 3))):
        vals += rng.uniform(0.2, 2.0) * np.exp(-rng.uniform(0.3, 1.5) * x)
    return WeightFunction(grid, vals)


def random_exponents(mode: str, rng: np.random.Generator) -> ExponentTriple:
    """Random exponents satisfying the constraint of ``mode``.

    Reciprocals are kept in ``[0.05, 0.95]`` so that no exponent is
    numerically close to 1 or infinity.
    """
    if mode == "HOLDER":
        while True:
            d = rng.dirichlet([1.0, 1.0, 1.0])
            if np.all((d > 0.05) & (d < 0.95)):
                a = 1.0 - d  # reciprocals, sum 2
                return ExponentTriple.holder(*(1.0 / a))
    if mode == "YOUNG":
        while True:
            a, b = rng.uniform(0.05, 0.95, size=2)
            c = a + b - 1.0
            if 0.05 < c < 0.95:
                return ExponentTriple.young(1.0 / a, 1.0 / b, 1.0 / c)
    if mode == "CONJ":
        a = rng.uniform(0.05, 0.95)
        return ExponentTriple(1.0 / a, 1.0 / (1.0 - a), INF, mode="CONJ")
    raise ConfigurationError(f"no random generator for mode {mode!r}")


# Upper end of the exponent range used by the weighted sweeps; see README.
SAITOH_P_RANGE = (1.05, 4.0)


def _trial_rng(seed: int, name: str, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode()), int(index)])


def _t_young_triple(kind):
    def run(grid, rng, engine):
        f, g, h = (random_mixture(grid, rng) for _ in range(3))
        return young_triple(f, g, h, random_exponents("HOLDER", rng), kind, engine)
    return run


def _t_young_norm(kind):
    def run(grid, rng, engine):
        f, g = random_mixture(grid, rng), random_mixture(grid, rng)
        return young_norm(f, g, random_exponents("YOUNG", rng), kind, engine)
    return run


def _t_l1(kind):
    def run(grid, rng, engine):
        return l1_bound(random_mixture(grid, rng), random_mixture(grid, rng), kind, engine)
    return run


def _t_linf(grid, rng, engine):
    f, g = random_mixture(grid, rng), random_mixture(grid, rng)
    return linf_bound(f, g, random_exponents("CONJ", rng), engine)


def _t_saitoh(grid, rng, engine):
    F1, F2 = random_mixture(grid, rng), random_mixture(grid, rng)
    r1, r2 = random_weight(grid, rng), random_weight(grid, rng)
    p = rng.uniform(*SAITOH_P_RANGE)
    return saitoh_weighted(F1, F2, r1, r2, p, int(rng.integers(1, 3)), engine)


def _t_saitoh_cor(grid, rng, engine):
    F1, F2 = random_mixture(grid, rng), random_mixture(grid, rng)
    r1 = random_weight(grid, rng)
    p = rng.uniform(*SAITOH_P_RANGE)
    return saitoh_corollary(F1, r1, F2, p, int(rng.integers(1, 3)), engine)


def _t_submult(grid, rng, engine):
    return submultiplicativity_check(random_mixture(grid, rng), random_mixture(grid, rng), engine)


SWEEPS: dict[str, Callable] = {
    "YOUNG_TRIPLE_HF": _t_young_triple("HF"),
    "YOUNG_NORM_HF": _t_young_norm("HF"),
    "L1_HF": _t_l1("HF"),
    "LINF_HF": _t_linf,
    "YOUNG_TRIPLE_H": _t_young_triple("H"),
    "YOUNG_NORM_H": _t_young_norm("H"),
    "L1_H": _t_l1("H"),
    "SAITOH": _t_saitoh,
    "SAITOH_COR": _t_saitoh_cor,
    "SUBMULT_HF": _t_submult,
}


def sweep(inequality_id: str, trials: int, seed: int = 42, grid: Grid | None = None,
          engine="DIRECT") -> Iterator[InequalityReport]:
    """Yield one report per seeded random instance of ``inequality_id``.

    Instance ``i`` depends only on ``(seed, inequality_id, i)``, so reports
    are reproducible and independent of evaluation order.
    """
    if inequality_id not in SWEEPS:
        raise ConfigurationError(f"unknown inequality {inequality_id!r}")
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    grid = grid or Grid(20.0, 4096)
    run = SWEEPS[inequality_id]
    for i in range(trials):
        report = run(grid, _trial_rng(seed, inequality_id, i), engine)
        report.seed = seed
        report.extra["trial"] = i
        yield report
