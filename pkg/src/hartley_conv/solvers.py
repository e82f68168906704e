"""Resolvent construction and the three convolution-type equation solvers.

Each solver builds its solution on the spectral path (transform, divide,
invert, convolve) and then verifies it by substituting back into the
equation with the *direct* convolution engine, so the residual does not
reuse the factorisation that produced the solution.

Equations (``*HF`` Hartley-Fourier, ``*H`` Hartley convolution)::

    Fredholm   f + f *H phi = phi *HF xi
    Barbashin  (1 - d^2/dx^2)(f *H g) + f *H h = h *H xi,   g = sqrt(pi/2) e^{-|x|}
    Cauchy     f - f'' + (1 - d^2/dx^2)(f *HF g) = h *HF g,  f, f' -> 0 at infinity
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .convolve import ConvKind, conv_direct, convolve
from .grid import (
    INF,
    ClosedForm,
    ConfigurationError,
    DecayWarning,
    ExponentTriple,
    Grid,
    SampledFunction,
    check_decay,
    lp_norm,
    sample,
)
from .analysis import SQRT_2_OVER_PI, InequalityReport
from .transforms import TransformKind, inverse_hartley, inverse_transform, transform

__all__ = [
    "EPSILON_DENOMINATOR",
    "NearSingularError",
    "DecayViolation",
    "Resolvent",
    "SolveReport",
    "wiener_levy_resolvent",
    "helmholtz_apply",
    "second_derivative_fd",
    "first_derivative_fd",
    "fredholm_residual",
    "barbashin_residual",
    "cauchy_residual",
    "solve_fredholm",
    "solve_barbashin",
    "solve_cauchy",
    "decay_check",
    "lr_bound_check",
    "exp_abs_kernel",
]

EPSILON_DENOMINATOR = 1e-8
L1_BOUND_SLACK = 1e-6
_TINY = 1e-300
_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


class NearSingularError(ArithmeticError):
    """``1 + T(phi)`` comes within ``epsilon`` of zero on the frequency grid."""

    def __init__(self, y: float, modulus: float, kind: TransformKind, epsilon: float):
        self.y = y
        self.modulus = modulus
        self.kind = kind
        self.epsilon = epsilon
        super().__init__(
            f"NEAR_SINGULAR: |1 + ({kind.value} phi)(y)| = {modulus:.3g} <= {epsilon:g} "
            f"at y = {y:.6g}; the resolvent does not exist"
        )


class DecayViolation(RuntimeError):
    """The solution does not satisfy ``f, f' -> 0`` at the window edges."""

    def __init__(self, report: "SolveReport"):
        self.report = report
        d = report.decay_check or {}
        super().__init__(
            "DECAY_VIOLATION: tail max |f| = {:.3g}, |f'| = {:.3g}".format(
                d.get("max_tail_f", float("nan")), d.get("max_tail_fprime", float("nan"))
            )
        )


@dataclass(frozen=True)
class Resolvent:
    """``ell`` with ``T(ell) = T(phi) / (1 + T(phi))`` on the frequency grid."""

    ell: SampledFunction
    transform_kind: TransformKind
    denominator_min: float
    denominator_argmin_y: float

    def summary(self) -> dict:
        return {
            "transform_kind": self.transform_kind.value,
            "denominator_min": self.denominator_min,
            "denominator_argmin_y": self.denominator_argmin_y,
        }


@dataclass
class SolveReport:
    equation: str
    solution: SampledFunction
    residual_l1: float
    residual_rel: float
    l1_bound_lhs: float
    l1_bound_rhs: float
    resolvent: Resolvent
    decay_check: dict | None = None
    components: dict = field(default_factory=dict, repr=False)

    @property
    def grid(self) -> Grid:
        return self.solution.grid

    @property
    def l1_bound_satisfied(self) -> bool:
        return self.l1_bound_lhs <= self.l1_bound_rhs * (1.0 + L1_BOUND_SLACK)

    def to_dict(self) -> dict:
        out = {
            "equation": self.equation,
            "grid": {"L": self.grid.half_width, "N": self.grid.points},
            "resolvent": self.resolvent.summary(),
            "residual_l1": self.residual_l1,
            "residual_rel": self.residual_rel,
            "l1_bound": {
                "lhs": self.l1_bound_lhs,
                "rhs": self.l1_bound_rhs,
                "satisfied": self.l1_bound_satisfied,
            },
        }
        if self.decay_check is not None:
            out["decay_check"] = dict(self.decay_check)
        return out


def exp_abs_kernel(grid: Grid) -> SampledFunction:
    """``sqrt(pi/2) exp(-|x|)``, whose H1, H2 and F transforms are ``1/(1+y^2)``."""
    return sample(ClosedForm.of("exp_abs", a=_SQRT_HALF_PI, c=1.0), grid)


def wiener_levy_resolvent(phi: SampledFunction, kind=TransformKind.H1,
                          epsilon: float = EPSILON_DENOMINATOR) -> Resolvent:
    """Divide ``T(phi)`` by ``1 + T(phi)`` pointwise and invert.

    Raises :class:`NearSingularError` when ``min |1 + T(phi)| <= epsilon``.
    Emits :class:`DecayWarning` when ``ell`` is not small at the window
    edges; the series ``sum (-T phi)^n`` places mass near multiples of the
    centre of ``phi``, so off-centre kernels can have wide resolvents.
    """
    kind = TransformKind.coerce(kind)
    tphi = transform(phi, kind)
    denom = 1.0 + tphi.values
    mod = np.abs(denom)
    k = int(np.argmin(mod))
    y = float(tphi.grid.nodes[k])
    if not mod[k] > epsilon:
        raise NearSingularError(y, float(mod[k]), kind, epsilon)
    ratio = SampledFunction(tphi.grid, tphi.values / denom)
    ell = inverse_transform(ratio, kind)
    check_decay(ell, "resolvent")
    return Resolvent(ell, kind, float(mod[k]), y)


def second_derivative_fd(u: SampledFunction) -> SampledFunction:
    """Central second difference; second-order one-sided stencils at the edges."""
    v = u.values
    h2 = u.grid.spacing ** 2
    d2 = np.empty_like(v)
    d2[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / h2
    d2[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2
    d2[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h2
    return SampledFunction(u.grid, d2)


def first_derivative_fd(u: SampledFunction) -> SampledFunction:
    return SampledFunction(u.grid, np.gradient(u.values, u.grid.spacing, edge_order=2))


def helmholtz_apply(u: SampledFunction, method: str = "SPECTRAL") -> SampledFunction:
    """Apply ``1 - d^2/dx^2``.

    ``SPECTRAL`` multiplies the H1 transform by ``1 + y^2``; ``FD`` uses
    finite differences and serves as an independent check.
    """
    method = method.upper()
    if method == "SPECTRAL":
        hu = transform(u, TransformKind.H1)
        y = hu.grid.nodes
        return inverse_hartley(SampledFunction(hu.grid, (1.0 + y * y) * hu.values), 1)
    if method == "FD":
        return u - second_derivative_fd(u)
    raise ConfigurationError(f"unknown Helmholtz method {method!r}")


def _quiet_direct(f, g, kind) -> SampledFunction:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        return conv_direct(f, g, kind).output


def _rel(residual: SampledFunction, rhs: SampledFunction) -> tuple[float, float]:
    r1 = lp_norm(residual, 1)
    return r1, r1 / max(lp_norm(rhs, 1), _TINY)


def fredholm_residual(f, phi, xi, variant: int = 1) -> tuple[SampledFunction, SampledFunction]:
    """Return ``(defect, right-hand side)`` of ``f + f *H phi = phi *HF xi``."""
    rhs = _quiet_direct(phi, xi, ConvKind.HF)
    defect = f + _quiet_direct(f, phi, ConvKind.hartley(variant)) - rhs
    return defect, rhs


def barbashin_residual(f, g, h, xi, variant: int = 1, method: str = "SPECTRAL"):
    """Defect of ``(1 - d^2)(f *H g) + f *H h = h *H xi`` for any ``g``."""
    kind = ConvKind.hartley(variant)
    rhs = _quiet_direct(h, xi, kind)
    defect = helmholtz_apply(_quiet_direct(f, g, kind), method) + _quiet_direct(f, h, kind) - rhs
    return defect, rhs


def cauchy_residual(f, g, h, method: str = "SPECTRAL"):
    """Defect of ``f - f'' + (1 - d^2)(f *HF g) = h *HF g`` (``f''`` by FD)."""
    rhs = _quiet_direct(h, g, ConvKind.HF)
    defect = (f - second_derivative_fd(f)
              + helmholtz_apply(_quiet_direct(f, g, ConvKind.HF), method) - rhs)
    return defect, rhs


def solve_fredholm(phi: SampledFunction, xi: SampledFunction, engine="SPECTRAL",
                   epsilon: float = EPSILON_DENOMINATOR) -> SolveReport:
    """Solve ``f + f *H phi = phi *HF xi`` as ``f = ell *HF xi``."""
    res = wiener_levy_resolvent(phi, TransformKind.H1, epsilon)
    f = convolve(res.ell, xi, ConvKind.HF, engine)
    defect, rhs = fredholm_residual(f, phi, xi)
    r1, rel = _rel(defect, rhs)
    bound = SQRT_2_OVER_PI * lp_norm(res.ell, 1) * lp_norm(xi, 1)
    return SolveReport("fredholm", f, r1, rel, lp_norm(f, 1), bound, res,
                       components={"ell": res.ell, "xi": xi, "phi": phi})


def solve_barbashin(h_fn: SampledFunction, xi: SampledFunction, variant: int = 1,
                    method: str = "SPECTRAL", engine="SPECTRAL",
                    epsilon: float = EPSILON_DENOMINATOR) -> SolveReport:
    """Solve the convolution Barbashin equation with ``g = sqrt(pi/2) e^{-|x|}``.

    ``f = eta *H xi`` where ``H eta = H h / (1 + H h)``; ``variant`` picks H1
    or H2 throughout and ``method`` the Helmholtz evaluation in the residual.
    """
    kind = TransformKind.hartley(variant)
    res = wiener_levy_resolvent(h_fn, kind, epsilon)
    f = convolve(res.ell, xi, ConvKind.hartley(variant), engine)
    g = exp_abs_kernel(h_fn.grid)
    defect, rhs = barbashin_residual(f, g, h_fn, xi, variant, method)
    r1, rel = _rel(defect, rhs)
    bound = SQRT_2_OVER_PI * lp_norm(res.ell, 1) * lp_norm(xi, 1)
    return SolveReport(f"barbashin_h{variant}", f, r1, rel, lp_norm(f, 1), bound, res,
                       components={"eta": res.ell, "xi": xi, "h": h_fn})


def decay_check(f: SampledFunction, fraction: float = 0.1, threshold: float = 1e-3) -> dict:
    """Check ``max(|f|, |f'|)`` over the outer ``fraction`` of the window."""
    grid = f.grid
    tail = np.abs(grid.nodes) >= (1.0 - fraction) * grid.half_width
    fp = first_derivative_fd(f)
    peak = lp_norm(f, INF)
    max_f = float(np.abs(f.values[tail]).max())
    max_fp = float(np.abs(fp.values[tail]).max())
    limit = threshold * peak
    return {
        "max_tail_f": max_f,
        "max_tail_fprime": max_fp,
        "limit": limit,
        "passed": bool(max(max_f, max_fp) <= limit),
    }


def solve_cauchy(g_fn: SampledFunction, h_fn: SampledFunction, method: str = "SPECTRAL",
                 engine="SPECTRAL", epsilon: float = EPSILON_DENOMINATOR,
                 strict: bool = True) -> SolveReport:
    """Solve the Cauchy-type problem as ``f = (h *HF xi) *HF sqrt(pi/2) e^{-|t|}``.

    ``xi`` is the Fourier resolvent of ``g``.  With ``strict`` a failed
    decay check raises :class:`DecayViolation` (the report is attached).
    """
    grid = h_fn.grid
    for name, d in (("h'", first_derivative_fd(h_fn)), ("h''", second_derivative_fd(h_fn))):
        check_decay(d, name)
    res = wiener_levy_resolvent(g_fn, TransformKind.F, epsilon)
    inner = convolve(h_fn, res.ell, ConvKind.HF, engine)
    f = convolve(inner, exp_abs_kernel(grid), ConvKind.HF, engine)
    defect, rhs = cauchy_residual(f, g_fn, h_fn, method)
    r1, rel = _rel(defect, rhs)
    bound = 2.0 * SQRT_2_OVER_PI * lp_norm(h_fn, 1) * lp_norm(res.ell, 1)
    report = SolveReport("cauchy", f, r1, rel, lp_norm(f, 1), bound, res,
                         decay_check=decay_check(f),
                         components={"xi": res.ell, "h": h_fn, "g": g_fn})
    if strict and not report.decay_check["passed"]:
        raise DecayViolation(report)
    return report


_LR_MODES = {"FREDHOLM": "YOUNG", "BARBASHIN": "YOUNG", "CAUCHY": "FOUR"}


def lr_bound_check(report: SolveReport, e: ExponentTriple, which: str,
                   strict: bool = True) -> InequalityReport:
    """``L_r`` (``L_s`` for Cauchy) estimate of a computed solution.

    FREDHOLM / BARBASHIN: ``||f||_r <= sqrt(2/pi) ||kernel||_p ||xi||_q``.
    CAUCHY: ``||f||_s <= sqrt(2/pi) (2/r)^(1/r) ||h||_p ||xi||_q``.

    With ``strict=False`` the inequality is evaluated even when the
    exponents miss their constraint; the report then has
    ``hypothesis_ok = False``.
    """
    which = which.upper()
    if which not in _LR_MODES:
        raise ConfigurationError(f"unknown equation {which!r}")
    if e.mode != _LR_MODES[which]:
        raise ConfigurationError(f"{which} needs {_LR_MODES[which]} exponents, got {e.mode}")
    ok = e.hypothesis_ok
    if strict and not ok:
        raise ConfigurationError(e.violation())
    comp = report.components
    f = report.solution
    if which == "CAUCHY":
        lhs = lp_norm(f, e.s)
        rhs = (SQRT_2_OVER_PI * (2.0 / e.r) ** (1.0 / e.r)
               * lp_norm(comp["h"], e.p) * lp_norm(comp["xi"], e.q))
    else:
        kernel = comp["ell"] if which == "FREDHOLM" else comp["eta"]
        lhs = lp_norm(f, e.r)
        rhs = SQRT_2_OVER_PI * lp_norm(kernel, e.p) * lp_norm(comp["xi"], e.q)
    return InequalityReport(f"LR_{which}", lhs, rhs, e, f.grid, hypothesis_ok=ok)
