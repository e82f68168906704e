"""Command-line front end.

Usage::

    hartley-conv [--half-width L] [--points N] [--tol T] [--seed S] [--out DIR] COMMAND ...

    transform --fn SPEC --kind {H1,H2,F}
    convolve  --f SPEC --g SPEC --kind {HF,H1H1,H2H2,FOURIER} [--engine E] [--compare]
    verify    --suite {young,saitoh,ring,all} --trials N
    example   {1,2,3}
    bench     [--kinds HF,H1H1] [--sizes 256,1024,4096] [--repeats 3]

A JSON summary goes to stdout and CSV/JSON artifacts go to the output
directory (``HARTLEY_CONV_OUT`` overrides ``--out``).  Exit status is 0 when
every check passes, 1 when a check fails and 2 on a usage or configuration
error.  Wall-clock figures appear only under ``"timing"`` keys.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from .analysis import (
    SearchExhausted,
    noncommutativity_witness,
    random_mixture,
    saitoh_corollary,
    sweep,
    titchmarsh_trivial,
)
from .convolve import ConvKind, Engine, conv_direct, conv_spectral, engine_compare
from .grid import (
    INF,
    ClosedForm,
    ConfigurationError,
    DecayWarning,
    ExponentTriple,
    Grid,
    SampledFunction,
    WeightFunction,
    lp_norm,
    sample,
)
from .solvers import (
    DecayViolation,
    NearSingularError,
    exp_abs_kernel,
    lr_bound_check,
    solve_barbashin,
    solve_cauchy,
    solve_fredholm,
)
from .transforms import TransformKind, reference_transform, transform, transform_direct

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ENV_OUT = "HARTLEY_CONV_OUT"
REFERENCE_WINDOW = 5.0
BENCH_SPEEDUP = 20.0
BENCH_SPEEDUP_N = 4096
L1_SLACK = 1e-6

SUITES = {
    "young": ("YOUNG_TRIPLE_HF", "YOUNG_NORM_HF", "L1_HF", "LINF_HF",
              "YOUNG_TRIPLE_H", "YOUNG_NORM_H", "L1_H"),
    "saitoh": ("SAITOH", "SAITOH_COR"),
    "ring": ("SUBMULT_HF",),
}

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class UsageError(Exception):
    pass


# -- helpers -------------------------------------------------------------------------


def _grid(args) -> Grid:
    return Grid(args.half_width, args.points)


def _out_dir(args) -> Path:
    path = Path(os.environ.get(ENV_OUT) or args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _grid_dict(grid: Grid) -> dict:
    return {"L": grid.half_width, "N": grid.points}


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, default=_json_default) + "\n")


def _rel_inf(a: np.ndarray, b: np.ndarray) -> float:
    scale = float(np.abs(b).max()) if b.size else 0.0
    err = float(np.abs(a - b).max()) if a.size else 0.0
    return err / scale if scale > 0 else err


def _csv_list(text: str, convert) -> list:
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        return [convert(s) for s in items]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


# -- transform -----------------------------------------------------------------------


def cmd_transform(args) -> int:
    grid = _grid(args)
    expr = ClosedForm.parse(args.fn)
    kind = TransformKind.coerce(args.kind)
    f = sample(expr, grid)
    out = transform(f, kind)
    path = out.to_csv(_out_dir(args) / f"transform_{kind.value}.csv")

    direct = transform_direct(f, kind)
    checks = {"direct_error": _rel_inf(out.values, direct.values)}
    try:
        ref = reference_transform(expr, kind)
    except ConfigurationError:
        ref = None
    if ref is not None:
        y = out.grid.nodes
        win = np.abs(y) <= REFERENCE_WINDOW
        checks["reference_error"] = _rel_inf(out.values[win], ref(y[win]))
    passed = all(v <= args.tol for v in checks.values())
    _emit({
        "command": "transform",
        "fn": str(expr),
        "kind": kind.value,
        "grid": _grid_dict(grid),
        "csv": path,
        "checks": checks,
        "tol": args.tol,
        "passed": passed,
    })
    return EXIT_OK if passed else EXIT_FAIL


# -- convolve ------------------------------------------------------------------------


def cmd_convolve(args) -> int:
    grid = _grid(args)
    f, g = sample(args.f, grid), sample(args.g, grid)
    kind = ConvKind.coerce(args.kind)
    engine = Engine.coerce(args.engine)
    run = conv_direct if engine is Engine.DIRECT else conv_spectral
    res = run(f, g, kind)
    path = res.output.to_csv(_out_dir(args) / f"convolve_{kind.value}.csv")
    payload = {
        "command": "convolve",
        "f": args.f,
        "g": args.g,
        "kind": kind.value,
        "engine": engine.value,
        "grid": _grid_dict(grid),
        "csv": path,
        "norms": {"l1": lp_norm(res.output, 1), "linf": lp_norm(res.output, INF)},
        "tail_warning": res.tail_warning,
    }
    passed = True
    if args.compare:
        gap = engine_compare(f, g, kind)
        payload["engine_disagreement"] = gap
        passed = gap <= args.tol
    payload["passed"] = passed
    _emit(payload)
    return EXIT_OK if passed else EXIT_FAIL


# -- verify --------------------------------------------------------------------------


def _run_sweep(name: str, trials: int, seed: int, grid: Grid, sink) -> dict:
    violations = 0
    worst = 0.0
    for report in sweep(name, trials, seed, grid):
        d = report.to_dict()
        sink.write(json.dumps(d, default=_json_default) + "\n")
        if not report.satisfied:
            violations += 1
        if report.rhs > 0:
            worst = max(worst, report.lhs / report.rhs)
    return {"trials": trials, "violations": violations, "worst_ratio": worst}


def _ring_checks(seed: int, grid: Grid) -> dict:
    try:
        _, _, gap = noncommutativity_witness(seed, grid)
        witness = {"found": True, "relative_gap": gap}
    except SearchExhausted:
        witness = {"found": False, "relative_gap": None}
    rng = np.random.default_rng(seed)
    trivial = all(titchmarsh_trivial(random_mixture(grid, rng), kind) for kind in ConvKind)
    return {"noncommutativity": witness, "titchmarsh_trivial": trivial}


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    grid = _grid(args)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    results: dict = {}
    ring = None
    path = _out_dir(args) / f"verify_{args.suite}.jsonl"
    with warnings.catch_warnings(), path.open("w") as sink:
        warnings.simplefilter("ignore", DecayWarning)
        for suite in suites:
            for name in SUITES[suite]:
                results[name] = _run_sweep(name, args.trials, args.seed, grid, sink)
            if suite == "ring":
                ring = _ring_checks(args.seed, grid)
    passed = all(r["violations"] == 0 for r in results.values())
    if ring is not None:
        passed = passed and ring["noncommutativity"]["found"] and ring["titchmarsh_trivial"]
    payload = {
        "command": "verify",
        "suite": args.suite,
        "trials": args.trials,
        "seed": args.seed,
        "grid": _grid_dict(grid),
        "reports": path,
        "results": results,
    }
    if ring is not None:
        payload["ring"] = ring
    payload["passed"] = passed
    _emit(payload)
    return EXIT_OK if passed else EXIT_FAIL


# -- example -------------------------------------------------------------------------


def _lr_entry(report, closed_form_rhs: float | None = None) -> dict:
    d = report.to_dict()
    ok = report.satisfied
    if closed_form_rhs is not None:
        d["closed_form_rhs"] = closed_form_rhs
        ok = ok and report.lhs <= closed_form_rhs * (1.0 + L1_SLACK)
    d["passed"] = bool(ok)
    return d


def example_fredholm(grid: Grid, tol: float) -> tuple[dict, SampledFunction]:
    e = exp_abs_kernel(grid)
    rep = solve_fredholm(e, e)
    ell_ref = sample(ClosedForm.of("exp_abs", a=_SQRT_PI / 2, c=math.sqrt(2.0)), grid)
    ell_err = lp_norm(rep.resolvent.ell - ell_ref, INF) / lp_norm(ell_ref, INF)
    p = q = 4.0 / 3.0
    closed = (_SQRT_PI / 2) * (math.sqrt(2.0) / p) ** (1 / p) * (2.0 / q) ** (1 / q)
    lr = _lr_entry(lr_bound_check(rep, ExponentTriple.young(p, q, 2.0), "FREDHOLM"), closed)
    l1_ok = rep.l1_bound_lhs <= _SQRT_2PI * (1 + L1_SLACK)
    d = rep.to_dict()
    d["checks"] = {
        "resolvent_closed_form_error": ell_err,
        "resolvent_ok": ell_err <= tol,
        "l1_closed_form_rhs": _SQRT_2PI,
        "l1_ok": bool(l1_ok and rep.l1_bound_satisfied),
        "residual_ok": rep.residual_rel <= tol,
        "lr_bound": lr,
    }
    d["passed"] = bool(d["checks"]["resolvent_ok"] and d["checks"]["l1_ok"]
                       and d["checks"]["residual_ok"] and lr["passed"])
    return d, rep.solution


def saitoh_example_bound(p: float) -> float:
    """Closed-form L_p bound for the Barbashin example solution."""
    return math.sqrt(2.0) * (2.0 * _SQRT_2PI / (p * (p + 1.0))) ** (1.0 / p)


def example_barbashin(grid: Grid, tol: float, variant: int = 1) -> tuple[dict, SampledFunction]:
    e = exp_abs_kernel(grid)
    rep = solve_barbashin(e, e, variant, "SPECTRAL")
    rep_fd = solve_barbashin(e, e, variant, "FD")
    # eta = (sqrt(pi)/2) e^{-sqrt2 |t|} split as F1 * rho
    rho = WeightFunction.from_function(
        sample(ClosedForm.of("exp_abs", a=1.0, c=math.sqrt(0.5)), grid))
    F1 = sample(ClosedForm.of("exp_abs", a=_SQRT_PI / 2, c=math.sqrt(0.5)), grid)
    saitoh = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        for p in (2.0, 3.0):
            r = saitoh_corollary(F1, rho, e, p, variant)
            entry = _lr_entry(r, saitoh_example_bound(p))
            entry["solution_norm"] = lp_norm(rep.solution, p)
            entry["passed"] = bool(entry["passed"]
                                   and entry["solution_norm"] <= entry["closed_form_rhs"])
            saitoh.append(entry)
    l1_ok = rep.l1_bound_lhs <= _SQRT_2PI * (1 + L1_SLACK)
    d = rep.to_dict()
    d["checks"] = {
        "residual_ok": rep.residual_rel <= tol,
        "residual_rel_fd": rep_fd.residual_rel,
        "residual_fd_ok": rep_fd.residual_rel <= 5 * tol,
        "l1_closed_form_rhs": _SQRT_2PI,
        "l1_ok": bool(l1_ok and rep.l1_bound_satisfied),
        "saitoh": saitoh,
    }
    c = d["checks"]
    d["passed"] = bool(c["residual_ok"] and c["residual_fd_ok"] and c["l1_ok"]
                       and all(s["passed"] for s in saitoh))
    return d, rep.solution


def cauchy_example_bound(p: float, q: float, r: float) -> float:
    """Closed-form ``L_s`` bound for the Cauchy example solution."""
    return ((_SQRT_PI / 2) * (2.0 / r) ** (1 / r) * (2.0 / p) ** (1 / p)
            * (math.sqrt(2.0) / q) ** (1 / q))


def example_cauchy(grid: Grid, tol: float) -> tuple[dict, SampledFunction]:
    e = exp_abs_kernel(grid)
    rep = solve_cauchy(e, e, "SPECTRAL", strict=False)
    literal = ExponentTriple.four(2.0, 2.0, 2.0, 2.0, validate=False)
    valid = ExponentTriple.four(1.2, 1.2, 1.2, 2.0)
    four = []
    for ex in (literal, valid):
        r = lr_bound_check(rep, ex, "CAUCHY", strict=False)
        four.append(_lr_entry(r, cauchy_example_bound(ex.p, ex.q, ex.r)))
    l1_ok = rep.l1_bound_lhs <= 2 * _SQRT_2PI * (1 + L1_SLACK)
    d = rep.to_dict()
    d["checks"] = {
        "residual_ok": rep.residual_rel <= 5 * tol,
        "l1_closed_form_rhs": 2 * _SQRT_2PI,
        "l1_ok": bool(l1_ok and rep.l1_bound_satisfied),
        "decay_ok": rep.decay_check["passed"],
        "four_exponent": four,
    }
    c = d["checks"]
    d["passed"] = bool(c["residual_ok"] and c["l1_ok"] and c["decay_ok"]
                       and all(f["passed"] for f in four))
    return d, rep.solution


EXAMPLES = {1: example_fredholm, 2: example_barbashin, 3: example_cauchy}


def cmd_example(args) -> int:
    grid = _grid(args)
    out = _out_dir(args)
    try:
        d, solution = EXAMPLES[args.which](grid, args.tol)
    except (NearSingularError, DecayViolation) as exc:
        d = {"example": args.which, "grid": _grid_dict(grid), "error": str(exc), "passed": False}
        solution = None
    d["example"] = args.which
    if solution is not None:
        d["solution_csv"] = solution.to_csv(out / f"example{args.which}_solution.csv")
    _write_json(out / f"example{args.which}.json", d)
    _emit(d)
    return EXIT_OK if d["passed"] else EXIT_FAIL


# -- bench ---------------------------------------------------------------------------


def _best_time(fn, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    sizes = _csv_list(args.sizes, int)
    kinds = [ConvKind.coerce(k) for k in _csv_list(args.kinds, str)]
    if not sizes:
        raise UsageError("--sizes must list at least one size")
    if not kinds:
        raise UsageError("--kinds must list at least one kind")
    for n in sizes:
        if n < 8 or n & (n - 1):
            raise UsageError(f"size {n} is not a power of two >= 8")
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")

    results, timing = [], []
    passed = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DecayWarning)
        for n in sizes:
            grid = Grid(args.half_width, n)
            rng = np.random.default_rng(args.seed)
            f, g = random_mixture(grid, rng), random_mixture(grid, rng)
            for kind in kinds:
                gap = engine_compare(f, g, kind)
                t_dir = _best_time(lambda: conv_direct(f, g, kind), args.repeats)
                t_spec = _best_time(lambda: conv_spectral(f, g, kind), args.repeats)
                speedup = t_dir / t_spec
                ok = gap <= args.tol
                if n == BENCH_SPEEDUP_N and not args.no_speedup_check:
                    ok = ok and speedup >= BENCH_SPEEDUP
                passed = passed and ok
                results.append({"kind": kind.value, "N": n, "engine_disagreement": gap,
                                "passed": ok})
                timing.append({"kind": kind.value, "N": n, "direct_s": t_dir,
                               "spectral_s": t_spec, "speedup": speedup})
    payload = {
        "command": "bench",
        "half_width": args.half_width,
        "seed": args.seed,
        "speedup_required": {"N": BENCH_SPEEDUP_N, "factor": BENCH_SPEEDUP},
        "results": results,
        "passed": passed,
        "timing": timing,
    }
    _write_json(_out_dir(args) / "bench.json", payload)
    _emit(payload)
    return EXIT_OK if passed else EXIT_FAIL


# -- parser --------------------------------------------------------------------------


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--half-width", type=_positive_float, default=dflt(20.0),
                   help="window half-width L (default 20)")
    p.add_argument("--points", type=int, default=dflt(4096), help="grid size N (default 4096)")
    p.add_argument("--tol", type=_positive_float, default=dflt(1e-3),
                   help="relative tolerance for checks (default 1e-3)")
    p.add_argument("--seed", type=int, default=dflt(42), help="RNG seed (default 42)")
    p.add_argument("--out", default=dflt("hartley_conv_out"),
                   help=f"output directory ({ENV_OUT} overrides)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hartley-conv",
        description="Hartley and Hartley-Fourier convolution toolkit.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_common(p, suppress=True)
        return p

    p = add("transform", "sample a closed form and transform it")
    p.add_argument("--fn", required=True, help="function spec, e.g. 'exp_abs:a=1.2533,c=1'")
    p.add_argument("--kind", required=True, choices=["H1", "H2", "F"])
    p.set_defaults(func=cmd_transform)

    p = add("convolve", "convolve two closed forms")
    p.add_argument("--f", required=True, help="first argument spec")
    p.add_argument("--g", required=True, help="second argument spec")
    p.add_argument("--kind", required=True, help="HF, H1H1, H2H2 or FOURIER")
    p.add_argument("--engine", default="SPECTRAL", choices=["DIRECT", "SPECTRAL"])
    p.add_argument("--compare", action="store_true", help="cross-check the two engines")
    p.set_defaults(func=cmd_convolve)

    p = add("verify", "seeded inequality sweeps")
    p.add_argument("--suite", required=True, choices=["young", "saitoh", "ring", "all"])
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_verify)

    p = add("example", "run a worked equation example end to end")
    p.add_argument("which", type=int, choices=[1, 2, 3])
    p.set_defaults(func=cmd_example)

    p = add("bench", "time direct against spectral convolution")
    p.add_argument("--kinds", default="HF", help="comma-separated convolution kinds")
    p.add_argument("--sizes", default="256,1024,4096", help="comma-separated powers of two")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--no-speedup-check", action="store_true",
                   help="report the speedup without enforcing it")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
