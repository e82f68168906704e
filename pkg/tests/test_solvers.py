import json
import math
import warnings

import numpy as np
import pytest

from hartley_conv.grid import (
    INF,
    ClosedForm,
    ConfigurationError,
    DecayWarning,
    ExponentTriple,
    Grid,
    SampledFunction,
    lp_norm,
    sample,
    tail_ratio,
)
from hartley_conv.solvers import (
    DecayViolation,
    NearSingularError,
    barbashin_residual,
    decay_check,
    exp_abs_kernel,
    helmholtz_apply,
    lr_bound_check,
    second_derivative_fd,
    solve_barbashin,
    solve_cauchy,
    solve_fredholm,
    wiener_levy_resolvent,
)
from hartley_conv.transforms import TransformKind, transform

SQRT_2PI = math.sqrt(2 * math.pi)


@pytest.fixture(scope="module")
def ell_closed(grid):
    return sample(ClosedForm.of("exp_abs", a=math.sqrt(math.pi) / 2, c=math.sqrt(2)), grid)


@pytest.fixture(scope="module")
def fredholm(grid, exp_kernel):
    return solve_fredholm(exp_kernel, exp_kernel)


@pytest.fixture(scope="module")
def cauchy(grid, exp_kernel):
    return solve_cauchy(exp_kernel, exp_kernel)


def centred_mixture(grid, rng, terms=3):
    x = grid.nodes
    v = np.zeros(grid.points)
    for _ in range(terms):
        v += rng.uniform(-1, 1) * np.exp(-((x - rng.uniform(-1, 1)) / rng.uniform(0.5, 2)) ** 2)
    return SampledFunction(grid, v)


class TestResolvent:
    @pytest.mark.parametrize("kind", list(TransformKind))
    def test_exp_kernel(self, exp_kernel, ell_closed, kind):
        res = wiener_levy_resolvent(exp_kernel, kind)
        err = lp_norm(res.ell - ell_closed, INF) / lp_norm(ell_closed, INF)
        assert err <= 5e-5
        assert res.transform_kind is kind
        assert res.denominator_min == pytest.approx(1.0, abs=1e-4)

    def test_zero(self, small_grid):
        res = wiener_levy_resolvent(SampledFunction.zeros(small_grid))
        assert np.all(res.ell.values == 0)
        assert res.denominator_min == 1.0

    def test_pointwise_identity(self, grid, rng):
        checked = 0
        for _ in range(12):
            phi = centred_mixture(grid, rng)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DecayWarning)
                try:
                    res = wiener_levy_resolvent(phi, "H1")
                except NearSingularError:
                    continue
            if res.denominator_min <= 0.1 or tail_ratio(res.ell) > 1e-7:
                continue
            hp = transform(phi, "H1").values
            hl = transform(res.ell, "H1").values
            assert np.abs(hl * (1 + hp) - hp).max() <= 1e-9 * np.abs(hp).max()
            checked += 1
        assert checked >= 5

    def test_off_centre_kernel_warns(self, grid):
        phi = sample("gaussian:a=0.6,mu=6", grid)
        with pytest.warns(DecayWarning, match="resolvent"):
            wiener_levy_resolvent(phi, "H1")

    def test_near_singular(self, grid):
        # H1 of -exp(-x^2/2) is -exp(-y^2/2), so 1 + H1(phi) vanishes at y = 0
        with pytest.raises(NearSingularError) as info:
            wiener_levy_resolvent(sample("gaussian:a=-1", grid), "H1")
        assert info.value.y == 0.0
        assert info.value.modulus <= 1e-8
        assert "NEAR_SINGULAR" in str(info.value)


class TestHelmholtz:
    def test_zero(self, small_grid):
        for method in ("SPECTRAL", "FD"):
            assert np.all(helmholtz_apply(SampledFunction.zeros(small_grid), method).values == 0)

    def test_gaussian_oracle(self, grid):
        x = grid.nodes
        u = SampledFunction(grid, np.exp(-x ** 2))
        expected = (3 - 4 * x ** 2) * np.exp(-x ** 2)
        assert np.abs(helmholtz_apply(u, "SPECTRAL").values - expected).max() <= 1e-6
        assert np.abs(helmholtz_apply(u, "FD").values - expected).max() <= 2e-4

    def test_fd_second_order(self):
        errs = []
        for n in (1024, 2048, 4096):
            g = Grid(20.0, n)
            x = g.nodes
            u = SampledFunction(g, np.exp(-x ** 2))
            errs.append(np.abs(helmholtz_apply(u, "FD").values - (3 - 4 * x ** 2) * np.exp(-x ** 2)).max())
        assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)
        assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)

    def test_fd_edge_stencil_exact_on_cubics(self):
        g = Grid(1.0, 16)
        x = g.nodes
        d2 = second_derivative_fd(SampledFunction(g, x ** 3 - 2 * x ** 2))
        np.testing.assert_allclose(d2.real, 6 * x - 4, atol=1e-9)

    def test_methods_agree_on_smooth_input(self, grid, rng):
        u = centred_mixture(grid, rng)
        s = helmholtz_apply(u, "SPECTRAL").values
        f = helmholtz_apply(u, "FD").values
        assert np.abs(s - f).max() <= 1e-3 * np.abs(s).max()

    def test_spectral_multiplier(self, grid):
        u = sample("gaussian:s=0.7071067811865476,mu=0.4", grid)
        hu = transform(u, "H1").values
        hh = transform(helmholtz_apply(u), "H1").values
        y = grid.frequencies.nodes
        m = np.abs(hu) >= 1e-8
        np.testing.assert_allclose(hh[m] / hu[m], 1 + y[m] ** 2, rtol=1e-8)

    def test_unknown_method(self, small_grid):
        with pytest.raises(ConfigurationError):
            helmholtz_apply(SampledFunction.zeros(small_grid), "CHEB")


class TestFredholm:
    def test_example(self, fredholm, ell_closed):
        assert fredholm.residual_rel <= 1e-6
        assert fredholm.l1_bound_lhs <= SQRT_2PI
        assert fredholm.l1_bound_satisfied
        assert fredholm.l1_bound_rhs == pytest.approx(SQRT_2PI, rel=1e-4)
        # H1 f = 1 / ((2 + y^2)(1 + y^2)) so ||f||_1 >= |int f| = sqrt(2 pi)/2
        assert fredholm.l1_bound_lhs == pytest.approx(SQRT_2PI / 2, rel=1e-4)

    def test_zero_rhs(self, grid, exp_kernel):
        rep = solve_fredholm(exp_kernel, SampledFunction.zeros(grid))
        assert np.all(rep.solution.values == 0)
        assert rep.residual_l1 == 0

    def test_direct_engine_solution(self, grid, exp_kernel, fredholm):
        rep = solve_fredholm(exp_kernel, exp_kernel, engine="DIRECT")
        assert lp_norm(rep.solution - fredholm.solution, INF) <= 1e-7

    def test_json(self, fredholm):
        d = json.loads(json.dumps(fredholm.to_dict()))
        assert set(d) == {"equation", "grid", "resolvent", "residual_l1", "residual_rel", "l1_bound"}
        assert d["l1_bound"]["satisfied"] is True
        assert "denominator_min" in d["resolvent"]

    def test_lr_bound(self, fredholm):
        p = q = 4 / 3
        rep = lr_bound_check(fredholm, ExponentTriple.young(p, q, 2), "FREDHOLM")
        assert rep.satisfied
        closed = math.sqrt(math.pi) / 2 * (math.sqrt(2) / p) ** (1 / p) * (2 / q) ** (1 / q)
        assert rep.rhs == pytest.approx(closed, rel=1e-4)

    def test_lr_mode_mismatch(self, fredholm):
        with pytest.raises(ConfigurationError):
            lr_bound_check(fredholm, ExponentTriple.conjugate(2), "FREDHOLM")
        with pytest.raises(ConfigurationError):
            lr_bound_check(fredholm, ExponentTriple.young(1.5, 1.5, 3), "CAUCHY")
        with pytest.raises(ConfigurationError):
            lr_bound_check(fredholm, ExponentTriple.young(1.5, 1.5, 3), "VOLTERRA")


class TestBarbashin:
    @pytest.mark.parametrize("variant", [1, 2])
    def test_example(self, exp_kernel, ell_closed, variant):
        rep = solve_barbashin(exp_kernel, exp_kernel, variant)
        assert rep.residual_rel <= 1e-3
        assert rep.l1_bound_lhs <= SQRT_2PI
        assert rep.l1_bound_satisfied
        assert lp_norm(rep.components["eta"] - ell_closed, INF) <= 5e-5
        assert rep.equation == f"barbashin_h{variant}"

    def test_fd_residual(self, exp_kernel):
        assert solve_barbashin(exp_kernel, exp_kernel, 1, method="FD").residual_rel <= 5e-3

    def test_zero_rhs(self, grid, exp_kernel):
        rep = solve_barbashin(exp_kernel, SampledFunction.zeros(grid))
        assert np.all(rep.solution.values == 0)
        assert rep.residual_l1 == 0

    def test_general_residual_detects_wrong_solution(self, grid, exp_kernel):
        rep = solve_barbashin(exp_kernel, exp_kernel)
        defect, rhs = barbashin_residual(rep.solution, exp_kernel, exp_kernel, exp_kernel)
        assert lp_norm(defect, 1) == pytest.approx(rep.residual_l1, rel=1e-12)
        bad, _ = barbashin_residual(1.1 * rep.solution, exp_kernel, exp_kernel, exp_kernel)
        assert lp_norm(bad, 1) > 1e-2 * lp_norm(rhs, 1)

    def test_lr_bound(self, exp_kernel):
        rep = solve_barbashin(exp_kernel, exp_kernel)
        assert lr_bound_check(rep, ExponentTriple.young(1.5, 1.5, 3), "BARBASHIN").satisfied


class TestCauchy:
    def test_example(self, cauchy):
        assert cauchy.residual_rel <= 5e-3
        assert cauchy.l1_bound_lhs <= 2 * SQRT_2PI
        assert cauchy.l1_bound_satisfied
        assert cauchy.decay_check["passed"]
        assert cauchy.components["xi"].grid == cauchy.grid
        assert cauchy.resolvent.transform_kind is TransformKind.F

    def test_xi_closed_form(self, cauchy, ell_closed):
        assert lp_norm(cauchy.components["xi"] - ell_closed, INF) <= 5e-5

    def test_zero_source(self, grid, exp_kernel):
        rep = solve_cauchy(exp_kernel, SampledFunction.zeros(grid))
        assert np.all(rep.solution.values == 0)
        assert rep.decay_check["passed"]

    def test_fd_helmholtz(self, exp_kernel):
        assert solve_cauchy(exp_kernel, exp_kernel, method="FD").residual_rel <= 5e-3

    def test_decay_violation(self, exp_kernel):
        grid = exp_kernel.grid
        wide = sample("gaussian:s=5", grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DecayWarning)
            with pytest.raises(DecayViolation) as info:
                solve_cauchy(exp_kernel, wide)
            assert not info.value.report.decay_check["passed"]
            rep = solve_cauchy(exp_kernel, wide, strict=False)
        assert not rep.decay_check["passed"]
        assert "DECAY_VIOLATION" in str(info.value)

    def test_decay_check_fields(self, grid):
        d = decay_check(sample("gaussian", grid))
        assert d["passed"]
        assert set(d) == {"max_tail_f", "max_tail_fprime", "limit", "passed"}

    def test_json(self, cauchy):
        d = cauchy.to_dict()
        assert d["decay_check"]["passed"] is True
        assert d["resolvent"]["transform_kind"] == "F"

    def test_four_exponent_bound_valid_tuple(self, cauchy):
        p, q, r, s = 1.2, 1.2, 1.2, 2.0
        rep = lr_bound_check(cauchy, ExponentTriple.four(p, q, r, s), "CAUCHY")
        assert rep.satisfied and rep.hypothesis_ok
        closed = (math.sqrt(math.pi) / 2 * (2 / r) ** (1 / r) * (2 / p) ** (1 / p)
                  * (math.sqrt(2) / q) ** (1 / q))
        assert rep.rhs == pytest.approx(closed, rel=1e-4)

    def test_four_exponent_literal_tuple(self, cauchy):
        e = ExponentTriple.four(2, 2, 2, 2, validate=False)
        with pytest.raises(ConfigurationError):
            lr_bound_check(cauchy, e, "CAUCHY")
        rep = lr_bound_check(cauchy, e, "CAUCHY", strict=False)
        assert rep.satisfied
        assert not rep.hypothesis_ok
        assert rep.to_dict()["hypothesis_ok"] is False

    def test_lr_zero_solution(self, grid, exp_kernel):
        rep = solve_cauchy(exp_kernel, SampledFunction.zeros(grid))
        out = lr_bound_check(rep, ExponentTriple.four(1.2, 1.2, 1.2, 2), "CAUCHY")
        assert out.lhs == 0 and out.satisfied


def test_exp_abs_kernel(grid):
    k = exp_abs_kernel(grid)
    assert k.values[grid.points // 2] == pytest.approx(math.sqrt(math.pi / 2))
