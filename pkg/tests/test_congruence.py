"""Connecting-field and deviation-field propagation: oracle accuracy,
integrator order, matrix closures, closed-form flows, and shape data."""

import io
import math
from fractions import Fraction

import pytest

from walkerspin.congruence import (
    CSV_HEADER,
    CoefficientTrace,
    ConnectingState,
    connecting_oracle,
    curvature_free_solution,
    integrate_connecting,
    integrate_jacobi,
    propagation_matrices,
    riccati_residual,
    shape_decompositions,
    sigma_omega_forms,
    special_flows,
    write_trace_csv,
)
from walkerspin.curvature import walker_curvature_components
from walkerspin.errors import CausticError, InputError, PatternError
from walkerspin.poly import ZERO, parse_poly
from walkerspin.spincoeff import Frame
from walkerspin.walker import WalkerMetric

P = parse_poly

FLAT = WalkerMetric(a=ZERO, b=ZERO, c=ZERO)
QUADRATIC = WalkerMetric(a=ZERO, b=P("u^2"), c=ZERO)
ORIGIN = (0, 0, 0, 0)


def oracle_error(w, V0, step, v_end=1.0, base=ORIGIN):
    path = integrate_connecting(w, V0, v_end=v_end, step=step, base=base)
    worst = 0.0
    for t, state in zip(path.grid, path.states):
        exact = connecting_oracle(w, base, V0, t)
        worst = max(
            worst,
            max(abs(x - y) for x, y in zip(state.astuple(), exact.astuple())),
        )
    return worst


class TestTraces:
    def test_metric_sampling_is_exact(self):
        trace = CoefficientTrace.from_metric(QUADRATIC, ORIGIN, (0.0, 0.25, 0.5))
        # sigma = -u along this curve
        assert trace.values["sigma"] == (0.0, -0.25, -0.5)
        assert trace.values["rho"] == (0.0, 0.0, 0.0)

    def test_constant_trace_rejects_unknown_keys(self):
        with pytest.raises(InputError):
            CoefficientTrace.constant({"lambda": 1.0}, 1.0, 0.5)

    def test_grid_validation(self):
        cols = {k: (0.0, 0.0, 0.0) for k in CoefficientTrace.constant({}, 1.0, 0.5).values}
        with pytest.raises(InputError):
            CoefficientTrace(grid=(0.0, 0.5, 0.5), values=cols)
        with pytest.raises(InputError):
            CoefficientTrace(grid=(0.0, 0.5), values={k: v[:2] for k, v in cols.items()})
        bad = dict(cols)
        bad["rho"] = (0.0, math.inf, 0.0)
        with pytest.raises(InputError):
            CoefficientTrace(grid=(0.0, 0.5, 1.0), values=bad)


class TestConnectingIntegration:
    def test_matches_oracle_at_fine_step(self):
        assert oracle_error(QUADRATIC, (0.0, 0.0, 1.0, 0.0), 1e-3) <= 1e-8

    def test_endpoint_value(self):
        path = integrate_connecting(QUADRATIC, (0.0, 0.0, 1.0, 0.0), v_end=1.0, step=1e-3)
        assert abs(path.states[-1].zeta + 0.5) <= 1e-8

    def test_nu_bitwise_constant(self):
        path = integrate_connecting(
            WalkerMetric(a=P("u*y^2"), b=P("u^3"), c=P("u*v")),
            (1.0, 2.0, 3.0, 0.25),
            v_end=1.0,
            step=0.05,
        )
        assert all(s.nu == 0.25 for s in path.states)

    def test_fourth_order_convergence(self):
        # degree-six solution: truncation error dominates roundoff
        w = WalkerMetric(a=ZERO, b=P("u^6"), c=ZERO)
        coarse = oracle_error(w, (0.0, 0.0, 1.0, 0.0), 0.1)
        fine = oracle_error(w, (0.0, 0.0, 1.0, 0.0), 0.05)
        assert 12.0 <= coarse / fine <= 20.0

    def test_flat_state_is_frozen(self):
        path = integrate_connecting(FLAT, (1.0, -2.0, 3.0, 4.0), v_end=1.0, step=0.1)
        assert all(s == ConnectingState(1.0, -2.0, 3.0, 4.0) for s in path.states)

    def test_offset_base_point(self):
        assert oracle_error(QUADRATIC, (0.0, 1.0, 1.0, 1.0), 1e-3, base=(1, 0, 0, 0)) <= 1e-8

    def test_constant_dilation_trace(self):
        trace = CoefficientTrace.constant({"rho": 0.3, "rho_t": 0.3}, 1.0, 1e-3)
        path = integrate_connecting(trace, (0.0, 1.0, 0.0, 0.0))
        assert abs(path.states[-1].zeta - math.exp(0.3)) <= 1e-8

    def test_nu_unpinned_when_kappa_present(self):
        trace = CoefficientTrace.constant({"kappa_t": 1.0}, 1.0, 1e-3)
        path = integrate_connecting(trace, (0.0, 1.0, 0.0, 0.0))
        assert abs(path.states[-1].nu + 1.0) <= 1e-8

    def test_input_validation(self):
        with pytest.raises(InputError):
            integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=1.0, step=0.0)
        with pytest.raises(InputError):
            integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=-1.0, step=0.1)
        with pytest.raises(InputError):
            integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=1.0)
        with pytest.raises(InputError):
            integrate_connecting(QUADRATIC, (0, math.nan, 1, 0), v_end=1.0, step=0.1)
        with pytest.raises(InputError):
            integrate_connecting(QUADRATIC, (0, 0, 1), v_end=1.0, step=0.1)
        with pytest.raises(InputError):
            integrate_connecting("b=u^2", (0, 0, 1, 0), v_end=1.0, step=0.1)


class TestJacobiIntegration:
    def test_flat_lines(self):
        path = integrate_jacobi(FLAT, (1.0, 2.0, 3.0, 0.0), (0.5, 0.0, 0.0, 0.25), 1.0, 0.1)
        for t, s in zip(path.grid, path.states):
            assert abs(s.eta - (1.0 + 0.5 * t)) <= 1e-12
            assert abs(s.nu - 0.25 * t) <= 1e-12
        assert all(d.nu == 0.25 for d in path.derivatives)

    def test_agrees_with_connecting_transport(self):
        V0 = (0.0, 0.0, 1.0, 0.0)
        m0 = propagation_matrices(QUADRATIC, ORIGIN).m
        v0p = [sum(m0[i][k] * V0[k] for k in range(4)) for i in range(4)]
        jac = integrate_jacobi(QUADRATIC, V0, v0p, 1.0, 1e-2)
        con = integrate_connecting(QUADRATIC, V0, v_end=1.0, step=1e-2)
        worst = max(
            max(abs(x - y) for x, y in zip(a.astuple(), b.astuple()))
            for a, b in zip(jac.states, con.states)
        )
        assert worst <= 1e-8

    def test_second_derivative_of_nu_vanishes(self):
        path = integrate_jacobi(QUADRATIC, (0.0, 0.0, 1.0, 1.0), (0.0, 0.5, 0.0, 0.0), 1.0, 0.05)
        assert all(d.nu == 0.0 for d in path.derivatives)
        assert all(s.nu == 1.0 for s in path.states)


class TestPropagationMatrices:
    def test_cubic_profile_entries(self):
        pm = propagation_matrices(WalkerMetric(a=ZERO, b=P("u^3"), c=ZERO), (1, 0, 0, 0))
        assert pm.p == ((0.0, -1.5), (0.0, 0.0))
        assert pm.m[1][2] == -1.5
        assert all(pm.m[i][0] == 0.0 for i in range(4))
        assert pm.n[3] == (0.0, 0.0, 0.0, 0.0)

    def test_curvature_blocks(self):
        pm = propagation_matrices(QUADRATIC, ORIGIN)
        # the screen curvature block carries the leading quartic component
        assert pm.q == ((0.0, 1.0), (0.0, 0.0))
        assert pm.n[1][2] == 1.0

    def test_linear_profile_is_curvature_free(self):
        pm = propagation_matrices(WalkerMetric(a=ZERO, b=P("2*u"), c=ZERO), ORIGIN)
        assert all(x == 0.0 for row in pm.n for x in row)
        assert pm.m[1][2] == -1.0


class TestRiccati:
    def test_exact_closure(self):
        w = WalkerMetric(a=P("u*v"), b=P("x^3"), c=P("u*y"))
        rep = riccati_residual(w, base=(1, 2, 3, 4), v=0.5)
        assert rep.is_zero
        assert all(x == 0.0 for row in rep.m_sample for x in row)
        assert all(x == 0.0 for row in rep.p_sample for x in row)

    def test_flat(self):
        assert riccati_residual(FLAT).is_zero

    def test_scalar_transport_identities(self):
        w = WalkerMetric(a=P("v^2*y"), b=P("u^4"), c=P("x*y"))
        frame = Frame.walker(w)
        s = frame.coeffs
        curv = walker_curvature_components(w, frame)
        diff = s.rho - s.rho_t
        assert (diff.diff("u") - (s.rho_t - s.rho) * (s.rho_t + s.rho)).is_zero
        assert (s.sigma.diff("u") + s.sigma * (s.rho + s.rho_t) + curv.Psi0).is_zero
        assert (s.sigma_t.diff("u") + s.sigma_t * (s.rho + s.rho_t) + curv.PsiT0).is_zero


class TestCurvatureFreeSolution:
    def test_scalar_value(self):
        out = curvature_free_solution(((1, 0), (0, 0)), 1)
        assert out[0][0] == Fraction(1, 2)
        assert out[1][1] == 0

    def test_zero_matrix(self):
        assert curvature_free_solution(((0, 0), (0, 0)), 5) == ((0, 0), (0, 0))

    def test_nilpotent_is_stationary(self):
        assert curvature_free_solution(((0, 7), (0, 0)), 3) == ((0, 7), (0, 0))

    def test_walker_transport_matrix_is_stationary(self):
        m0 = propagation_matrices(WalkerMetric(a=ZERO, b=P("2*u"), c=ZERO), ORIGIN).m
        out = curvature_free_solution(m0, 3)
        assert out == tuple(tuple(Fraction(x) for x in row) for row in m0)

    def test_caustic(self):
        with pytest.raises(CausticError) as info:
            curvature_free_solution(((-1, 0), (0, 0)), 1)
        assert info.value.v == 1

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            curvature_free_solution(((1, 0, 0), (0, 1, 0)), 1)


class TestSpecialFlows:
    def test_quarter_turn(self):
        out = special_flows("rotation", math.pi / 2, (1.0, 0.0))
        assert abs(out[0]) <= 1e-15 and abs(out[1] - 1.0) <= 1e-15

    def test_trivial_dilation(self):
        assert special_flows("dilation", 0.0, (2.5, -1.0)) == (2.5, -1.0)

    def test_inverse_scale(self):
        out = special_flows("inverse-scale", (math.log(2), -math.log(2)), (1.0, 1.0))
        assert abs(out[0] - 2.0) <= 1e-12 and abs(out[1] - 0.5) <= 1e-12

    def test_boost_matches_integration(self):
        trace = CoefficientTrace.constant({"sigma": 0.5, "sigma_t": 0.5}, 1.0, 1e-3)
        path = integrate_connecting(trace, (0.0, 1.0, 0.0, 0.0))
        flowed = special_flows("boost", 0.5, (1.0, 0.0), trace=trace)
        assert abs(path.states[-1].zeta - flowed[0]) <= 1e-8
        assert abs(path.states[-1].zeta_t - flowed[1]) <= 1e-8

    def test_pattern_enforcement(self):
        boost_trace = CoefficientTrace.constant({"sigma": 0.5, "sigma_t": 0.5}, 1.0, 0.5)
        with pytest.raises(PatternError):
            special_flows("rotation", 1.0, (1.0, 0.0), trace=boost_trace)
        with pytest.raises(PatternError):
            special_flows("dilation", 1.0, (1.0, 0.0), trace=boost_trace)

    def test_argument_validation(self):
        with pytest.raises(InputError):
            special_flows("spiral", 1.0, (1.0, 0.0))
        with pytest.raises(InputError):
            special_flows("inverse-scale", 1.0, (1.0, 0.0))
        with pytest.raises(InputError):
            special_flows("boost", 1.0, (1.0, 0.0, 0.0))


class TestSigmaOmega:
    def test_deviation_pair_conserves_sigma(self):
        first = integrate_jacobi(QUADRATIC, (0, 0, 1, 0), (1, 0, 0, 0), 1.0, 1e-2)
        second = integrate_jacobi(QUADRATIC, (0, 0, 0, 1), (0, 0, 0, 0), 1.0, 1e-2)
        forms = sigma_omega_forms(first, second)
        assert all(abs(s + 0.5) <= 1e-8 for s in forms.sigma)

    def test_connecting_pair_on_metric_is_exactly_zero(self):
        first = integrate_connecting(QUADRATIC, (0, 1, 1, 0), v_end=1.0, step=1e-2)
        second = integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=1.0, step=1e-2)
        forms = sigma_omega_forms(first, second)
        assert all(s == 0.0 for s in forms.sigma)
        # trace-free screen block: the enclosed area is conserved
        assert all(abs(o - 1.0) <= 1e-8 for o in forms.omega)

    def test_orthogonal_pair_proportionality(self):
        trace = CoefficientTrace.constant({"rho": 0.2, "rho_t": -0.1}, 1.0, 1e-2)
        first = integrate_connecting(trace, (0, 1, 0, 0))
        second = integrate_connecting(trace, (0, 0, 1, 0))
        forms = sigma_omega_forms(first, second)
        for s, o in zip(forms.sigma, forms.omega):
            assert s == (0.2 - (-0.1)) / 2 * o

    def test_quadratic_area_identity(self):
        # D(zeta zeta~) = (rho+rho~) zeta zeta~ + sigma zeta~^2 + sigma~ zeta^2
        trace = CoefficientTrace.constant({"rho": 0.3, "rho_t": 0.3}, 1.0, 1e-2)
        path = integrate_connecting(trace, (0.0, 1.0, 2.0, 0.0))
        prod = [s.zeta * s.zeta_t for s in path.states]
        h = path.grid[1] - path.grid[0]
        for k in range(1, len(prod) - 1):
            lhs = (prod[k + 1] - prod[k - 1]) / (2 * h)
            assert abs(lhs - 0.6 * prod[k]) <= 1e-4

    def test_mismatch_rejection(self):
        a = integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=1.0, step=0.1)
        b = integrate_connecting(QUADRATIC, (0, 0, 1, 0), v_end=1.0, step=0.05)
        with pytest.raises(InputError):
            sigma_omega_forms(a, b)
        c = integrate_jacobi(QUADRATIC, (0, 0, 1, 0), (0, 0, 0, 0), 1.0, 0.1)
        with pytest.raises(InputError):
            sigma_omega_forms(a, c)


class TestShapes:
    def test_pure_dilation(self):
        rep = shape_decompositions(1, 1, 0, 0)
        assert rep.dilation == ((1, 0), (0, 1))
        assert rep.shear == ((0, 0), (0, 0))
        assert rep.rotation == ((0, 0), (0, 0))
        assert rep.boost == ((0, 0), (0, 0))
        assert rep.eigenvalues == (1.0, 1.0)
        assert rep.divergence == 2

    def test_pure_rotation_complex_spectrum(self):
        rep = shape_decompositions(0, 0, 1, -1)
        assert rep.rotation == ((0, 1), (-1, 0))
        assert rep.boost == ((0, 0), (0, 0))
        assert rep.eigenvalues == (complex(0, -1), complex(0, 1))
        assert rep.sym_square == -2

    def test_cubic_profile_point(self):
        s = Frame.walker(WalkerMetric(a=ZERO, b=P("u^3"), c=ZERO)).coeffs
        point = (1, 0, 0, 0)
        rep = shape_decompositions(
            s.rho.eval_at(point),
            s.rho_t.eval_at(point),
            s.sigma.eval_at(point),
            s.sigma_t.eval_at(point),
        )
        assert rep.p_matrix == ((0, Fraction(-3, 2)), (0, 0))
        assert rep.eigenvalues == (0.0, 0.0)

    def test_t_split_reconstruction(self):
        rep = shape_decompositions(Fraction(1, 3), Fraction(-1, 5), Fraction(2, 7), 2)
        assert rep.t_matrix == ((-2, Fraction(-1, 3)), (Fraction(1, 5), Fraction(-2, 7)))
        assert rep.t_trace_coeff == Fraction(1, 3) / 2 + Fraction(-1, 5) / 2

    def test_real_distinct_spectrum(self):
        rep = shape_decompositions(1.0, 0.0, 0.0, 0.0)
        assert rep.eigenvalues == (0.0, 1.0)


class TestCsv:
    def test_header_and_determinism(self):
        def render():
            buf = io.StringIO()
            path = integrate_connecting(QUADRATIC, (0.0, 0.0, 1.0, 0.0), v_end=0.01, step=0.005)
            write_trace_csv(path, buf)
            return buf.getvalue()

        out = render()
        lines = out.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 4
        assert out == render()

    def test_flat_columns_constant(self):
        buf = io.StringIO()
        path = integrate_connecting(FLAT, (1.0, 2.0, 3.0, 4.0), v_end=0.2, step=0.1)
        write_trace_csv(path, buf)
        rows = [line.split(",") for line in buf.getvalue().strip().split("\n")[1:]]
        for col in range(1, 9):
            assert len({row[col] for row in rows}) == 1
