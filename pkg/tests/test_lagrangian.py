import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rimech import lagrangian as lg
from rimech.el_integrator import integrate_el
from rimech.errors import NotApplicableError
from rimech.extended_phase import make_minkowski


def _timelike(rng, dim=4):
    v = rng.normal(size=dim) * 0.3
    v[0] = 1.0 + abs(v[0])
    return v


def test_phi_v_momentum():
    L = lg.phi_v_lagrangian(lambda q: 3.0 + 0 * q)
    assert lg.canonical_momentum(L, [0.4], [1.7])[0] == pytest.approx(3.0, abs=1e-12)


def test_quadratic_form_momentum():
    L = lg.metric_power_lagrangian(make_minkowski(4), n=2)
    p = lg.canonical_momentum(L, np.zeros(4), [1, 0, 0, 0])
    assert np.allclose(p, [2, 0, 0, 0], atol=1e-12)


def test_charged_momentum_matches_kinetic_plus_potential():
    m, q, c = 1.3, 0.7, 1.0
    g = make_minkowski(4, "minus-plus")

    def A(x):
        return np.array([-0.2 * x[1], 0.0, 0.5 * x[1], 0.0])

    L = lg.charged_line_element(g, A, mass=-m * c, charge=q, sign=-1.0)
    x = np.array([0.0, 0.3, 0.0, 0.0])
    v3 = np.array([0.3, -0.2, 0.1])
    v = np.r_[c, v3]
    gam = 1 / np.sqrt(1 - v3 @ v3 / c**2)
    expected = q * A(x) + m * gam * (g(x) @ v)
    assert np.allclose(lg.canonical_momentum(L, x, v), expected, atol=1e-12)


@pytest.mark.parametrize("n,deg", [(1, 1.0), (2, 2.0)])
def test_homogeneity_degree_of_metric_powers(n, deg):
    L = lg.metric_power_lagrangian(make_minkowski(4), n=n)
    v = _timelike(np.random.default_rng(0))
    assert lg.homogeneity_degree(L, np.zeros(4), v) == pytest.approx(deg, abs=1e-9)


def test_homogeneity_degree_constant():
    assert lg.homogeneity_degree(lg.constant_lagrangian(7.0), [0.0], [1.0]) == pytest.approx(0.0, abs=1e-12)


def test_first_order_hamiltonian_vanishes():
    L = lg.metric_power_lagrangian(make_minkowski(4), n=1)
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = _timelike(rng)
        scale = abs(lg.canonical_momentum(L, np.zeros(4), v) @ v) + abs(L(np.zeros(4), v))
        assert abs(lg.hamiltonian_function(L, np.zeros(4), v)) < 1e-10 * scale


def test_quadratic_hamiltonian_equals_lagrangian():
    L = lg.metric_power_lagrangian(make_minkowski(4), n=2)
    v = _timelike(np.random.default_rng(2))
    assert lg.hamiltonian_function(L, np.zeros(4), v) == pytest.approx(L(np.zeros(4), v), rel=1e-8)


def test_cubed_line_element_hamiltonian():
    L3 = lg.power(lg.metric_power_lagrangian(make_minkowski(4), n=1), 3)
    v = _timelike(np.random.default_rng(3))
    x = np.zeros(4)
    assert lg.hamiltonian_function(L3, x, v) == pytest.approx(2 * L3(x, v), rel=1e-7)


def test_line_element_hessian_is_singular():
    L = lg.metric_power_lagrangian(make_minkowski(4), n=1)
    v = _timelike(np.random.default_rng(4))
    assert abs(lg.scaled_hessian_determinant(L, np.zeros(4), v)) < 1e-6
    assert lg.is_hessian_singular(L, np.zeros(4), v)


def test_quadratic_hessian_determinant_2d():
    L = lg.metric_power_lagrangian(make_minkowski(2), n=2)
    assert lg.hessian_determinant(L, np.zeros(2), [1.0, 0.3]) == pytest.approx(-4.0, rel=1e-6)


def test_unit_hessian_newtonian():
    L = lg.quadratic_kinetic(1)
    assert lg.hessian_determinant(L, [0.0], [0.7]) == pytest.approx(1.0, rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(0.2, 5.0))
def test_line_element_euler_identity(v0, v1, v2, s):
    # degree-one homogeneity: L(s v) = s L(v) and p(s v) = p(v)
    L = lg.metric_power_lagrangian(make_minkowski(3), n=1)
    x = np.zeros(3)
    v = np.array([v0, v1 * v0, v2 * v0])
    assert L(x, s * v) == pytest.approx(s * L(x, v), rel=1e-12)
    assert np.allclose(lg.canonical_momentum(L, x, s * v), lg.canonical_momentum(L, x, v), atol=1e-12)


def _proper_time_geodesic():
    g = make_minkowski(4)
    L2 = lg.metric_power_lagrangian(g, n=2)
    v0 = np.array([1.25, 0.75, 0.0, 0.0])
    return integrate_el(L2, np.zeros(4), v0, np.linspace(0, 2, 201))


@pytest.mark.parametrize("f", [lambda L: L**2, lambda L: L**3])
def test_fL_equivalence_on_geodesic(f):
    L1 = lg.metric_power_lagrangian(make_minkowski(4), n=1)
    rep = lg.check_fL_equivalence(L1, f, _proper_time_geodesic())
    assert rep.max_residual < 1e-8


def test_fL_identity_matches_base_residual():
    L1 = lg.metric_power_lagrangian(make_minkowski(4), n=1)
    rep = lg.check_fL_equivalence(L1, lambda L: L, _proper_time_geodesic())
    assert rep.max_residual == pytest.approx(rep.base_residual, abs=1e-14)


def test_fL_not_applicable_when_L_drifts():
    # affine parameter changes speed: dL/dlam != 0 for a non-uniform parametrization
    L1 = lg.metric_power_lagrangian(make_minkowski(2), n=1)
    from rimech.el_integrator import reparametrize
    traj = _proper_time_geodesic()
    from rimech.extended_phase import Trajectory
    t2 = Trajectory(traj.lam, traj.x[:, :2], traj.aux[:, :2])
    bent = reparametrize(t2, lambda lam, x, v: 1.0 + 0.5 * lam)
    with pytest.raises(NotApplicableError):
        lg.check_fL_equivalence(L1, lambda L: L**2, bent)
