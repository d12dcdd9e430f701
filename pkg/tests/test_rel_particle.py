import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rimech import ext_hamiltonian as eh
from rimech import rel_particle as rp
from rimech.acceptance import gravity_em_fields, magnetic_fields
from rimech.errors import OffShellStateError, SuperluminalStateError
from rimech.extended_phase import make_minkowski, weak_field_metric


def flat(m=1.0, c=1.0, A=None, q=0.0):
    return rp.BackgroundFields(make_minkowski(4, "minus-plus"), A=A, q_charge=q, m=m, c=c)


def static_well(u=0.1, c=1.0):
    U = lambda x: u * c**2 + 0 * x[0]  # noqa: E731
    return rp.BackgroundFields(weak_field_metric(U, c=c), U=U, m=1.0, c=c)


def test_gamma_rest_and_moving():
    f = flat()
    x = np.zeros(4)
    assert rp.gamma_factor(f, x, [0, 0, 0]) == 1.0
    assert rp.gamma_factor(f, x, [0.6, 0, 0]) == pytest.approx(1.25, rel=1e-14)


def test_gamma_in_potential_well():
    assert rp.gamma_factor(static_well(), np.zeros(4), [0, 0, 0]) == pytest.approx(1.118034, abs=1e-6)


def test_superluminal_rejected():
    with pytest.raises(SuperluminalStateError):
        rp.gamma_factor(flat(), np.zeros(4), [1.2, 0, 0])


def test_free_particle_is_straight():
    f = flat()
    tr = rp.integrate_coordinate_time(f, [0, 0, 0], [0.3, 0.2, 0], np.linspace(0, 2, 41))
    assert np.allclose(tr.x[:, 1], 0.3 * tr.x[:, 0], atol=1e-12)
    assert np.allclose(tr.aux[:, 1:], tr.aux[0, 1:], atol=1e-14)


def test_uniform_electric_field_nonrelativistic():
    # A_0 = -E0 x / c: the force magnitude is q E0 and it points down the energy gradient
    E0, q, c = 0.5, 2.0, 1.0
    f = flat(A=lambda x: np.array([-E0 * x[1] / c, 0, 0, 0]), q=q, c=c)
    x3, v3 = np.array([0.2, 0.0, 0.0]), np.array([1e-3 * c, 0.0, 0.0])
    pi3 = rp.canonical_momentum(f, np.r_[0.0, x3], v3)
    _, dpi = rp.coordinate_time_rhs(f, 0.0, x3, pi3)
    assert abs(abs(dpi[0]) - q * E0) <= 1e-6 * q * E0

    def h_of_x(s):
        p = rp.canonical_momentum(f, np.r_[0.0, s, 0, 0], v3)
        return rp.energy_h_momentum(f, np.r_[0.0, s, 0, 0], p)

    dh = (h_of_x(0.2 + 1e-5) - h_of_x(0.2 - 1e-5)) / 2e-5
    assert dpi[0] == pytest.approx(-dh, rel=1e-6)


def test_magnetic_field_preserves_speed():
    f = magnetic_fields()
    tr = rp.integrate_coordinate_time(f, [0, 0, 0], [0.6, 0, 0.3], np.linspace(0, 5, 2001))
    p = np.array([rp.kinetic_momentum(f, x, v) for x, v in zip(tr.x, tr.diagnostics["v"])])
    pn = np.linalg.norm(p, axis=1)
    assert np.max(np.abs(pn - pn[0])) < 1e-7


def test_rest_energy():
    assert rp.energy_h(flat(m=2.0, c=3.0), np.zeros(4), [0, 0, 0]) == pytest.approx(18.0, rel=1e-15)


def test_energy_in_static_well():
    # gamma = 1/sqrt(0.8), g00 = 0.8
    h = rp.energy_h(static_well(), np.zeros(4), [0, 0, 0])
    assert h == pytest.approx(0.8 * 1.118034, abs=1e-6)


def test_newtonian_limit_energy():
    c, u = 1.0, 1e-4
    f = static_well(u, c)
    v = np.array([1e-2, 0.0, 0.0])
    newton = f.m * c**2 - f.m * u * c**2 + 0.5 * f.m * v @ v
    assert abs(rp.energy_h(f, np.zeros(4), v) - newton) < 10 * (1e-2) ** 4 * f.m * c**2


def test_momentum_energy_at_rest():
    f = flat(m=1.5, c=2.0)
    assert rp.energy_h_momentum(f, np.zeros(4), [0, 0, 0]) == pytest.approx(1.5 * 4.0, rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-1, 1))
def test_energy_forms_agree_on_shell(vx, vy, vz, x1):
    f = gravity_em_fields()
    x = np.array([0.0, x1, 0.2, -0.1])
    v3 = np.array([vx, vy, vz])
    pi = rp.canonical_momentum(f, x, v3)
    assert abs(rp.energy_h(f, x, v3) - rp.energy_h_momentum(f, x, pi)) < 1e-9 * f.m * f.c**2


def test_energy_equality_reproduces_mass_shell():
    f = gravity_em_fields()
    x = np.array([0.0, 0.3, 0.1, 0.0])
    v3 = np.array([0.2, -0.3, 0.1])
    st_ = rp.coordinate_state(f, x[1:], v3)
    p_kin = rp.kinetic_momentum(f, x, v3)
    g00 = f.g00(x)
    gam = rp.gamma_factor(f, x, v3)
    p0_up = f.m * gam * f.c
    assert p0_up**2 * g00 - p_kin @ p_kin == pytest.approx((f.m * f.c) ** 2, rel=1e-12)
    assert st_.x[0] == 0.0


def test_mass_shell_examples():
    f = flat()
    assert rp.mass_shell_residual(f, [-1.0, 0, 0, 0]) == pytest.approx(0.0, abs=1e-15)
    gam, v = 1.25, 0.6
    assert abs(rp.mass_shell_residual(f, [-gam, gam * v, 0, 0])) < 1e-10
    assert rp.mass_shell_residual(f, [0, 0, 0, 0]) == pytest.approx(1.0)


def test_tilde_flow_free_is_straight():
    f = flat()
    x0 = np.zeros(4)
    u0 = rp.on_shell_four_velocity(f, x0, [0.3, 0.0, 0.0])
    tr = rp.integrate_proper_time(f, x0, u0, np.linspace(0, 2, 41))
    assert np.allclose(np.diff(tr.x[:, 1], 2), 0.0, atol=1e-12)
    assert np.max(np.abs(tr.diagnostics["mass_shell"])) < 1e-12


def test_factor_of_two():
    f = gravity_em_fields()
    x0 = np.array([0.0, 0.5, 0.0, 0.0])
    u0 = rp.on_shell_four_velocity(f, x0, [0.1, 0.4, 0.05])
    res = rp.factor_of_two(f, x0, u0, np.linspace(0, 1, 101))
    assert np.max(np.abs(res.ratio - 2.0)) < 1e-9


def test_tilde_flow_matches_proper_time_el_flow():
    # independent route: integrate the proper-time Euler-Lagrange equations directly
    from rimech.el_integrator import integrate_el
    f = gravity_em_fields()
    x0 = np.array([0.0, 0.5, 0.0, 0.0])
    u0 = rp.on_shell_four_velocity(f, x0, [0.1, 0.4, 0.05])
    grid = np.linspace(0, 1.5, 151)
    ham = rp.integrate_proper_time(f, x0, u0, grid)
    el = integrate_el(rp.proper_time_lagrangian(f), x0, u0, grid)
    assert np.max(np.abs(ham.x - el.x)) < 1e-7


def test_coordinate_hamiltonian_runs_on_coordinate_time():
    f = gravity_em_fields()
    H = rp.make_rel_coordinate_H(f)
    s = rp.coordinate_state(f, [0.5, 0, 0], [0.1, 0.4, 0.05])
    assert eh.parametrization_rate(H, s) == pytest.approx(1.0, abs=1e-10)
    assert eh.constraint_residual(H, s) < 1e-12


def test_proper_hamiltonian_at_rest():
    f = flat(m=2.0)
    s = rp.proper_state(f, [0, 0, 0], [0, 0, 0])
    p0_up = -s.p[0] / f.g00(s.x)
    assert p0_up == pytest.approx(f.m * f.c, rel=1e-12)
    assert eh.constraint_residual(rp.make_rel_proper_H(f), s) < 1e-12


def test_proper_hamiltonian_static_p0():
    f = gravity_em_fields()
    H = rp.make_rel_proper_H(f)
    s = rp.proper_state(f, [0.5, 0, 0], [0.1, 0.3, 0.0])
    tr = eh.evolve(H, s, np.linspace(0, 2, 201), monitor_only=True)
    drift = np.max(np.abs(tr.aux[:, 0] - tr.aux[0, 0])) / 2.0
    assert drift < 1e-8


def test_gamma_from_p0_off_shell():
    f = flat()
    with pytest.raises(OffShellStateError):
        rp.gamma_from_p0(f, np.zeros(4), [2.0, 0, 0], 1.0)


def test_velocity_inversion_roundtrip():
    f = gravity_em_fields()
    x = np.array([0.0, 0.2, -0.4, 0.1])
    v3 = np.array([0.3, 0.1, -0.2])
    pi = rp.canonical_momentum(f, x, v3)
    assert np.allclose(rp.velocity_from_momentum(f, x, pi), v3, atol=1e-13)


def test_gamma_identity_on_proper_time_flow():
    f = gravity_em_fields()
    x0 = np.array([0.0, 0.5, 0.0, 0.0])
    u0 = rp.on_shell_four_velocity(f, x0, [0.1, 0.4, 0.05])
    tr = rp.integrate_proper_time(f, x0, u0, np.linspace(0, 2, 401))
    assert np.max(rp.gamma_identity_error(f, tr)) < 1e-8


def test_coordinate_to_proper_matches_direct_run():
    f = gravity_em_fields()
    tc = rp.integrate_coordinate_time(f, [0.5, 0, 0], [0.1, 0.4, 0.05], np.linspace(0, 2, 401))
    tp = rp.coordinate_to_proper(f, tc)
    direct = rp.integrate_proper_time(f, tc.x[0], rp.on_shell_four_velocity(f, tc.x[0], [0.1, 0.4, 0.05]), tp.lam)
    assert np.max(np.abs(direct.x - tc.x)) < 1e-6
