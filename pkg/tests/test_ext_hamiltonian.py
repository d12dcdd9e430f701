import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rimech import ext_hamiltonian as eh
from rimech.errors import ConstraintViolationError, GaugeDegenerateError, NotAnIntegralError
from rimech.extended_phase import ExtendedState


def _state(dim=4, seed=0):
    rng = np.random.default_rng(seed)
    return ExtendedState(rng.normal(size=dim), rng.normal(size=dim))


def test_time_energy_pair():
    assert eh.ext_bracket(eh.coordinate(0), eh.momentum(0), _state()) == -1.0


def test_space_pairs():
    s = _state()
    assert eh.ext_bracket(eh.coordinate(1), eh.momentum(1), s) == 1.0
    assert eh.ext_bracket(eh.coordinate(1), eh.momentum(2), s) == 0.0


def test_all_plus_convention():
    assert eh.ext_bracket(eh.coordinate(0), eh.momentum(0), _state(), convention="all-plus") == 1.0


def _cubic(seed):
    rng = np.random.default_rng(seed)
    terms = {}
    for _ in range(5):
        e = [0] * 4
        for _ in range(rng.integers(1, 4)):
            e[rng.integers(4)] += 1
        terms[tuple(e)] = float(rng.normal())
    return eh.polynomial(terms)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_antisymmetry_and_jacobi(seed):
    f, g, h = _cubic(seed), _cubic(seed + 1), _cubic(seed + 2)
    s = _state(2, seed)
    assert eh.ext_bracket(f, g, s) == pytest.approx(-eh.ext_bracket(g, f, s), abs=1e-12)
    fg = eh.bracket_observable(f, g)
    gh = eh.bracket_observable(g, h)
    hf = eh.bracket_observable(h, f)
    jac = eh.ext_bracket(fg, h, s) + eh.ext_bracket(gh, f, s) + eh.ext_bracket(hf, g, s)
    assert abs(jac) < 1e-6


def test_coordinate_time_flow_constant_phi():
    H = eh.make_phi_coordinate_H(lambda t: 2.0 + 0 * t)
    s0 = ExtendedState([0.5], [2.0])
    tr = eh.evolve(H, s0, np.linspace(0, 1, 11))
    assert np.allclose(tr.x[:, 0], 0.5 + tr.lam, atol=1e-12)
    assert np.allclose(tr.aux[:, 0], 2.0, atol=1e-12)


def test_proper_time_flow_half_rate():
    H = eh.make_proper_time_H(lambda t: 2.0 + 0 * t)
    s0 = ExtendedState([0.0], [2.0])
    assert eh.parametrization_rate(H, s0) == pytest.approx(0.5, abs=1e-10)
    tr = eh.evolve(H, s0, np.linspace(0, 1, 11))
    assert tr.x[-1, 0] == pytest.approx(0.5, abs=1e-10)


def test_energy_flow_runs_backwards():
    H = eh.make_energy_H(3.0)
    tr = eh.evolve(H, ExtendedState([0.0], [3.0]), np.linspace(0, 1, 11))
    assert np.allclose(tr.x[:, 0], -tr.lam)
    assert np.allclose(tr.aux[:, 0], 3.0)


def test_rates_from_catalog():
    assert eh.parametrization_rate(eh.make_phi_coordinate_H(lambda t: 1.0 + 0 * t), ExtendedState([0.0], [1.0])) \
        == pytest.approx(1.0, abs=1e-10)
    H = eh.make_proper_time_H(lambda t: 4.0 + 0 * t)
    assert eh.parametrization_rate(H, ExtendedState([0.0], [4.0])) == pytest.approx(0.25, abs=1e-10)


def test_momentum_generator():
    H = eh.make_momentum_H(1.5)
    s0 = ExtendedState([0.0, 0.0], [0.0, 1.5])
    assert eh.parametrization_rate(H, s0) == 0.0
    tr = eh.evolve(H, s0, np.linspace(0, 2, 21))
    assert np.allclose(tr.x[:, 1], tr.lam)
    assert np.all(tr.aux[:, 1] == 1.5)


def test_newtonian_coordinate_flow():
    m = 2.0
    Hcl = eh.Observable(lambda x, p: p[1] ** 2 / (2 * m), name="p^2/2m")
    H = eh.make_coordinate_time_H(Hcl, dim=2)
    s0 = ExtendedState([0.0, 0.0], [1.0 / (2 * m), 1.0])
    tr = eh.evolve(H, s0, np.linspace(0, 3, 31))
    assert np.allclose(tr.x[:, 1], tr.x[:, 0] / m, atol=1e-9)


def test_on_shell_gives_classical_energy():
    Hcl = eh.Observable(lambda x, p: 0.5 * p[1] ** 2 + x[1] ** 2, name="osc")
    c = 2.0
    H = eh.make_coordinate_time_H(Hcl, c=c, dim=2)
    x, p1 = np.array([0.0, 0.3]), 0.8
    E = 0.5 * p1**2 + 0.3**2
    assert eh.constraint_residual(H, ExtendedState(x, [E / c, p1])) < 1e-14


def test_off_shell_residual():
    H = eh.make_coordinate_time_H(eh.Observable(lambda x, p: 1.0), dim=1)
    assert eh.constraint_residual(H, ExtendedState([0.0], [0.0])) == pytest.approx(1.0)


def test_moving_particle_rate():
    H = eh.make_moving_particle_H(0.5, 1.0, 2.0)
    s0 = ExtendedState([0.0, 0.0], [2.0, 1.0])
    assert eh.parametrization_rate(H, s0) == pytest.approx(1.0)
    tr = eh.evolve(H, s0, np.linspace(0, 1, 11))
    assert np.allclose(tr.x[:, 1], 0.5 * tr.lam)


def test_proper_length_flow():
    phi = lambda q: 1 + q**2  # noqa: E731
    H = eh.make_proper_length_H(phi)
    s0 = ExtendedState([0.0, 0.5], [0.0, phi(0.5)])
    tr = eh.evolve(H, s0, np.linspace(0, 1, 201))
    q = tr.x[:, 1]
    dq = np.gradient(q, tr.lam, edge_order=2)
    assert np.max(np.abs(dq - 1 / phi(q))) < 1e-5
    assert np.allclose(tr.aux[:, 1], phi(q), atol=1e-7)


def test_proper_time_needs_positive_phi():
    H = eh.make_proper_time_H(lambda t: 0.0 * t)
    with pytest.raises(GaugeDegenerateError):
        H(ExtendedState([0.0], [1.0]))


def test_off_shell_start_rejected():
    H = eh.make_energy_H(1.0)
    with pytest.raises(ConstraintViolationError):
        eh.evolve(H, ExtendedState([0.0], [2.0]), np.linspace(0, 1, 5))


def test_gauge_relation_identity():
    H = eh.make_moving_particle_H(0.5, 1.0, 2.0)
    s = ExtendedState([0.3, 0.1], [2.0, 1.0])
    G = eh.gauge_relate_H(H, 1.0, eh.Observable(lambda x, p: 0.0), probes=[s])
    assert np.allclose(G.vector_field(s.as_vector()), H.vector_field(s.as_vector()))


def test_gauge_relation_scales_rate():
    phi = 3.0
    Hp = eh.make_proper_time_H(lambda t: phi + 0 * t)
    Ht = eh.gauge_relate_H(Hp, 1.0 / phi, eh.Observable(lambda x, p: 0.0))
    s = ExtendedState([0.0], [phi])
    assert eh.parametrization_rate(Ht, s) == pytest.approx(1.0, abs=1e-10)


def test_moving_particle_from_momentum_generator():
    v, p1_0, E = 0.4, 1.0, 2.0
    Hq = eh.make_momentum_H(p1_0)
    probes = [ExtendedState([0.2, 0.1], [E, p1_0]), ExtendedState([1.0, -0.3], [E, p1_0])]
    Ht = eh.gauge_relate_H(Hq, 1.0 / v, eh.Observable(lambda x, p: -(p[0] - E) / v), probes=probes)
    cat = eh.make_moving_particle_H(v, p1_0, E)
    grid = np.linspace(0, 2, 41)
    a = eh.evolve(Ht, probes[0], grid)
    b = eh.evolve(cat, probes[0], grid)
    assert np.max(np.abs(a.x - b.x)) < 1e-8 and np.max(np.abs(a.aux - b.aux)) < 1e-8


def test_gauge_relation_rejects_non_integral():
    Hq = eh.make_momentum_H(1.0)
    s = ExtendedState([0.0, 0.0], [0.0, 1.0])
    with pytest.raises(NotAnIntegralError):
        eh.gauge_relate_H(Hq, 1.0, eh.coordinate(1), probes=[s])
