import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ordergrowth import core, qm, sl2tilde as S
from ordergrowth.errors import BudgetExceeded, DomainError, Uncertain

PI = math.pi
GRID = np.linspace(-7.0, 7.0, 101)

seeds = st.integers(0, 2 ** 32 - 1)


def rand(seed, **kw):
    return S.random_element(np.random.default_rng(seed), **kw)


# element invariants

@given(seeds)
def test_element_invariants(seed):
    g = rand(seed)
    m = g.matrix
    assert abs(np.linalg.det(m) - 1) <= 1e-12 * max(1.0, np.abs(m).max() ** 2)
    assert m[0, 0] > 0 or (m[0, 0] == 0 and m[1, 0] > 0)
    # direction of M e1 agrees with tau mod pi
    diff = (math.atan2(m[1, 0], m[0, 0]) - g.tau) / PI
    assert abs(diff - round(diff)) <= 1e-9
    vals = S.lift_eval(g, GRID)
    assert np.all(np.diff(vals) > 0)
    assert np.allclose(S.lift_eval(g, GRID + PI), vals + PI, atol=1e-9)


def test_lift_eval_scalar_and_vector_agree():
    g = rand(4)
    xs = np.array([-3.0, 0.0, 1.0, 5.5])
    assert np.allclose(S.lift_eval(g, xs), [S.lift_eval(g, float(x)) for x in xs], atol=1e-14)


# exp

def test_exp_zero():
    g = S.exp_from_algebra(S.AlgebraElement())
    assert g.m == (1.0, 0.0, 0.0, 1.0) and g.tau == 0


@pytest.mark.parametrize("t", [0.3, 1.0, 2 * PI, -5.0, 40.0])
def test_exp_rotation_translates(t):
    g = S.exp_j(t)
    assert g.tau == t / 2
    assert np.allclose(S.lift_eval(g, np.linspace(0, PI, 100)), np.linspace(0, PI, 100) + t / 2, atol=1e-9)


@pytest.mark.parametrize("s", [0.5, 2.0, -3.0])
def test_exp_diagonal_fixes_axes(s):
    g = S.exp_from_algebra(S.AlgebraElement(a=-s))
    assert g.tau == 0
    assert abs(S.lift_eval(g, PI / 2) - PI / 2) <= 1e-12
    assert abs(S.lift_eval(g, PI) - PI) <= 1e-12


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_exp_symmetric_tau_in_half_open_interval(a, b):
    g = S.exp_p(a, b)
    assert -PI / 2 < g.tau < PI / 2


@given(st.floats(-30, 30), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=60)
def test_exp_lift_is_continuous_along_path(t, a, b):
    # tau of exp(X) is close to tau of exp((1 - eps) X)
    x = S.AlgebraElement(t, a, b)
    near = S.AlgebraElement(t * (1 - 1e-7), a * (1 - 1e-7), b * (1 - 1e-7))
    assert abs(S.exp_from_algebra(x).tau - S.exp_from_algebra(near).tau) < 1e-4


@given(st.floats(-20, 20), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
@settings(max_examples=60)
def test_exp_is_one_parameter_group(t, a, b):
    x = S.AlgebraElement(t, a, b)
    half = S.exp_from_algebra(S.AlgebraElement(t / 2, a / 2, b / 2))
    assert S.equal(S.multiply(half, half), S.exp_from_algebra(x), 1e-7)


def test_algebra_matrix_round_trip():
    x = S.AlgebraElement(1.5, -0.25, 2.0)
    m = x.matrix
    assert abs(np.trace(m)) == 0
    assert S.AlgebraElement.from_matrix(m) == x
    with pytest.raises(DomainError):
        S.AlgebraElement.from_matrix(np.eye(2))


def test_sigma_basis_brackets():
    x, y, h = S.sigma_basis()
    br = lambda p, q: p @ q - q @ p
    assert np.array_equal(br(x, y), -2 * h)
    assert np.array_equal(br(h, x), 2 * y)
    # the printed matrices give +2X for the third relation
    assert np.array_equal(br(h, y), 2 * x)


def test_j_acts_as_complex_structure():
    j = S.J.matrix
    for p in (S.AlgebraElement(a=1.0).matrix, S.AlgebraElement(b=1.0).matrix):
        adj = j @ p - p @ j
        assert np.allclose(j @ adj - adj @ j, -p)


# multiply, inverse, deck

def test_multiply_examples():
    g = rand(1)
    assert S.equal(S.multiply(g, S.identity()), g, 0) and S.equal(S.multiply(S.identity(), g), g, 0)
    d2 = S.multiply(S.deck(1), S.deck(1))
    assert d2 == S.deck(2) and d2.tau == 4 * PI
    r = S.multiply(S.exp_j(PI), S.exp_j(PI))
    assert S.equal(r, S.exp_j(2 * PI), 1e-12) and r.tau == pytest.approx(PI)


def test_deck_central():
    rng = np.random.default_rng(0)
    z = S.deck(1)
    assert S.deck(0) == S.identity()
    for _ in range(20):
        g = S.random_element(rng)
        zg, gz = S.multiply(z, g), S.multiply(g, z)
        assert S.equal(zg, gz, 1e-12)
        assert zg.m == g.m and zg.tau == pytest.approx(g.tau + 2 * PI)
    assert S.equal(S.multiply(S.deck(-1), S.deck(1)), S.identity(), 0)
    assert S.inverse(S.deck(1)) == S.deck(-1)


def test_deck_is_exp_4pi_j():
    assert S.equal(S.exp_j(4 * PI), S.deck(1), 1e-12)


@given(seeds, seeds, seeds)
@settings(max_examples=50)
def test_group_axioms(a, b, c):
    g, h, k = rand(a), rand(b), rand(c)
    assert S.equal(S.multiply(S.multiply(g, h), k), S.multiply(g, S.multiply(h, k)), 1e-9)
    assert S.equal(S.multiply(g, S.inverse(g)), S.identity(), 1e-9)
    assert S.equal(S.multiply(S.inverse(g), g), S.identity(), 1e-9)


def test_large_elliptic_power_round_trip():
    g = S.multiply(S.exp_j(2.5), S.exp_p(0.3, 0.1))
    assert abs(g.m[0] + g.m[3]) < 2  # elliptic
    back = S.multiply(S.power(g, 1000), S.power(g, -1000))
    assert S.equal(back, S.identity(), 1e-6)
    assert abs(S.mu(S.power(g, -1000)).value + 1000 * S.mu(g).value) < 1e-6


def test_overflow_raises():
    with pytest.raises(OverflowError):
        S.power(S.exp_p(10.0, 0.0), 100)


# positivity

def test_is_positive_examples():
    assert S.is_positive(S.deck(1))
    p = S.exp_p(-1.0, 0.0)
    assert not S.is_positive(p) and not S.is_positive(S.inverse(p))
    assert S.is_positive(S.exp_j(0.1))
    assert S.is_positive(S.identity())


def test_is_positive_grid_floor():
    with pytest.raises(ValueError):
        S.is_positive(S.deck(1), grid_size=32)


def test_is_positive_uncertain_band():
    g = S.exp_j(-2e-9)  # displacement exactly -1e-9 everywhere
    with pytest.raises(Uncertain):
        S.is_positive(g, tol=1e-9 + 1e-13)
    assert S.is_positive(g, tol=2e-9)
    assert not S.is_positive(g, tol=1e-10)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_min_displacement_inside_lipschitz_enclosure(seed):
    g = rand(seed, turns=1.0, spread=1.5)
    value, err = S.min_displacement(g)
    lo, hi = S.displacement_enclosure(g, resolution=1e-6)
    assert hi - lo <= 1e-6
    assert lo - err <= value <= hi + err


def test_min_displacement_dense_grid():
    rng = np.random.default_rng(9)
    xs = np.linspace(0, PI, 200001)
    for _ in range(20):
        g = S.random_element(rng, spread=2.0)
        dense = float(np.min(S.displacement(g, xs)))
        m, _ = S.min_displacement(g)
        assert m <= dense + 1e-12
        assert dense - m < 1e-6


def test_positive_cone_of_hyperbolic_powers():
    # displacement of a large hyperbolic power is tiny near the attractor
    g = S.multiply(S.exp_j(2 * PI + 0.5), S.exp_p(0.4, 0.0))
    big = S.power(g, 200)
    assert S.is_positive(big)


def test_lipschitz_constant_bounds_derivative():
    g = S.exp_p(0.8, -0.3)
    xs = np.linspace(0, PI, 10001)
    d = np.diff(S.displacement(g, xs)) / np.diff(xs)
    assert np.max(np.abs(d)) <= S.lipschitz_constant(g) + 1e-6


# mu

@pytest.mark.parametrize("t", [0.1, 1.0, 3.0, 2 * PI, -4.0])
def test_mu_rotation(t):
    assert abs(S.mu(S.exp_j(t)).value - t) <= 1e-12


def test_mu_examples():
    assert S.mu(S.exp_j(3.0)).value == 3.0
    assert S.mu(S.deck(1)).value == 4 * PI
    assert abs(S.mu(S.exp_p(2.0, -1.0)).value) <= 1e-12


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_mu_closed_form_matches_iteration(seed):
    g = rand(seed)
    exact = S.mu(g).value
    it = S.mu(g, 4096)
    assert it.error == pytest.approx(2 * PI / 4096)
    assert abs(exact - it.value) <= it.error + 1e-9


def test_mu_elliptic_regions():
    # one element per conjugacy type and sheet
    for t in np.linspace(-15, 15, 61):
        for a in (0.0, 0.3, 0.9):
            g = S.multiply(S.exp_j(float(t)), S.exp_p(a, 0.2))
            ref = S.mu(g, 20000)
            assert abs(S.mu(g).value - ref.value) <= ref.error + 1e-9


def test_mu_iterations_validated():
    with pytest.raises(ValueError):
        S.mu(S.deck(1), 0)


@given(seeds, st.integers(-8, 8))
@settings(max_examples=80, deadline=None)
def test_mu_homogeneous(seed, n):
    g = rand(seed, spread=0.6)
    assert abs(S.mu(S.power(g, n)).value - n * S.mu(g).value) <= 1e-6


@given(seeds, seeds)
@settings(max_examples=80, deadline=None)
def test_mu_conjugation_invariant(a, b):
    g, k = rand(a), rand(b, spread=0.6)
    conj = S.multiply(S.multiply(k, g), S.inverse(k))
    assert abs(S.mu(conj).value - S.mu(g).value) <= 1e-6


def test_mu_vanishes_on_symmetric_part():
    rng = np.random.default_rng(2)
    for _ in range(50):
        x = S.random_symmetric(rng, 10.0)
        assert abs(S.mu(S.exp_from_algebra(x)).value) <= 1e-6


def test_translation_number_iterated_error():
    g = S.multiply(S.exp_j(1.0), S.exp_p(0.3, 0.3))
    exact = S.translation_number(g)
    for n in (1, 10, 1000):
        val, err = S.translation_number_iterated(g, n)
        assert abs(val - exact) <= err


# dynamical order and sandwich

def test_dynamical_order_axioms(sl2_model):
    rng = np.random.default_rng(21)
    sample = [S.random_element(rng) for _ in range(20)] + S.standard_probes()
    rep = core.check_order_axioms(sl2_model, sample, 1000, seed=2)
    assert rep.ok, rep.violations[:3]


def test_sandwich_direction_by_direction():
    rng = np.random.default_rng(33)
    for _ in range(500):
        g = S.random_element(rng)
        m = S.mu(g).value
        pos = S.is_positive(g)
        if m >= 2 * PI + 0.1:
            assert pos
        if pos:
            assert m >= -1e-6


def test_displacement_bounds_mu():
    # rho - pi < min displacement <= rho, the two facts behind the sandwich
    rng = np.random.default_rng(4)
    for _ in range(200):
        g = S.random_element(rng)
        rho = S.translation_number(g)
        m, err = S.min_displacement(g)
        assert rho - PI - 1e-9 < m <= rho + 1e-9


# relative growth on the cover

@pytest.mark.parametrize("g", [S.deck(1), S.exp_j(3 * PI)], ids=["deck", "exp3piJ"])
def test_growth_matches_mu_ratio(sl2_model, g):
    rng = np.random.default_rng(77)
    f = S.mu_quasimorphism()
    for _ in range(3):
        h = S.random_element(rng, spread=0.5)
        est = core.relative_growth(sl2_model, g, h, 400)
        for n, gn, _, _ in est.rows:
            lo, hi = qm.gamma_bounds(f, S.SANDWICH_C1, g, h, n)
            assert lo <= gn / n <= hi
        assert abs(est.value - f(h) / f(g)) <= 0.05


# reduce to a deck power

def test_reduce_to_me_examples():
    assert S.reduce_to_me_bound(S.AlgebraElement()) == 0
    assert S.reduce_to_me_bound(S.AlgebraElement(a=-5.0)) == 1


def test_reduce_to_me_random():
    rng = np.random.default_rng(10)
    assert all(S.reduce_to_me_bound(S.random_symmetric(rng, 10.0)) <= 1 for _ in range(100))


def test_reduce_to_me_rejects_j_part():
    with pytest.raises(DomainError):
        S.reduce_to_me_bound(S.AlgebraElement(t=1.0))


def test_reduce_to_me_budget():
    with pytest.raises(BudgetExceeded):
        S.reduce_to_me_bound(S.AlgebraElement(a=1.0), n_max=0)


# literals

def test_parse_element():
    g = S.parse_element("expJ:3pi * deck:-1*expP:0.5,-0.25")
    ref = S.multiply(S.multiply(S.exp_j(3 * PI), S.deck(-1)), S.exp_p(0.5, -0.25))
    assert S.equal(g, ref, 0)
    assert S.parse_element("expJ:-pi") == S.exp_j(-PI)
    assert S.parse_element("expJ:2.5") == S.exp_j(2.5)


@pytest.mark.parametrize("text", ["rot:1", "expP:1", "deck:x", "expJ:"])
def test_parse_element_errors(text):
    with pytest.raises(ValueError):
        S.parse_element(text)
