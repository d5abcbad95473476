import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_gamma, v
from ordergrowth import core, qm, sl2tilde
from ordergrowth.errors import BudgetExceeded, DomainError

PI = math.pi


# gamma_n

def test_gamma_n_integers(int_model):
    assert core.gamma_n(int_model, 2, 3, 5) == 8
    assert core.gamma_n(int_model, 1, 1, 7) == 7


def test_gamma_n_quadrant_matches_scan(quadrant_model):
    g, h = v(1, 1), v(2, 3)
    assert core.gamma_n(quadrant_model, g, h, 4) == 12
    assert brute_gamma(quadrant_model, g, h, 4, -50, 50) == 12


def test_gamma_n_negative_answer(int_model):
    # h = -3: g^p >= h^n already for negative p
    assert core.gamma_n(int_model, 2, -3, 4) == -6


@given(g=st.integers(1, 20), h=st.integers(-40, 40), n=st.integers(1, 30),
       lo=st.integers(-500, 500), width=st.integers(0, 400))
def test_gamma_n_bracket_hint_never_changes_answer(g, h, n, lo, width):
    model = core.integer_model()
    expected = -((-h * n) // g)  # ceil(h n / g)
    assert core.gamma_n(model, g, h, n) == expected
    assert core.gamma_n(model, g, h, n, bracket=(lo, lo + width)) == expected


def test_gamma_n_budget(quadrant_model):
    with pytest.raises(BudgetExceeded):
        core.gamma_n(quadrant_model, v(1, 0), v(0, 1), 1, cap=1000)


def test_gamma_n_rejects_bad_n(int_model):
    with pytest.raises(ValueError):
        core.gamma_n(int_model, 1, 1, 0)


def test_doubling_schedule():
    assert core.doubling_schedule(1) == [1]
    assert core.doubling_schedule(16) == [1, 2, 4, 8, 16]
    assert core.doubling_schedule(400)[-2:] == [256, 400]


# relative growth

def test_relative_growth_integers(int_model):
    est = core.relative_growth(int_model, 2, 3, 64)
    assert est.value == 1.5
    assert est.certified
    assert est.lower == est.upper == 1.5


def test_relative_growth_quadrant(quadrant_model):
    est = core.relative_growth(quadrant_model, v(1, 1), v(2, 3), 64)
    assert abs(est.value - 3.0) <= 1 / 64
    assert not est.certified


def test_relative_growth_sl2(sl2_model):
    est = core.relative_growth(sl2_model, sl2tilde.deck(1), sl2tilde.exp_j(2 * PI), 400)
    assert abs(est.value - 0.5) <= 0.05
    assert est.certified
    assert est.lower <= 0.5 <= est.upper


def test_certified_rows_contain_scanned_quotients(sl2_model):
    g, h = sl2tilde.exp_j(3 * PI), sl2tilde.multiply(sl2tilde.exp_j(5.0), sl2tilde.exp_p(0.4, -0.2))
    est = core.relative_growth(sl2_model, g, h, 32)
    assert est.certified
    for n, gn, lo, hi in est.rows:
        scanned = brute_gamma(sl2_model, g, h, n, -5, 200)
        assert scanned == gn
        assert lo <= scanned / n <= hi


def test_growth_estimate_invariant():
    with pytest.raises(ValueError):
        core.GrowthEstimate(value=2.0, n_used=1, lower=0.0, upper=1.0)


def test_doubling_quotients_settle(quadrant_model):
    g, h = v(3, 1), v(1, 2)
    rows = core.relative_growth(quadrant_model, g, h, 256).rows
    for (n1, g1, _, _), (n2, g2, _, _) in zip(rows, rows[1:]):
        assert abs(g2 / n2 - g1 / n1) <= 1 / n1


# dominance

def test_is_dominant_integers(int_model):
    assert core.is_dominant(int_model, 1, [-10, 0, 10], 64).yes
    assert core.is_dominant(int_model, 0, [5], 64).no
    assert core.is_dominant(int_model, -1, [5], 64).no


@pytest.mark.parametrize("cap", [1, 16, 1024])
def test_is_dominant_quadrant_boundary_is_unknown(quadrant_model, cap):
    res = core.is_dominant(quadrant_model, v(1, 0), [v(0, 1)], cap)
    assert res.unknown and res.budget == cap
    assert str(res) == f"unknown(budget={cap})"


def test_is_dominant_deck(sl2_model):
    assert core.is_dominant(sl2_model, sl2tilde.deck(1), sl2tilde.standard_probes(), 64).yes
    assert core.is_dominant(sl2_model, sl2tilde.exp_p(1.0, 0.0), sl2tilde.standard_probes(), 64).no


def test_tristate_validates():
    with pytest.raises(ValueError):
        core.TriState("maybe")


def test_is_dominant_needs_probes(int_model):
    with pytest.raises(ValueError):
        core.is_dominant(int_model, 1, [], 4)


# distance

def test_distance_to_self(quadrant_model, int_model):
    assert core.order_distance(quadrant_model, v(2, 5), v(2, 5), 32).value == 0
    assert core.order_distance(int_model, 7, 7, 32).value == 0


def test_distance_quadrant(quadrant_model):
    est = core.order_distance(quadrant_model, v(1, 1), v(2, 3), 512)
    assert abs(est.value - math.log(3)) <= 0.02


def test_distance_sl2(sl2_model):
    est = core.order_distance(sl2_model, sl2tilde.deck(1), sl2tilde.exp_j(2 * PI), 400)
    assert abs(est.value - math.log(2)) <= 0.05
    assert est.lower <= math.log(2) <= est.upper


def test_distance_needs_positive_growth(int_model):
    with pytest.raises(DomainError):
        core.order_distance(int_model, 1, 0, 8)


def _sl2_dominants():
    return [sl2tilde.deck(1), sl2tilde.exp_j(2 * PI), sl2tilde.exp_j(3 * PI),
            sl2tilde.multiply(sl2tilde.exp_j(7 * PI), sl2tilde.exp_p(0.3, 0.2))]


def test_distance_symmetric_and_triangle(sl2_model):
    doms = _sl2_dominants()
    n = 128
    d = {}
    for i, a in enumerate(doms):
        for j, b in enumerate(doms):
            if i != j:
                d[i, j] = core.order_distance(sl2_model, a, b, n)
    for (i, j), est in d.items():
        other = d[j, i]
        assert abs(est.value - other.value) <= max(est.width, other.width) + 1e-12
    for i in range(len(doms)):
        for j in range(len(doms)):
            for k in range(len(doms)):
                if len({i, j, k}) < 3:
                    continue
                slack = 3 * max(d[i, k].width, d[i, j].width, d[j, k].width)
                assert d[i, k].value <= d[i, j].value + d[j, k].value + slack


# axioms

def test_axioms_integers(int_model):
    rep = core.check_order_axioms(int_model, list(range(-20, 21)), 500)
    assert rep.ok and rep.checked["reflexive"] == 41


def test_axioms_order_from_identity(int_model):
    f = qm.Quasimorphism(eval=float, defect_bound=0.0)
    model = qm.order_from_qm(f, int_model)
    assert core.check_order_axioms(model, list(range(-20, 21)), 500).ok


def test_axioms_detects_corrupted_oracle(int_model):
    import dataclasses
    bad = dataclasses.replace(int_model, leq=lambda a, b: True)
    rep = core.check_order_axioms(bad, [0, 1, 2], 100)
    assert "antisymmetry" in rep.kinds()


def test_axioms_detects_non_invariant_order(int_model):
    import dataclasses
    # |a| <= |b| is reflexive but neither antisymmetric nor translation invariant
    bad = dataclasses.replace(int_model, leq=lambda a, b: abs(a) <= abs(b))
    kinds = core.check_order_axioms(bad, list(range(-5, 6)), 400).kinds()
    assert "antisymmetry" in kinds and "left invariance" in kinds


def test_axioms_sl2(sl2_model):
    rng = np.random.default_rng(3)
    sample = [sl2tilde.random_element(rng) for _ in range(12)] + [sl2tilde.identity()]
    assert core.check_order_axioms(sl2_model, sample, 300).ok


@pytest.mark.parametrize("n", list(range(-16, 17)))
def test_power_matches_iterated_multiply(sl2_model, n):
    g = sl2tilde.multiply(sl2tilde.exp_j(1.3), sl2tilde.exp_p(0.2, 0.1))
    it = sl2_model.identity
    step = g if n >= 0 else sl2_model.invert(g)
    for _ in range(abs(n)):
        it = sl2_model.multiply(it, step)
    assert sl2tilde.equal(sl2_model.power(g, n), it, 1e-9)


# collapse

def test_collapse_integers(int_model):
    f = qm.Quasimorphism(eval=float, defect_bound=0.0)
    assert core.verify_collapse(int_model, f, [1, 2, 5], 64) == 0


def test_collapse_sl2(sl2_model):
    f = sl2tilde.mu_quasimorphism()
    doms = [sl2tilde.deck(1), sl2tilde.exp_j(2 * PI), sl2tilde.exp_j(3 * PI)]
    assert core.verify_collapse(sl2_model, f, doms, 400) <= 0.05


def test_no_collapse_on_quadrant(quadrant_model, quadrant):
    from ordergrowth import abelian
    f = abelian.functional_qm(quadrant, 0)
    gap = core.verify_collapse(quadrant_model, f, [v(1, 1), v(1, 3)], 256)
    assert gap > 1.0
