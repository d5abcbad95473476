"""Group/order interface and the relative-growth engine.

A :class:`GroupModel` bundles the group law with an order oracle ``leq(a, b)``
("a <= b").  Everything else here only talks to a model through that interface:

* :func:`gamma_n` -- ``min{p : g^p >= h^n}`` by galloping plus bisection,
* :func:`relative_growth` -- ``gamma_n / n`` along a doubling schedule,
* :func:`order_distance` -- ``log max(gamma(g, h), gamma(h, g))``,
* :func:`is_dominant`, :func:`check_order_axioms`, :func:`verify_collapse`.
"""
from __future__ import annotations

import itertools
import logging
import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import qm
from .errors import BudgetExceeded, DomainError

log = logging.getLogger(__name__)

SEARCH_CAP = 2 ** 20
DEFAULT_TOLERANCE = 1e-9


def _square_and_multiply(multiply, invert, identity, g, n):
    if n < 0:
        g, n = invert(g), -n
    result, base = identity, g
    while n:
        if n & 1:
            result = multiply(result, base)
        n >>= 1
        if n:
            base = multiply(base, base)
    return result


@dataclass(frozen=True)
class GroupModel:
    """A group with a bi-invariant partial order given by a membership oracle."""

    identity: Any
    multiply: Callable[[Any, Any], Any]
    invert: Callable[[Any], Any]
    leq: Callable[[Any, Any], bool]
    equal: Callable[[Any, Any], bool] = operator.eq
    power_fn: Optional[Callable[[Any, int], Any]] = None
    tolerance: float = 0.0
    sandwich: Optional[qm.Sandwich] = None
    name: str = "group"

    def power(self, g, n: int):
        if self.power_fn is not None:
            return self.power_fn(g, n)
        return _square_and_multiply(self.multiply, self.invert, self.identity, g, n)

    def is_positive(self, g) -> bool:
        return bool(self.leq(self.identity, g))


@dataclass(frozen=True)
class GrowthEstimate:
    """Estimate of a relative growth (or of a distance derived from it).

    ``rows`` holds ``(n, gamma_n, lower_n, upper_n)`` for each point of the
    schedule.  When ``certified`` is true, ``[lower, upper]`` provably contains
    the limit; otherwise it is the spread of the last doubling step.
    """

    value: float
    n_used: int
    lower: float
    upper: float
    certified: bool = False
    rows: Tuple[Tuple[int, int, float, float], ...] = ()

    def __post_init__(self):
        if not (self.lower <= self.value <= self.upper):
            raise ValueError(f"bracket [{self.lower}, {self.upper}] misses value {self.value}")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class TriState:
    """Outcome of a semi-decidable test: ``"yes"``, ``"no"`` or ``"unknown"``."""

    state: str
    budget: Optional[int] = None

    def __post_init__(self):
        if self.state not in ("yes", "no", "unknown"):
            raise ValueError(f"bad state {self.state!r}")

    @property
    def yes(self):
        return self.state == "yes"

    @property
    def no(self):
        return self.state == "no"

    @property
    def unknown(self):
        return self.state == "unknown"

    def __str__(self):
        if self.unknown:
            return f"unknown(budget={self.budget})"
        return self.state


def integer_model() -> GroupModel:
    """The integers under addition with the usual order, sandwiched by the identity map."""
    ident = qm.Quasimorphism(eval=float, defect_bound=0.0, name="id")
    return GroupModel(
        identity=0,
        multiply=operator.add,
        invert=operator.neg,
        leq=operator.le,
        power_fn=operator.mul,
        sandwich=qm.Sandwich(ident, c1=1.0, c2=0.0),
        name="int",
    )


def gamma_n(model: GroupModel, g, h, n: int, bracket: Optional[Tuple[int, int]] = None,
            cap: int = SEARCH_CAP) -> int:
    """Return ``min{p : g^p >= h^n}``.

    The predicate ``p -> h^n <= g^p`` must be upward closed (true when ``g >= e``).
    ``bracket=(lo, hi)`` is a hint that the answer lies in ``[lo, hi]``; it is
    checked, and widened by galloping if wrong.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    target = model.power(h, n)

    def holds(p):
        return bool(model.leq(target, model.power(g, p)))

    # invariant: holds(hi) and not holds(lo)
    if bracket is not None:
        lo, hi = int(bracket[0]) - 1, int(bracket[1])
        if lo >= hi:
            lo = hi - 1
        if not holds(hi):
            lo, hi = _gallop_up(holds, hi, cap)
        elif holds(lo):
            lo, hi = _gallop_down(holds, lo, cap)
    elif holds(0):
        lo, hi = _gallop_down(holds, 0, cap)
    else:
        lo, hi = _gallop_up(holds, 0, cap)

    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _gallop_up(holds, start, cap):
    # holds(start) is false
    step = 1
    lo = start
    while True:
        p = start + step
        if p > cap:
            raise BudgetExceeded(
                f"no p <= {cap} with g^p >= h^n (g not dominant, or cap too small)", budget=cap)
        if holds(p):
            return lo, p
        lo = p
        step *= 2


def _gallop_down(holds, start, cap):
    # holds(start) is true
    step = 1
    hi = start
    while True:
        p = start - step
        if p < -cap:
            raise BudgetExceeded(f"g^p >= h^n holds for every p >= -{cap}", budget=cap)
        if not holds(p):
            return p, hi
        hi = p
        step *= 2


def doubling_schedule(n_max: int) -> List[int]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ns = [1]
    while ns[-1] * 2 <= n_max:
        ns.append(ns[-1] * 2)
    if ns[-1] != n_max:
        ns.append(n_max)
    return ns


def relative_growth(model: GroupModel, g, h, n_max: int) -> GrowthEstimate:
    """Estimate ``gamma(g, h) = lim gamma_n(g, h) / n`` along a doubling schedule.

    Bi-invariance makes ``gamma_n`` subadditive, so the limit is the infimum of
    the quotients and every computed quotient is an upper bound for it.  With a
    sandwiching quasimorphism registered on the model, the lower end of
    :func:`qm.gamma_bounds` certifies the other side.
    """
    sandwich = model.sandwich
    certified = sandwich is not None
    rows = []
    best_upper = math.inf
    prev_q = None
    for n in doubling_schedule(n_max):
        hint = None
        if sandwich is not None:
            lo_b, hi_b = qm.gamma_bounds(sandwich.f, sandwich.c1, g, h, n)
            hint = (math.floor(n * lo_b), math.ceil(n * hi_b))
        gn = gamma_n(model, g, h, n, bracket=hint)
        q = gn / n
        best_upper = min(best_upper, q)
        if sandwich is not None:
            if not (lo_b - 1e-12 <= q <= hi_b + 1e-12):
                log.warning("gamma_%d/%d = %s escapes the sandwich bound [%s, %s]",
                            n, n, q, lo_b, hi_b)
                certified = False
            lower, upper = min(lo_b, q), q
        else:
            ref = q if prev_q is None else prev_q
            lower, upper = min(ref, q), max(ref, q)
        rows.append((n, gn, lower, upper))
        prev_q = q
    n, gn, lower, upper = rows[-1]
    return GrowthEstimate(value=gn / n, n_used=n, lower=lower, upper=upper,
                          certified=certified, rows=tuple(rows))


def is_dominant(model: GroupModel, g, probes: Sequence, n_cap: int) -> TriState:
    """Decide membership of ``g`` in the dominant set, up to a power budget."""
    if not probes:
        raise ValueError("probes must be non-empty")
    if model.equal(g, model.identity) or not model.is_positive(g):
        return TriState("no")
    for h in probes:
        n, found = 1, False
        while True:
            if model.leq(h, model.power(g, n)):
                found = True
                break
            if n >= n_cap:
                break
            n = min(2 * n, n_cap)
        if not found:
            return TriState("unknown", budget=n_cap)
    return TriState("yes", budget=n_cap)


def order_distance(model: GroupModel, g, h, n_max: int) -> GrowthEstimate:
    """``log max(gamma(g, h), gamma(h, g))`` with the interval carried through."""
    a = relative_growth(model, g, h, n_max)
    b = relative_growth(model, h, g, n_max)
    if a.lower <= 0 or b.lower <= 0:
        raise DomainError(
            f"growth lower bounds {a.lower}, {b.lower} must be positive for the logarithm")
    return GrowthEstimate(
        value=math.log(max(a.value, b.value)),
        n_used=a.n_used,
        lower=math.log(max(a.lower, b.lower)),
        upper=math.log(max(a.upper, b.upper)),
        certified=a.certified and b.certified,
    )


@dataclass
class AxiomReport:
    violations: List[Tuple[str, tuple]] = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self):
        return sorted({kind for kind, _ in self.violations})


def check_order_axioms(model: GroupModel, sample: Sequence, trials: int, seed: int = 0) -> AxiomReport:
    """Test reflexivity, antisymmetry, transitivity and bi-invariance on random samples."""
    if not sample:
        raise ValueError("sample must be non-empty")
    rng = np.random.default_rng(seed)
    report = AxiomReport()
    counts = dict(reflexive=0, antisymmetric=0, transitive=0, invariant=0)
    leq, mul = model.leq, model.multiply

    def pick():
        return sample[int(rng.integers(len(sample)))]

    for a in sample:
        counts["reflexive"] += 1
        if not leq(a, a):
            report.violations.append(("reflexivity", (a,)))
    for _ in range(trials):
        a, b, c, k = pick(), pick(), pick(), pick()
        ab, ba = leq(a, b), leq(b, a)
        if ab and ba:
            counts["antisymmetric"] += 1
            if not model.equal(a, b):
                report.violations.append(("antisymmetry", (a, b)))
        if ab:
            counts["invariant"] += 1
            if not leq(mul(k, a), mul(k, b)):
                report.violations.append(("left invariance", (a, b, k)))
            if not leq(mul(a, k), mul(b, k)):
                report.violations.append(("right invariance", (a, b, k)))
            if leq(b, c):
                counts["transitive"] += 1
                if not leq(a, c):
                    report.violations.append(("transitivity", (a, b, c)))
    report.checked = counts
    return report


def verify_collapse(model: GroupModel, f: qm.Quasimorphism, dominants: Sequence, n_max: int) -> float:
    """Largest gap between the order distance and ``|log f(g) - log f(h)|`` over pairs."""
    worst = 0.0
    for g, h in itertools.combinations(dominants, 2):
        d = order_distance(model, g, h, n_max).value
        fg, fh = f(g), f(h)
        # |log f(g) - log f(h)|, written as a single log so exact ratios stay exact
        worst = max(worst, abs(d - math.log(max(fg / fh, fh / fg))))
    return worst
