"""Quasimorphisms: defect estimation, homogenization, the induced order and
a-priori bounds on the growth sequence of a sandwiched order.

A quasimorphism is stored together with an *upper* bound on its defect.  Sampling
(``estimate_defect``) can only ever produce a lower bound, so it is used to
validate the configured bound, never to replace it.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Callable, List, NamedTuple

import numpy as np

from .errors import BudgetExceeded, DomainError


class Bounded(NamedTuple):
    """A real number together with a certified absolute error bound."""

    value: float
    error: float


@dataclass(frozen=True)
class Quasimorphism:
    eval: Callable[[Any], float]
    defect_bound: float
    homogeneous: bool = True
    name: str = "f"

    def __post_init__(self):
        if not self.defect_bound >= 0:
            raise ValueError("defect_bound must be a nonnegative real")

    def __call__(self, g) -> float:
        return float(self.eval(g))


@dataclass(frozen=True)
class Sandwich:
    """Registration of ``f`` as sandwiching an order: ``f(g) >= c1`` implies ``g >= e``
    and ``g >= e`` implies ``f(g) >= c2``."""

    f: Quasimorphism
    c1: float
    c2: float = 0.0


@dataclass
class SandwichReport:
    checked: int = 0
    # (element, f-value) pairs with f >= C1 but not in the order semigroup
    lower_violations: List[tuple] = field(default_factory=list)
    # elements of the order semigroup with f < C2
    upper_violations: List[tuple] = field(default_factory=list)
    # elements of the order semigroup with f < 0, checked only when no lower violation was seen
    no_upper_bound_violations: List[tuple] = field(default_factory=list)
    no_upper_bound_checked: bool = False

    @property
    def ok(self) -> bool:
        return not (self.lower_violations or self.upper_violations
                    or self.no_upper_bound_violations)

    def summary(self) -> str:
        if self.ok:
            return f"no counterexamples ({self.checked} elements checked)"
        return (f"{len(self.lower_violations)} lower, {len(self.upper_violations)} upper, "
                f"{len(self.no_upper_bound_violations)} sign counterexamples "
                f"({self.checked} elements checked)")


def estimate_defect(f: Quasimorphism, model, sampler, trials: int, seed: int = 0) -> float:
    """Largest observed ``f(gh) - f(g) - f(h)`` over random pairs.

    This is a lower bound on the true defect.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(trials):
        g, h = sampler(rng), sampler(rng)
        worst = max(worst, f(model.multiply(g, h)) - f(g) - f(h))
    return worst


def homogenize(f: Quasimorphism, model, g, k_max: int) -> Bounded:
    """Approximate the homogenization of ``f`` at ``g`` by ``f(g^(2^k)) / 2^k``.

    The error bound ``D / 2^k`` uses ``f.defect_bound`` as a bound on
    ``|f(xy) - f(x) - f(y)|``.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    x = g
    try:
        for _ in range(k_max):
            x = model.multiply(x, x)
        value = f(x)
    except (OverflowError, FloatingPointError) as exc:
        raise BudgetExceeded(f"power g^(2^{k_max}) overflowed", budget=k_max) from exc
    if not math.isfinite(value):
        raise BudgetExceeded(f"f(g^(2^{k_max})) is not finite", budget=k_max)
    scale = 2.0 ** k_max
    return Bounded(value / scale, f.defect_bound / scale)


def order_from_qm(f: Quasimorphism, model, margin: float = 1e-6):
    """The order ``a <=_f b`` iff ``a = b`` or ``f(b^-1 a) < -D``, as a new model.

    The returned model registers ``f`` as sandwiching the new order with
    ``C1 = D + margin`` and ``C2 = 0``.
    """
    if not f.homogeneous:
        raise DomainError("order_from_qm needs a homogeneous quasimorphism")
    bound = f.defect_bound

    def leq(a, b):
        if model.equal(a, b):
            return True
        return f(model.multiply(model.invert(b), a)) < -bound

    return dataclasses.replace(
        model,
        leq=leq,
        sandwich=Sandwich(f, c1=bound + margin, c2=0.0),
        name=f"{model.name}/order({f.name})",
    )


def sandwich_check(model, f: Quasimorphism, c1: float, c2: float, sampler, trials: int,
                   seed: int = 0, tol: float = 1e-6) -> SandwichReport:
    """Search random elements for counterexamples to ``Q(C1) ⊂ G+ ⊂ Q(C2)``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    report = SandwichReport()
    positives = []
    for _ in range(trials):
        g = sampler(rng)
        value = f(g)
        positive = bool(model.leq(model.identity, g))
        report.checked += 1
        if value >= c1 and not positive:
            report.lower_violations.append((g, value))
        if positive:
            positives.append((g, value))
            if value < c2 - tol:
                report.upper_violations.append((g, value))
    if not report.lower_violations:
        # upper inclusion with C2 = 0 is then forced
        report.no_upper_bound_checked = True
        report.no_upper_bound_violations = [(g, v) for g, v in positives if v < -tol]
    return report


def gamma_bounds(f: Quasimorphism, c1: float, g, h, n: int):
    """Two-sided bound on ``gamma_n(g, h) / n`` for an order sandwiched by ``f`` with constant ``c1``."""
    fg, fh = f(g), f(h)
    if fg <= 0:
        raise DomainError(f"f(g) = {fg} must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    d = f.defect_bound
    ratio = fh / fg
    return ratio - d / (n * fg), ratio + (c1 + d + fg) / (n * fg)


def predicted_gamma(f: Quasimorphism, g, h) -> float:
    fg = f(g)
    if fg == 0:
        raise DomainError("f(g) = 0: relative growth is not determined by f")
    return f(h) / fg
