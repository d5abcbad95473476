"""Vector groups ordered by polyhedral cones ``{v : alpha(v) >= 0 for all alpha}``.

Here relative growth and the order distance have closed forms, which makes
this model the exact oracle for the generic search in :mod:`ordergrowth.core`.
Vectors and functionals are tuples of :class:`fractions.Fraction`; with
``tolerance=0`` every predicate is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Tuple

import numpy as np
from scipy.optimize import linprog

from . import _linalg, qm
from .core import DEFAULT_TOLERANCE, GroupModel
from .errors import DimensionMismatch, DomainError

Vector = Tuple[Fraction, ...]


def as_vector(values) -> Vector:
    out = []
    for v in values:
        if isinstance(v, float):
            # floats come from numeric code; go through repr for a short rational
            v = repr(v)
        out.append(Fraction(v))
    return tuple(out)


@dataclass(frozen=True)
class ConeOrder:
    functionals: Tuple[Vector, ...]
    tolerance: float = 0

    def __post_init__(self):
        fs = tuple(as_vector(a) for a in self.functionals)
        if not fs:
            raise ValueError("a cone needs at least one functional")
        d = len(fs[0])
        if d == 0 or any(len(a) != d for a in fs):
            raise DimensionMismatch("functionals must share one positive dimension")
        object.__setattr__(self, "functionals", fs)
        # {v : A v >= 0 and -A v >= 0} = ker A, so pointed iff A has full column rank
        if _linalg.rank(fs) != d:
            raise ValueError("cone is not pointed: functionals do not span the dual space")
        if interior_witness(self) is None:
            raise ValueError("cone has empty interior")

    @property
    def dim(self) -> int:
        return len(self.functionals[0])


def _values(order: ConeOrder, v) -> list:
    if len(v) != order.dim:
        raise DimensionMismatch(f"expected a vector of length {order.dim}, got {len(v)}")
    return [sum(a * x for a, x in zip(alpha, v)) for alpha in order.functionals]


def interior_witness(order: ConeOrder):
    """A rational vector with every functional strictly positive, or None."""
    fs = order.functionals
    d = len(fs[0])
    total = tuple(sum(col) for col in zip(*fs))
    if all(x > 0 for x in _raw_values(fs, total)):
        return total
    # maximize t subject to A v >= t, -1 <= v <= 1, t <= 1
    a = np.array([[float(x) for x in alpha] for alpha in fs])
    m = len(fs)
    res = linprog(
        c=np.r_[np.zeros(d), -1.0],
        A_ub=np.c_[-a, np.ones(m)],
        b_ub=np.zeros(m),
        bounds=[(-1, 1)] * d + [(None, 1)],
        method="highs",
    )
    if res.status != 0 or -res.fun <= 1e-12:
        return None
    for denom in (10 ** 3, 10 ** 6, 10 ** 9):
        v = tuple(Fraction(x).limit_denominator(denom) for x in res.x[:d])
        if all(x > 0 for x in _raw_values(fs, v)):
            return v
    return None


def _raw_values(fs, v):
    return [sum(a * x for a, x in zip(alpha, v)) for alpha in fs]


def member(order: ConeOrder, v) -> bool:
    return all(x >= -order.tolerance for x in _values(order, v))


def dominant(order: ConeOrder, v) -> bool:
    return all(x > order.tolerance for x in _values(order, v))


def gamma_closed_form(order: ConeOrder, v, w) -> Fraction:
    """``max_alpha alpha(w) / alpha(v)``; exact for rational input."""
    if not dominant(order, v):
        raise DomainError("v must lie in the interior of the cone")
    return max(b / a for a, b in zip(_values(order, v), _values(order, w)))


def distance_closed_form(order: ConeOrder, v, w) -> float:
    """``max_alpha |log alpha(v) - log alpha(w)|`` with the functionals as supplied."""
    if not (dominant(order, v) and dominant(order, w)):
        raise DomainError("both arguments must lie in the interior of the cone")
    return max(abs(math.log(a / b)) for a, b in zip(_values(order, v), _values(order, w)))


def exact_distance_exponent(order: ConeOrder, v, w) -> Fraction:
    """``exp(distance_closed_form)`` as an exact rational."""
    if not (dominant(order, v) and dominant(order, w)):
        raise DomainError("both arguments must lie in the interior of the cone")
    return max(max(a / b, b / a) for a, b in zip(_values(order, v), _values(order, w)))


def cone_model(order: ConeOrder) -> GroupModel:
    d = order.dim
    zero = tuple(Fraction(0) for _ in range(d))
    tol = order.tolerance

    def leq(a, b):
        return member(order, tuple(y - x for x, y in zip(a, b)))

    def equal(a, b):
        return all(abs(x - y) <= tol for x, y in zip(a, b))

    return GroupModel(
        identity=zero,
        multiply=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        invert=lambda a: tuple(-x for x in a),
        leq=leq,
        equal=equal,
        power_fn=lambda a, n: tuple(n * x for x in a),
        tolerance=float(tol),
        name=f"cone{d}",
    )


def functional_qm(order: ConeOrder, index: int) -> qm.Quasimorphism:
    """A single defining functional, viewed as a homomorphism (defect 0)."""
    alpha = order.functionals[index]
    return qm.Quasimorphism(
        eval=lambda v: float(sum(a * x for a, x in zip(alpha, v))),
        defect_bound=0.0,
        name=f"alpha{index}",
    )


def quadrant(tolerance: float = 0) -> ConeOrder:
    return ConeOrder(((1, 0), (0, 1)), tolerance=tolerance)


def parse_vector(text: str) -> Vector:
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError(f"empty vector literal {text!r}")
    return tuple(Fraction(p) for p in parts)


def load_cone(path, tolerance: float = DEFAULT_TOLERANCE) -> ConeOrder:
    """Read a cone file: one functional per line, space-separated rationals or decimals.

    Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(Fraction(tok) for tok in line.split()))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return ConeOrder(tuple(rows), tolerance=tolerance)


def random_pointed_cone(rng, max_dim: int = 4, max_functionals: int = 6, max_entry: int = 5):
    """A random pointed cone with rational functionals, plus one interior point.

    Functionals are integer vectors with signs flipped so that a random integer
    point is strictly positive on all of them.
    """
    while True:
        d = int(rng.integers(1, max_dim + 1))
        m = int(rng.integers(d, max_functionals + 1))
        center = tuple(int(x) for x in rng.integers(-max_entry, max_entry + 1, size=d))
        if not any(center):
            continue
        fs = []
        for _ in range(m):
            alpha = [int(x) for x in rng.integers(-max_entry, max_entry + 1, size=d)]
            s = sum(a * c for a, c in zip(alpha, center))
            if s == 0:
                break
            fs.append(tuple(Fraction(a if s > 0 else -a) for a in alpha))
        if len(fs) != m or _linalg.rank(fs) != d:
            continue
        return ConeOrder(tuple(fs)), tuple(Fraction(c) for c in center)


def random_interior_point(order: ConeOrder, center, rng, spread: float = 0.5, denom: int = 8):
    """A rational point near ``center`` (scaled) that is strictly inside the cone."""
    while True:
        scale = Fraction(int(rng.integers(1, 4 * denom)), denom)
        jitter = [Fraction(int(rng.integers(-denom, denom + 1)), denom) * Fraction(spread).limit_denominator(100)
                  for _ in center]
        v = tuple(scale * c + j for c, j in zip(center, jitter))
        if dominant(order, v):
            return v


def non_collapse_witness(order: ConeOrder, v, index: int, ratio: Fraction = Fraction(2)):
    """Return ``w`` in the interior with ``alpha_index(w) = alpha_index(v)`` and distance ``log ratio``.

    ``w = v + t u`` with ``u`` in the kernel of the chosen functional; ``t`` is the
    first time some other functional reaches ``ratio`` or ``1/ratio`` times its
    value at ``v``.  Needs the functionals to span at least two dimensions.
    """
    if not dominant(order, v):
        raise DomainError("v must lie in the interior of the cone")
    alpha = order.functionals[index]
    kernel = _kernel_vector(alpha, order.functionals)
    if kernel is None:
        raise DomainError("every direction in the kernel of this functional is killed by all functionals")
    at_v = _values(order, v)
    along = _raw_values(order.functionals, kernel)
    ratio = Fraction(ratio)
    times = []
    for a, b in zip(at_v, along):
        if b > 0:
            times.append(a * (ratio - 1) / b)
        elif b < 0:
            times.append(a * (1 - 1 / ratio) / -b)
    t = min(times)
    return tuple(x + t * u for x, u in zip(v, kernel))


def _kernel_vector(alpha, functionals):
    d = len(alpha)
    # basis of ker(alpha) from the reduced row of alpha
    red = _linalg.row_reduce([alpha])
    pivot = next(i for i, x in enumerate(red[0]) if x != 0)
    for free in range(d):
        if free == pivot:
            continue
        u = [Fraction(0)] * d
        u[free] = Fraction(1)
        u[pivot] = -red[0][free]
        if any(x != 0 for x in _raw_values(functionals, u)):
            return tuple(u)
    return None
