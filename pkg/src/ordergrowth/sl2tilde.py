"""The universal cover of SL(2, R) as lifts of projective-line maps.

An element is a sign-normalized matrix ``M`` together with ``tau = F(0)``, where
``F`` is the monotone lift of the action of ``M`` on projective angles (period
pi).  For ``x`` in ``[0, pi]`` the lift is

    F(x) = tau + angle from M e1 to M u(x),    u(x) = (cos x, sin x),

and that oriented angle lies in ``[0, pi]`` because ``det M > 0``; it is computed
as ``atan2(sin x, <M^T M e1, u(x)>)``.  Outside ``[0, pi)`` use ``F(x + pi) = F(x) + pi``.

Conventions: ``J`` is half the standard rotation generator, so ``exp(tJ)``
translates angles by ``t/2``, the deck generator is ``exp(4 pi J)`` with lift
``x + 2 pi``, and ``mu = 2 * translation number`` has ``mu(exp(tJ)) = t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import qm
from .core import DEFAULT_TOLERANCE, GroupModel
from .errors import BudgetExceeded, DomainError, Uncertain
from .qm import Bounded

PI = math.pi
TWO_PI = 2.0 * math.pi
MU_DEFECT = TWO_PI
SANDWICH_C1 = TWO_PI + 0.1
DEFAULT_ITERATIONS = 4096


@dataclass(frozen=True)
class LiftedElement:
    m: Tuple[float, float, float, float]  # row-major (a, b, c, d)
    tau: float

    @property
    def matrix(self) -> np.ndarray:
        a, b, c, d = self.m
        return np.array([[a, b], [c, d]])

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        a, b, c, d = self.m
        return f"LiftedElement([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]], tau={self.tau:.9g})"


@dataclass(frozen=True)
class AlgebraElement:
    """``t J + [[a, b], [b, -a]]``: a J-component plus a symmetric traceless part."""

    t: float = 0.0
    a: float = 0.0
    b: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b - self.t / 2], [self.b + self.t / 2, -self.a]])

    @classmethod
    def from_matrix(cls, x) -> "AlgebraElement":
        x = np.asarray(x, dtype=float)
        if abs(x[0, 0] + x[1, 1]) > 1e-12:
            raise DomainError("algebra elements are traceless")
        return cls(t=x[1, 0] - x[0, 1], a=x[0, 0], b=(x[0, 1] + x[1, 0]) / 2)

    @property
    def is_symmetric(self) -> bool:
        return self.t == 0


J = AlgebraElement(t=1.0)


def sigma_basis():
    """The matrices assigned to ``X_alpha``, ``Y_alpha`` and ``h_alpha`` by the sl2 embedding."""
    x = np.array([[-1.0, 0.0], [0.0, 1.0]])
    y = np.array([[0.0, 1.0], [-1.0, 0.0]])
    h = np.array([[0.0, 1.0], [1.0, 0.0]])
    return x, y, h


def _normalize(a, b, c, d):
    if a < 0 or (a == 0 and c < 0):
        return (-a, -b, -c, -d)
    return (a, b, c, d)


def _make(m, tau) -> LiftedElement:
    m = tuple(float(v) for v in m)
    if not all(math.isfinite(v) for v in m) or not math.isfinite(tau):
        raise OverflowError("matrix entries left the floating-point range")
    return LiftedElement(_normalize(*m), float(tau))


IDENTITY = LiftedElement((1.0, 0.0, 0.0, 1.0), 0.0)


def deck(k: int) -> LiftedElement:
    return LiftedElement((1.0, 0.0, 0.0, 1.0), TWO_PI * int(k))


def identity() -> LiftedElement:
    return IDENTITY


def is_central(g: LiftedElement, tol: float = 1e-12) -> bool:
    a, b, c, d = g.m
    return abs(a - 1) <= tol and abs(b) <= tol and abs(c) <= tol and abs(d - 1) <= tol


def _lift_scalar(m, tau, x):
    a, b, c, d = m
    k = math.floor(x / PI)
    x0 = x - k * PI
    s = max(math.sin(x0), 0.0)
    dot = (a * a + c * c) * math.cos(x0) + (a * b + c * d) * math.sin(x0)
    return tau + math.atan2(s, dot) + k * PI


def lift_eval(g: LiftedElement, x):
    """Evaluate the monotone lift of ``g`` at ``x`` (scalar or array)."""
    if np.ndim(x) == 0:
        return _lift_scalar(g.m, g.tau, float(x))
    a, b, c, d = g.m
    x = np.asarray(x, dtype=float)
    k = np.floor(x / PI)
    x0 = x - k * PI
    sin0 = np.sin(x0)
    dot = (a * a + c * c) * np.cos(x0) + (a * b + c * d) * sin0
    return g.tau + np.arctan2(np.maximum(sin0, 0.0), dot) + k * PI


def multiply(g: LiftedElement, h: LiftedElement) -> LiftedElement:
    a1, b1, c1, d1 = g.m
    a2, b2, c2, d2 = h.m
    m = (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)
    return _make(m, _lift_scalar(g.m, g.tau, h.tau))


def inverse(g: LiftedElement) -> LiftedElement:
    a, b, c, d = g.m
    # tau of the inverse is the point y with F(y) = 0; y lies in [k pi, (k+1) pi)
    k = math.floor(-g.tau / PI)
    r = min(max(-g.tau - k * PI, 0.0), PI)
    # direction of M^-1 R(r) M e1, measured from e1; its second coordinate is sin(r)|M e1|^2
    cr, sr = math.cos(r), math.sin(r)
    p, q = a * cr - c * sr, a * sr + c * cr
    y0 = math.atan2(max(sr, 0.0) * (a * a + c * c), d * p - b * q)
    return _make((d, -b, -c, a), k * PI + y0)


def power(g: LiftedElement, n: int) -> LiftedElement:
    n = int(n)
    if is_central(g, 0.0):
        return LiftedElement(g.m, g.tau * n)
    if n < 0:
        g, n = inverse(g), -n
    result, base = IDENTITY, g
    while n:
        if n & 1:
            result = multiply(result, base)
        n >>= 1
        if n:
            base = multiply(base, base)
    return result


def equal(g: LiftedElement, h: LiftedElement, tol: float = DEFAULT_TOLERANCE) -> bool:
    scale = 1.0 + max(abs(v) for v in g.m + h.m)
    if any(abs(x - y) > tol * scale for x, y in zip(g.m, h.m)):
        return False
    return abs(g.tau - h.tau) <= tol * (1.0 + abs(g.tau))


def _exp_matrix(t, a, b):
    x = np.array([[a, b - t / 2], [b + t / 2, -a]])
    kappa = a * a + b * b - t * t / 4  # X^2 = kappa I
    if kappa > 0:
        r = math.sqrt(kappa)
        c0, c1 = math.cosh(r), math.sinh(r) / r
    elif kappa < 0:
        r = math.sqrt(-kappa)
        c0, c1 = math.cos(r), math.sin(r) / r
    else:
        c0, c1 = 1.0, 1.0
    e = c0 * np.eye(2) + c1 * x
    return e


def exp_from_algebra(x: AlgebraElement) -> LiftedElement:
    """``exp(X)`` lifted along the path ``s -> exp(sX)``, ``s`` in ``[0, 1]``."""
    t, a, b = float(x.t), float(x.a), float(x.b)
    if a == 0 and b == 0:
        half = t / 2
        c, s = math.cos(half), math.sin(half)
        # snap the rounding residue of cos/sin at multiples of pi/2
        c = 0.0 if abs(c) < 1e-15 else c
        s = 0.0 if abs(s) < 1e-15 else s
        return _make((c, -s, s, c), half)
    e = _exp_matrix(t, a, b)
    end = math.atan2(e[1, 0], e[0, 0])
    if t == 0:
        # exp of a symmetric matrix is positive definite: first column in the right half-plane
        return _make(tuple(e.ravel()), end)
    norm = math.sqrt(2 * (a * a + b * b) + t * t / 2)
    steps = max(8, int(math.ceil(8 * norm / PI)) + 1)
    angle, prev = 0.0, 0.0
    for j in range(1, steps + 1):
        col = _exp_matrix(t * j / steps, a * j / steps, b * j / steps)[:, 0]
        cur = math.atan2(col[1], col[0])
        angle += (cur - prev + PI / 2) % PI - PI / 2
        prev = cur
    tau = end + PI * round((angle - end) / PI)
    return _make(tuple(e.ravel()), tau)


def exp_j(t: float) -> LiftedElement:
    return exp_from_algebra(AlgebraElement(t=t))


def exp_p(a: float, b: float) -> LiftedElement:
    return exp_from_algebra(AlgebraElement(a=a, b=b))


def displacement(g: LiftedElement, x):
    return lift_eval(g, x) - np.asarray(x, dtype=float)


def _critical_points(g: LiftedElement):
    # F'(x) = 1 / |M u(x)|^2, so the displacement is stationary where |M u| = 1
    a, b, c, d = g.m
    p, s, r = a * a + c * c - 1.0, b * b + d * d - 1.0, a * b + c * d
    half = (p - s) / 2
    amp = math.hypot(half, r)
    if amp < 1e-14:
        return []
    phi = math.atan2(r, half)
    level = min(1.0, max(-1.0, -(p + s) / (2 * amp)))
    spread = math.acos(level)
    return [((phi + spread) / 2) % PI, ((phi - spread) / 2) % PI]


def min_displacement(g: LiftedElement, grid_size: int = 64) -> Bounded:
    """Minimum of ``F(x) - x`` over one period.

    The minimum of a smooth periodic function sits at a critical point, and the
    critical points have a closed form, so the value is exact up to rounding;
    the returned error covers that rounding.
    """
    xs = np.concatenate([np.arange(grid_size) * (PI / grid_size), _critical_points(g)])
    m = float(np.min(displacement(g, xs)))
    err = 1e-12 * (1.0 + abs(g.tau))
    return Bounded(m, err)


def lipschitz_constant(g: LiftedElement) -> float:
    """Bound on ``|F'(x) - 1|``: ``F'`` ranges over ``[1/sigma^2, sigma^2]``."""
    a, b, c, d = g.m
    fro2 = a * a + b * b + c * c + d * d
    # sigma_max^2 + sigma_min^2 = |M|_F^2 and sigma_max sigma_min = 1
    smax2 = (fro2 + math.sqrt(max(fro2 * fro2 - 4.0, 0.0))) / 2
    return max(smax2 - 1.0, 0.0)


def displacement_enclosure(g: LiftedElement, grid_size: int = 64, resolution: float = 1e-9,
                           max_evals: int = 200_000):
    """Certified ``(lo, hi)`` around the minimal displacement by Lipschitz branch and bound.

    Uses only grid evaluations and :func:`lipschitz_constant`, independent of
    the closed-form critical points in :func:`min_displacement`.  Refinement
    stops once ``hi - lo <= resolution`` or the evaluation budget runs out.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    lip = lipschitz_constant(g)
    xs = np.linspace(0.0, PI, grid_size + 1)
    vals = displacement(g, xs)
    hi = float(vals.min())
    a, b, fa, fb = xs[:-1], xs[1:], vals[:-1], vals[1:]
    evals = grid_size + 1
    while True:
        bounds = (fa + fb) / 2 - lip * (b - a) / 2
        lo = min(float(bounds.min()), hi)
        if hi - lo <= resolution or evals >= max_evals:
            return lo, hi
        keep = bounds <= hi - resolution
        a, b, fa, fb = a[keep], b[keep], fa[keep], fb[keep]
        if a.size == 0:
            return hi - resolution, hi
        mid = (a + b) / 2
        fm = displacement(g, mid)
        evals += mid.size
        hi = min(hi, float(fm.min()))
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        fa, fb = np.concatenate([fa, fm]), np.concatenate([fm, fb])


def is_positive(g: LiftedElement, grid_size: int = 64, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Dynamical order: ``g >= e`` iff ``F(x) >= x`` everywhere (closed up to ``tol``)."""
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    m, err = min_displacement(g, grid_size)
    if m - err >= -tol:
        return True
    if m < -tol:
        return False
    raise Uncertain(f"minimal displacement {m:.3e} within {err:.1e} of -{tol:.1e}")


def translation_number_iterated(g: LiftedElement, iterations: int = DEFAULT_ITERATIONS) -> Bounded:
    """``F^N(0) / N``; ``|F^N(0) - N rho| < pi`` gives the error ``pi / N``."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    x = 0.0
    for _ in range(iterations):
        x = _lift_scalar(g.m, g.tau, x)
    return Bounded(x / iterations, PI / iterations)


def translation_number(g: LiftedElement) -> float:
    """Exact translation number by conjugacy type.

    Central: ``tau``.  Elliptic: conjugate to a rotation, whose lift is a pure
    translation.  Otherwise there is a fixed projective direction ``x*`` and
    ``F(x*) - x*`` is a multiple of pi.
    """
    a, b, c, d = g.m
    if is_central(g):
        return g.tau
    tr = a + d
    if abs(tr) < 2.0:
        half = tr / 2
        sin_theta = math.copysign(math.sqrt(1.0 - half * half), c)
        theta = math.atan2(sin_theta, half)
        # P = [e1 | M e1] with M = (A - cos I) / sin; P e1 is along e1 so its lift has tau = 0
        p01 = (a - half) / sin_theta
        p11 = c / sin_theta  # det P > 0 since sin_theta has the sign of c
        scale = math.sqrt(p11)
        conj_p = LiftedElement((1.0 / scale, p01 / scale, 0.0, p11 / scale), 0.0)
        rot = multiply(multiply(inverse(conj_p), g), conj_p)
        return theta + PI * round((rot.tau - theta) / PI)
    w, v = np.linalg.eig(g.matrix)
    idx = int(np.argmax(np.abs(w.real)))
    vec = v[:, idx].real
    xstar = math.atan2(vec[1], vec[0]) % PI
    return PI * round((_lift_scalar(g.m, g.tau, xstar) - xstar) / PI)


def mu(g: LiftedElement, iterations: int | None = None) -> Bounded:
    """The homogeneous quasimorphism normalized by ``mu(exp(J)) = 1``: twice the translation number.

    Without ``iterations`` the closed form of :func:`translation_number` is used;
    with it, the orbit average of :func:`translation_number_iterated` (error ``2 pi / N``).
    """
    if iterations is None:
        return Bounded(2.0 * translation_number(g), 0.0)
    rho, err = translation_number_iterated(g, iterations)
    return Bounded(2.0 * rho, 2.0 * err)


def mu_quasimorphism() -> qm.Quasimorphism:
    return qm.Quasimorphism(eval=lambda g: mu(g).value, defect_bound=MU_DEFECT, name="mu")


def displacement_quasimorphism() -> qm.Quasimorphism:
    """``g -> F_g(0)``: a non-homogeneous quasimorphism whose homogenization is the translation number."""
    return qm.Quasimorphism(eval=lambda g: g.tau, defect_bound=PI, homogeneous=False, name="tau")


def dynamical_model(tol: float = DEFAULT_TOLERANCE, grid_size: int = 64) -> GroupModel:
    """The cover with the dynamical order, registered as sandwiched by ``mu``."""
    return GroupModel(
        identity=IDENTITY,
        multiply=multiply,
        invert=inverse,
        leq=lambda a, b: is_positive(multiply(inverse(a), b), grid_size, tol),
        equal=lambda a, b: equal(a, b, max(tol, 1e-9)),
        power_fn=power,
        tolerance=tol,
        sandwich=qm.Sandwich(mu_quasimorphism(), c1=SANDWICH_C1, c2=0.0),
        name="sl2",
    )


def reduce_to_me_bound(x: AlgebraElement, n_max: int = 8) -> int:
    """Least ``n >= 0`` with ``deck(n) exp(X) >= e`` for symmetric traceless ``X``."""
    if not x.is_symmetric:
        raise DomainError("X must be symmetric traceless (no J-component)")
    p = exp_from_algebra(x)
    for n in range(n_max + 1):
        if is_positive(multiply(deck(n), p)):
            return n
    raise BudgetExceeded(f"no n <= {n_max} makes deck(n) exp(X) positive", budget=n_max)


def random_symmetric(rng, max_norm: float = 1.0) -> AlgebraElement:
    """Symmetric traceless element with operator norm ``sqrt(a^2 + b^2) <= max_norm``."""
    r = max_norm * math.sqrt(rng.uniform())
    phi = rng.uniform(0, TWO_PI)
    return AlgebraElement(a=r * math.cos(phi), b=r * math.sin(phi))


def random_element(rng, turns: float = 3.0, spread: float = 1.0) -> LiftedElement:
    """``exp(tJ) exp(P)`` with ``|t| <= 2 pi turns`` and ``|P| <= spread``."""
    t = rng.uniform(-TWO_PI * turns, TWO_PI * turns)
    return multiply(exp_j(t), exp_from_algebra(random_symmetric(rng, spread)))


def standard_probes():
    return [
        exp_j(1.0), exp_j(-1.0), exp_j(7.0), exp_j(-20.0),
        deck(3), deck(-3),
        exp_p(2.0, 0.0), exp_p(-1.0, 3.0),
        multiply(exp_j(-9.0), exp_p(1.5, -0.5)),
    ]


def parse_element(text: str) -> LiftedElement:
    """Parse ``expJ:<t>``, ``deck:<k>`` and ``expP:<a>,<b>`` factors joined by ``*``.

    Numbers may carry a ``pi`` suffix, e.g. ``expJ:3pi``.
    """
    result = IDENTITY
    for factor in text.split("*"):
        factor = factor.strip()
        kind, _, arg = factor.partition(":")
        if kind == "deck":
            g = deck(int(arg))
        elif kind == "expJ":
            g = exp_j(_number(arg))
        elif kind == "expP":
            parts = arg.split(",")
            if len(parts) != 2:
                raise ValueError(f"expP needs two numbers, got {arg!r}")
            g = exp_p(_number(parts[0]), _number(parts[1]))
        else:
            raise ValueError(f"unknown element factor {factor!r}")
        result = multiply(result, g)
    return result


def _number(text: str) -> float:
    text = text.strip()
    if text.endswith("pi"):
        head = text[:-2].strip()
        return (float(head) if head not in ("", "+", "-") else float(head + "1")) * PI
    return float(text)
