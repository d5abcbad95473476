"""Hermitian root data for sp(2n, R) and su(p, q), in exact arithmetic.

Roots, coroots and Cartan vectors live in an ambient coordinate space:
``R^n`` for sp(2n, R) and ``R^(p+q)`` for su(p, q), where the Cartan is the
sum-zero hyperplane.  Vectors are tuples of :class:`fractions.Fraction`, and
``x`` stands for the coordinates of ``iX`` so that ``alpha(iX)`` is a dot product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Tuple

import numpy as np
from scipy.optimize import linprog

from . import _linalg
from .errors import BudgetExceeded, DimensionMismatch, UnsupportedFamily

Vector = Tuple[Fraction, ...]
WEYL_CAP = 10 ** 4


@dataclass(frozen=True)
class HermitianRootDatum:
    family: str
    params: Tuple[int, ...]
    compact_positive: Tuple[Vector, ...]
    noncompact_positive: Tuple[Vector, ...]
    strongly_orthogonal: Tuple[Vector, ...]
    j_coords: Vector
    sum_zero: bool = False  # Cartan is the sum-zero hyperplane of the ambient space

    @property
    def ambient_dim(self) -> int:
        return len(self.j_coords)

    @property
    def rank(self) -> int:
        return self.ambient_dim - (1 if self.sum_zero else 0)

    @property
    def label(self) -> str:
        if self.family == "sp":
            return f"sp({2 * self.params[0]},R)"
        return "su({},{})".format(*self.params)

    @property
    def roots(self) -> Tuple[Vector, ...]:
        pos = self.compact_positive + self.noncompact_positive
        return pos + tuple(_neg(a) for a in pos)

    def coroot(self, alpha) -> Vector:
        n2 = _dot(alpha, alpha)
        return tuple(2 * x / n2 for x in alpha)

    @property
    def noncompact_coroots(self) -> Tuple[Vector, ...]:
        return tuple(self.coroot(a) for a in self.noncompact_positive)


def _vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def _unit(d, i, scale=1) -> Vector:
    return tuple(Fraction(scale) if k == i else Fraction(0) for k in range(d))


def _add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _neg(u) -> Vector:
    return tuple(-a for a in u)


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _reflect(alpha, v) -> Vector:
    c = 2 * _dot(alpha, v) / _dot(alpha, alpha)
    return tuple(x - c * a for x, a in zip(v, alpha))


def build(family: str, n: int | None = None, p: int | None = None, q: int | None = None) -> HermitianRootDatum:
    """Root datum of ``sp`` (needs ``n >= 1``) or ``su`` (needs ``p, q >= 1``)."""
    fam = family.lower().replace(" ", "")
    if fam.startswith("sp"):
        if n is None or int(n) < 1:
            raise ValueError("sp(2n,R) needs n >= 1")
        return _build_sp(int(n))
    if fam.startswith("su"):
        if p is None or q is None or int(p) < 1 or int(q) < 1:
            raise ValueError("su(p,q) needs p, q >= 1")
        return _build_su(int(p), int(q))
    raise UnsupportedFamily(f"unsupported family {family!r} (supported: sp, su)")


def _build_sp(n: int) -> HermitianRootDatum:
    e = [_unit(n, i) for i in range(n)]
    compact = tuple(_sub(e[i], e[j]) for i, j in combinations(range(n), 2))
    noncompact = tuple(_unit(n, i, 2) for i in range(n)) + tuple(
        _add(e[i], e[j]) for i, j in combinations(range(n), 2))
    return HermitianRootDatum(
        family="sp",
        params=(n,),
        compact_positive=compact,
        noncompact_positive=noncompact,
        strongly_orthogonal=tuple(_unit(n, i, 2) for i in range(n)),
        j_coords=tuple(Fraction(1, 2) for _ in range(n)),
    )


def _build_su(p: int, q: int) -> HermitianRootDatum:
    d = p + q
    e = [_unit(d, i) for i in range(d)]
    compact = tuple(_sub(e[i], e[j]) for i, j in combinations(range(p), 2)) + tuple(
        _sub(e[p + i], e[p + j]) for i, j in combinations(range(q), 2))
    noncompact = tuple(_sub(e[i], e[p + j]) for i in range(p) for j in range(q))
    j = tuple([Fraction(q, d)] * p + [Fraction(-p, d)] * q)
    return HermitianRootDatum(
        family="su",
        params=(p, q),
        compact_positive=compact,
        noncompact_positive=noncompact,
        strongly_orthogonal=tuple(_sub(e[i], e[p + i]) for i in range(min(p, q))),
        j_coords=j,
        sum_zero=True,
    )


def check_invariants(datum: HermitianRootDatum) -> List[str]:
    """Exact checks of the datum; returns a list of violations (empty when valid)."""
    out = []
    roots = set(datum.roots)
    zero = tuple(Fraction(0) for _ in datum.j_coords)
    if datum.sum_zero and sum(datum.j_coords) != 0:
        out.append("J is not in the Cartan")
    for a in datum.noncompact_positive:
        if _dot(a, datum.j_coords) != 1:
            out.append(f"noncompact root {a} has alpha(iJ) = {_dot(a, datum.j_coords)}")
    for a in datum.compact_positive:
        if _dot(a, datum.j_coords) != 0:
            out.append(f"compact root {a} does not vanish on J")
    for a in roots:
        for b in roots:
            pairing = 2 * _dot(a, b) / _dot(a, a)
            if pairing.denominator != 1:
                out.append(f"non-integral pairing <{b}, {a}^v> = {pairing}")
            if _reflect(a, b) not in roots:
                out.append(f"reflection of {b} in {a} is not a root")
    so = datum.strongly_orthogonal
    if not set(so) <= set(datum.noncompact_positive):
        out.append("strongly orthogonal set is not inside the noncompact positive roots")
    for a, b in combinations(so, 2):
        for c in (_add(a, b), _sub(a, b)):
            if c in roots:
                out.append(f"{a} and {b} are not strongly orthogonal")
    for c in datum.noncompact_positive:
        if c in so:
            continue
        if all(_add(a, c) not in roots and _sub(a, c) not in roots and a != c for a in so):
            out.append(f"strongly orthogonal set is not maximal: {c} can be added")
    if zero in roots:
        out.append("zero listed as a root")
    return out


def mu_on_cartan(datum: HermitianRootDatum, x) -> Fraction:
    """``(1 / |Delta_n^+|) * sum over noncompact positive alpha of alpha(iX)``.

    ``x`` is given in ambient coordinates.  For su(p, q) any multiple of
    ``(1, ..., 1)`` drops out since every root has coordinate sum zero.
    """
    x = _vec(x)
    if len(x) != datum.ambient_dim:
        raise DimensionMismatch(f"expected {datum.ambient_dim} coordinates, got {len(x)}")
    total = sum((_dot(a, x) for a in datum.noncompact_positive), Fraction(0))
    return total / len(datum.noncompact_positive)


def _reflection_matrix(alpha):
    d = len(alpha)
    return tuple(_reflect(alpha, _unit(d, i)) for i in range(d))  # columns


def _compose(m1, m2):
    # column representation: (m1 m2) e_i = m1 (m2 e_i)
    d = len(m1)
    return tuple(tuple(sum((m1[k][r] * col[k] for k in range(d)), Fraction(0)) for r in range(d))
                 for col in m2)


def _apply(m, v) -> Vector:
    d = len(m)
    return tuple(sum((m[k][r] * v[k] for k in range(d)), Fraction(0)) for r in range(d))


def compact_weyl_group(datum: HermitianRootDatum, cap: int = WEYL_CAP):
    """All elements of W_c as column-tuple matrices, by closure of the compact reflections."""
    d = datum.ambient_dim
    ident = tuple(_unit(d, i) for i in range(d))
    gens = [_reflection_matrix(a) for a in datum.compact_positive]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = _compose(s, w)
                if ws not in seen:
                    seen.add(ws)
                    nxt.append(ws)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"compact Weyl group exceeds {cap} elements", budget=cap)
        frontier = nxt
    return list(seen)


@dataclass
class WeylReport:
    order: int = 0
    functional_fixed: bool = True
    roots_stable: bool = True
    fixed_dimension: int = 0
    fixed_basis: List[Vector] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def fixed_space(datum: HermitianRootDatum, group=None) -> List[Vector]:
    """Basis of the W_c-fixed subspace of the Cartan."""
    group = compact_weyl_group(datum) if group is None else group
    d = datum.ambient_dim
    rows = []
    for w in group:
        for r in range(d):
            rows.append(tuple(w[k][r] - (1 if k == r else 0) for k in range(d)))
    if datum.sum_zero:
        rows.append(tuple(Fraction(1) for _ in range(d)))
    red = _linalg.row_reduce(rows) if rows else []
    pivots = [next(i for i, x in enumerate(row) if x != 0) for row in red]
    basis = []
    for free in range(d):
        if free in pivots:
            continue
        v = [Fraction(0)] * d
        v[free] = Fraction(1)
        for row, piv in zip(red, pivots):
            v[piv] = -row[free]
        basis.append(tuple(v))
    return basis


def weyl_invariance_check(datum: HermitianRootDatum) -> WeylReport:
    group = compact_weyl_group(datum)
    rep = WeylReport(order=len(group))
    functional = tuple(sum(col) for col in zip(*datum.noncompact_positive))
    positive = set(datum.noncompact_positive)
    for w in group:
        if _apply(w, functional) != functional:
            rep.functional_fixed = False
        if {_apply(w, a) for a in positive} != positive:
            rep.roots_stable = False
    rep.fixed_basis = fixed_space(datum, group)
    rep.fixed_dimension = len(rep.fixed_basis)
    if not rep.functional_fixed:
        rep.violations.append("sum of noncompact positive roots is not W_c-fixed")
    if not rep.roots_stable:
        rep.violations.append("noncompact positive roots are not W_c-stable")
    if rep.fixed_dimension != 1:
        rep.violations.append(f"fixed space has dimension {rep.fixed_dimension}, expected 1")
    return rep


def j_in_minimal_cone(datum: HermitianRootDatum) -> bool:
    """Is ``J`` interior to the cone spanned by the noncompact positive coroots?

    Interior (relative to the Cartan) holds iff the coroots span the Cartan and
    ``J`` is a combination of them with all coefficients strictly positive.  The
    certificate tried first is the plain sum of coroots; otherwise an LP finds
    the largest uniform lower bound on the coefficients.
    """
    coroots = datum.noncompact_coroots
    if _linalg.rank(coroots) != datum.rank:
        return False
    j = datum.j_coords
    total = tuple(sum(col) for col in zip(*coroots))
    if _parallel_positive(total, j):
        return True
    # maximize t subject to sum lam_a h_a = J, lam_a >= t, t <= 1
    h = np.array([[float(x) for x in c] for c in coroots]).T
    m = len(coroots)
    res = linprog(
        c=np.r_[np.zeros(m), -1.0],
        A_ub=np.c_[-np.eye(m), np.ones(m)],
        b_ub=np.zeros(m),
        A_eq=np.c_[h, np.zeros(h.shape[0])],
        b_eq=np.array([float(x) for x in j]),
        bounds=[(None, None)] * m + [(None, 1)],
        method="highs",
    )
    return res.status == 0 and -res.fun > 1e-9


def _parallel_positive(u, v) -> bool:
    idx = next((i for i, x in enumerate(v) if x != 0), None)
    if idx is None:
        return False
    lam = u[idx] / v[idx]
    return lam > 0 and all(a == lam * b for a, b in zip(u, v))


def j_coefficient(datum: HermitianRootDatum, v) -> Fraction:
    """``c`` with ``v = c J`` for ``v`` on the J line; raises ValueError otherwise."""
    j = datum.j_coords
    idx = next(i for i, x in enumerate(j) if x != 0)
    c = Fraction(v[idx]) / j[idx]
    if any(Fraction(a) != c * b for a, b in zip(v, j)):
        raise ValueError(f"{v} is not a multiple of J")
    return c


@dataclass
class ConsistencyReport:
    rows: List[Tuple[float, float, float]] = field(default_factory=list)  # (t, cartan, cover)
    tolerance: float = 1e-9

    @property
    def ok(self) -> bool:
        return all(abs(a - b) <= self.tolerance for _, a, b in self.rows)


def su11_consistency(ts=(Fraction(1, 2), Fraction(1), Fraction(3)), tolerance: float = 1e-9) -> ConsistencyReport:
    """Compare the Cartan formula on su(1,1) with the rotation-number value on the cover."""
    from . import sl2tilde

    datum = build("su", p=1, q=1)
    rep = ConsistencyReport(tolerance=tolerance)
    for t in ts:
        t = Fraction(t)
        cartan = mu_on_cartan(datum, tuple(t * x for x in datum.j_coords))
        cover = sl2tilde.mu(sl2tilde.exp_j(float(t))).value
        rep.rows.append((float(t), float(cartan), cover))
    return rep


def parse_cartan(datum: HermitianRootDatum, text: str) -> Vector:
    """``J``, ``<number>J`` or comma-separated ambient coordinates."""
    text = text.strip()
    if text.endswith("J"):
        head = text[:-1].strip().rstrip("*").strip()
        c = Fraction(head) if head else Fraction(1)
        return tuple(c * x for x in datum.j_coords)
    parts = text.replace(",", " ").split()
    return tuple(Fraction(p) for p in parts)


def supported_cases(max_sp: int = 4, max_su: int = 5):
    """The (family, params) grid covered by the exactness suite."""
    cases = [("sp", dict(n=n)) for n in range(1, max_sp + 1)]
    cases += [("su", dict(p=p, q=q)) for p in range(1, max_su) for q in range(1, max_su - p + 1)]
    return cases
