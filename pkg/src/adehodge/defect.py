"""Condition matrices, their ranks, and the defect formulas built on them.

Rows of a :class:`ConditionMatrix` are monomials of a fixed degree; columns
are linear functionals ``(point, tag)`` where the tag is a value, a j-th
derivative along the first frame direction, or a first derivative along the
second one.  Entries are generated on demand for any working precision so the
numeric rank can be re-run at doubled precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    DivisibilityError,
    MissingFrame,
    RankUndecided,
    UnsupportedSpecialization,
)
from .linalg import ball_rank, bareiss_rank
from .numbers import DEFAULT_PRECISION, GUARD_BITS, ball_radius, lift, working_precision
from .poly import MultiPoly, ProjectivePoint, monomial_exponents
from .singular import A, ADEType, SingularPointRecord, frame_vectors

SPECIALIZATIONS = ("triple_cusp", "double_A_chain", "quintic_A3", "general_linear_frame")
BACKENDS = ("exact", "numeric", "auto")


@dataclass(frozen=True)
class Column:
    point: int
    tag: str  # "value", "v1", "v2"
    order: int = 0

    def label(self) -> str:
        if self.tag == "value":
            return f"P{self.point}:value"
        return f"P{self.point}:d{self.order}/{self.tag}"


@dataclass
class RankResult:
    rank: int
    backend: str
    certified: bool
    precision_used: int | None
    nrows: int = 0
    ncols: int = 0

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "backend": self.backend,
            "certified": self.certified,
            "precision": self.precision_used,
        }

    @classmethod
    def from_json(cls, obj) -> "RankResult":
        return cls(obj["rank"], obj["backend"], obj["certified"], obj["precision"])


@dataclass
class DefectResult:
    delta: int
    components: dict
    formula: str
    ranks: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "components": dict(self.components),
            "formula": self.formula,
            "ranks": [r.to_json() for r in self.ranks],
        }


class ConditionMatrix:
    """Monomials of ``degree`` in ``nvars`` variables against point functionals."""

    def __init__(
        self,
        degree: int,
        nvars: int,
        points: Sequence[ProjectivePoint],
        columns: Sequence[Column],
        records: Sequence[SingularPointRecord] | None = None,
        surface: MultiPoly | None = None,
        directions: dict | None = None,
        frame_substitution: tuple | None = None,
        exponents: Sequence[tuple] | None = None,
        name: str = "",
    ):
        if degree < 0:
            raise DimensionMismatch("degree must be nonnegative")
        for P in points:
            if len(P) != nvars:
                raise DimensionMismatch(f"point {P!r} does not live in {nvars} coordinates")
        self.degree = degree
        self.nvars = nvars
        self.points = list(points)
        self.columns = list(columns)
        self.records = list(records) if records is not None else None
        self.surface = surface
        self.directions = directions or {}
        self.frame_substitution = frame_substitution
        self.exponents = list(exponents) if exponents is not None else monomial_exponents(nvars, degree)
        self.name = name
        self._cache: dict = {}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.exponents), len(self.columns)

    def permute_rows(self, perm: Sequence[int]) -> "ConditionMatrix":
        if sorted(perm) != list(range(len(self.exponents))):
            raise DimensionMismatch("not a permutation of the monomial basis")
        return self._clone(exponents=[self.exponents[i] for i in perm])

    def with_frame_substitution(self, alpha, beta) -> "ConditionMatrix":
        return self._clone(frame_substitution=(Fraction(alpha), Fraction(beta)))

    def _clone(self, **kw) -> "ConditionMatrix":
        args = dict(
            degree=self.degree,
            nvars=self.nvars,
            points=self.points,
            columns=self.columns,
            records=self.records,
            surface=self.surface,
            directions=self.directions,
            frame_substitution=self.frame_substitution,
            exponents=self.exponents,
            name=self.name,
        )
        args.update(kw)
        return ConditionMatrix(**args)

    # -- entries ------------------------------------------------------------

    def _direction(self, idx: int, tag: str, xs, precision: int):
        key = (idx, tag)
        if key in self.directions:
            v = self.directions[key]
            from .poly import as_scalars

            v = as_scalars(v, precision)
        else:
            rec = self.records[idx] if self.records is not None else None
            if rec is None:
                raise MissingFrame(f"no frame for point {idx}")
            v1, v2 = frame_vectors(self.surface, rec, precision)
            v = v1 if tag == "v1" else v2
            if v is None:
                raise MissingFrame(f"point {idx} ({rec.ade}) has no {tag} direction")
        if tag == "v1" and self.frame_substitution is not None:
            a, b = self.frame_substitution
            exact = all(isinstance(x, Fraction) for x in list(v) + list(xs))
            with working_precision(precision + GUARD_BITS):
                if exact:
                    v = [a * vi + b * xi for vi, xi in zip(v, xs)]
                else:
                    v = [lift(a) * lift(vi) + lift(b) * lift(xi) for vi, xi in zip(v, xs)]
        return v

    def columns_at(self, precision: int = DEFAULT_PRECISION) -> list[list]:
        """Column-major entries as Fractions (exact inputs) or balls."""
        if precision in self._cache:
            return self._cache[precision]
        by_point: dict[int, list[int]] = {}
        for ci, col in enumerate(self.columns):
            by_point.setdefault(col.point, []).append(ci)
        out: list = [None] * len(self.columns)
        for idx, cis in by_point.items():
            P = self.points[idx]
            xs = P.scalars(precision)
            wanted: dict[str, int] = {}
            for ci in cis:
                col = self.columns[ci]
                if col.tag != "value":
                    wanted[col.tag] = max(wanted.get(col.tag, 0), col.order)
            series = {"value": _value_column(self.exponents, xs, precision)}
            for tag, J in wanted.items():
                v = self._direction(idx, tag, xs, precision)
                series[tag] = _derivative_columns(self.exponents, xs, v, J, precision)
            for ci in cis:
                col = self.columns[ci]
                out[ci] = series["value"] if col.tag == "value" else series[col.tag][col.order]
        self._cache[precision] = out
        return out

    def is_exact(self) -> bool:
        cols = self.columns_at(DEFAULT_PRECISION)
        return all(isinstance(x, Fraction) for c in cols for x in c)

    def rows_at(self, precision: int = DEFAULT_PRECISION) -> list[list]:
        cols = self.columns_at(precision)
        return [[c[i] for c in cols] for i in range(len(self.exponents))]

    # -- dumps --------------------------------------------------------------

    def to_csv(self, precision: int = DEFAULT_PRECISION) -> str:
        """Decimal ball centres, one row per monomial."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["monomial"] + [c.label() for c in self.columns])
        digits = max(17, int(precision * 0.30103) + 2)
        for i, row in enumerate(self.rows_at(precision)):
            w.writerow([_mono_label(self.exponents[i])] + [_center_str(x, digits) for x in row])
        return buf.getvalue()

    def sidecar_json(self, precision: int = DEFAULT_PRECISION) -> dict:
        rows = self.rows_at(precision)
        radii = []
        exact = []
        with working_precision(precision + GUARD_BITS):
            for row in rows:
                radii.append([0.0 if isinstance(x, Fraction) else float(ball_radius(x)) for x in row])
                exact.append([isinstance(x, Fraction) for x in row])
        return {
            "name": self.name,
            "degree": self.degree,
            "nvars": self.nvars,
            "precision": precision,
            "columns": [c.label() for c in self.columns],
            "radii": radii,
            "exact": exact,
        }


def _mono_label(e) -> str:
    parts = [f"y{i}" if k == 1 else f"y{i}^{k}" for i, k in enumerate(e) if k]
    return "*".join(parts) or "1"


def _center_str(x, digits: int) -> str:
    if isinstance(x, Fraction):
        return str(x)
    re_ = x.real.mid().str(digits, radius=False)
    im_ = x.imag.mid().str(digits, radius=False)
    return f"{re_}{'' if im_.startswith('-') else '+'}{im_}j"


def _powers(x, k: int, one) -> list:
    out = [one]
    for _ in range(k):
        out.append(out[-1] * x)
    return out


def _value_column(exponents, xs, precision: int) -> list:
    exact = all(isinstance(x, Fraction) for x in xs)
    with working_precision(precision + GUARD_BITS):
        one = Fraction(1) if exact else lift(1)
        xs = xs if exact else [lift(x) for x in xs]
        top = max((max(e) for e in exponents), default=0)
        pw = [_powers(x, top, one) for x in xs]
        col = []
        for e in exponents:
            v = one
            for i, k in enumerate(e):
                if k:
                    v = v * pw[i][k]
            col.append(v)
        return col


def _derivative_columns(exponents, xs, v, J: int, precision: int) -> list[list]:
    """``cols[j][r]`` is the j-th derivative at t=0 of ``m_r(P + t v)``."""
    exact = all(isinstance(x, Fraction) for x in list(xs) + list(v))
    with working_precision(precision + GUARD_BITS):
        one = Fraction(1) if exact else lift(1)
        zero = one * 0
        if not exact:
            xs = [lift(x) for x in xs]
            v = [lift(x) for x in v]
        top = max((max(e) for e in exponents), default=0)
        # (x_i + t v_i)^k truncated after t^J
        tables = []
        for xi, vi in zip(xs, v):
            tab = [[one] + [zero] * J]
            for _ in range(top):
                prev = tab[-1]
                nxt = [prev[0] * xi] + [prev[j] * xi + prev[j - 1] * vi for j in range(1, J + 1)]
                tab.append(nxt)
            tables.append(tab)
        cols = [[None] * len(exponents) for _ in range(J + 1)]
        facts = [math.factorial(j) for j in range(J + 1)]
        for r, e in enumerate(exponents):
            acc = [one] + [zero] * J
            for i, k in enumerate(e):
                if k:
                    p = tables[i][k]
                    acc = [sum((acc[a] * p[j - a] for a in range(j + 1)), zero) for j in range(J + 1)]
            for j in range(J + 1):
                cols[j][r] = acc[j] * facts[j]
        return cols


# ---------------------------------------------------------------------------
# builders


def build_vanishing_matrix(
    degree: int, points: Sequence[ProjectivePoint], nvars: int | None = None, name: str = ""
) -> ConditionMatrix:
    points = [p if isinstance(p, ProjectivePoint) else ProjectivePoint(p) for p in points]
    if nvars is None:
        nvars = len(points[0]) if points else 4
    cols = [Column(i, "value") for i in range(len(points))]
    return ConditionMatrix(degree, nvars, points, cols, name=name or f"vanishing_{degree}")


def conditions_for(ade: ADEType, specialization: str) -> list[tuple[str, int]]:
    """Condition tags required at a point of the given type."""
    m = ade.index
    if specialization == "triple_cusp":
        if ade != A(2):
            raise UnsupportedSpecialization(f"triple_cusp needs A2 points, got {ade}")
        return [("value", 0), ("v1", 1)]
    if specialization == "quintic_A3":
        if ade != A(3):
            raise UnsupportedSpecialization(f"quintic_A3 needs A3 points, got {ade}")
        return [("value", 0), ("v1", 1)]
    if specialization == "double_A_chain" and ade.family != "A":
        raise UnsupportedSpecialization(f"double_A_chain covers A-points only, got {ade}")
    if specialization not in ("double_A_chain", "general_linear_frame"):
        raise UnsupportedSpecialization(f"unknown specialization {specialization!r}")
    if ade.family == "A":
        return [("value", 0)] + [("v1", j) for j in range(1, (m + 1) // 2)]
    if ade.family == "D":
        return [("value", 0), ("v2", 1)] + [("v1", j) for j in range(1, m // 2)]
    return [("value", 0), ("v2", 1)] + [("v1", j) for j in range(1, m - 4)]


def build_condition_matrix(
    degree: int,
    records: Sequence[SingularPointRecord],
    specialization: str,
    surface: MultiPoly | None = None,
    frame_substitution: tuple | None = None,
    name: str = "",
) -> ConditionMatrix:
    """Condition matrix for ``records`` under one of the supported specializations.

    ``surface`` is needed whenever a frame comes from the Hessian kernel.
    For ``quintic_A3`` the derivative is taken along ``y4`` literally.
    """
    if specialization not in SPECIALIZATIONS:
        raise UnsupportedSpecialization(f"unknown specialization {specialization!r}")
    records = list(records)
    nvars = len(records[0].point) if records else (5 if specialization == "quintic_A3" else 4)
    if specialization == "quintic_A3" and nvars != 5:
        raise DimensionMismatch("quintic_A3 lives on P4 (5 coordinates)")
    cols = []
    directions = {}
    for i, rec in enumerate(records):
        conds = conditions_for(rec.ade, specialization)
        for tag, j in conds:
            if tag == "v1" and specialization == "quintic_A3":
                directions[(i, "v1")] = [0, 0, 0, 0, 1]
            elif tag == "v1" and not rec.has_v1():
                raise MissingFrame(f"record {i} ({rec.ade}) lacks a v1 direction")
            elif tag == "v2" and not rec.has_v2():
                raise MissingFrame(f"record {i} ({rec.ade}) lacks a v2 direction")
            if tag in ("v1", "v2") and rec.frame_source == "hessian_kernel" and surface is None:
                if (i, tag) not in directions:
                    raise MissingFrame("Hessian-kernel frames need the surface equation")
            cols.append(Column(i, tag, j))
    return ConditionMatrix(
        degree,
        nvars,
        [r.point for r in records],
        cols,
        records=records,
        surface=surface,
        directions=directions,
        frame_substitution=frame_substitution,
        name=name or f"{specialization}_{degree}",
    )


# ---------------------------------------------------------------------------
# rank


def rank(
    M: ConditionMatrix,
    backend: str = "auto",
    precision: int = DEFAULT_PRECISION,
    escalations: int = 1,
) -> RankResult:
    """Rank of ``M``; exact by Bareiss, numeric by certified complete pivoting."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    nr, nc = M.shape
    if nc == 0 or nr == 0:
        return RankResult(0, "exact" if backend != "numeric" else "numeric", True, None, nr, nc)
    cols = M.columns_at(precision)
    exact = all(isinstance(x, Fraction) for c in cols for x in c)
    if backend == "exact" and not exact:
        raise UnsupportedSpecialization("exact backend needs rational entries")
    if backend == "exact" or (backend == "auto" and exact):
        return RankResult(bareiss_rank(cols), "exact", True, None, nr, nc)
    p = precision
    for _ in range(escalations + 1):
        lo = ball_rank(M.columns_at(p), p)
        hi = ball_rank(M.columns_at(2 * p), 2 * p)
        if not lo.straddles and not hi.straddles:
            certified = lo.rank == hi.rank and lo.rejected_contain_zero and hi.rejected_contain_zero
            return RankResult(hi.rank, "numeric", certified, 2 * p, nr, nc)
        p *= 2
    raise RankUndecided(f"pivots straddle the tolerance for {M.name or 'matrix'} up to {p} bits")


def rank_of_rows(rows: Sequence[Sequence], backend: str = "auto", precision: int = DEFAULT_PRECISION) -> RankResult:
    """Rank of a plain matrix given as rows of Fractions/ints/balls."""
    rows = [list(r) for r in rows]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    if nr == 0 or nc == 0:
        return RankResult(0, "exact", True, None, nr, nc)
    exact = all(isinstance(x, (int, Fraction)) for r in rows for x in r)
    if backend == "exact" or (backend == "auto" and exact):
        return RankResult(bareiss_rank(rows), "exact", True, None, nr, nc)
    lo = ball_rank(rows, precision)
    if exact:
        hi = ball_rank(rows, 2 * precision)
    else:
        hi = lo
    if lo.straddles or hi.straddles:
        raise RankUndecided("pivots straddle the tolerance")
    certified = lo.rank == hi.rank and lo.rejected_contain_zero and hi.rejected_contain_zero
    return RankResult(hi.rank, "numeric", certified, hi.precision, nr, nc)


# ---------------------------------------------------------------------------
# defect formulas


def _binom(a: int, b: int) -> int:
    return math.comb(a, b) if a >= b >= 0 else 0


def defect_triple(
    d: int,
    records: Sequence[SingularPointRecord],
    surface: MultiPoly | None = None,
    backend: str = "auto",
    precision: int = DEFAULT_PRECISION,
) -> DefectResult:
    """Defect for a triple cover branched along a cuspidal surface of degree d."""
    if d % 3 or d < 6:
        raise DivisibilityError("triple covers need d divisible by 3 and d >= 6")
    for r in records:
        if r.ade != A(2):
            raise UnsupportedSpecialization(f"triple cover formula needs cusps, got {r.ade}")
    a2 = len(records)
    deg4 = 4 * d // 3 - 4
    deg6 = 5 * d // 3 - 4
    M4 = build_vanishing_matrix(deg4, [r.point for r in records], name=f"M{deg4}")
    M6 = build_condition_matrix(deg6, records, "triple_cusp", surface, name=f"M{deg6}")
    r4 = rank(M4, backend, precision)
    r6 = rank(M6, backend, precision)
    delta = 4 * a2 - r4.rank - r6.rank
    h0_ideal = _binom(deg4 + 3, 3) - r4.rank
    dim_v = _binom(deg6 + 3, 3) - r6.rank
    comps = {
        "a2": a2,
        "mu": 4 * a2,
        "degree_vanishing": deg4,
        "degree_conditions": deg6,
        "rank_vanishing": r4.rank,
        "rank_conditions": r6.rank,
        "dim_V": dim_v,
        "h0_ideal": h0_ideal,
        "long_form": dim_v - _binom(deg6 + 3, 3) + h0_ideal - _binom(deg4 + 3, 3) + 4 * a2,
    }
    return DefectResult(delta, comps, "triple_cusp", [r4, r6])


def defect_double(
    d: int,
    records: Sequence[SingularPointRecord],
    surface: MultiPoly | None = None,
    backend: str = "auto",
    precision: int = DEFAULT_PRECISION,
) -> DefectResult:
    """Defect for a double cover branched along a Du Val surface of degree d."""
    if d % 2 or d < 4:
        raise DivisibilityError("double covers need even d >= 4")
    deg = 3 * d // 2 - 4
    mu = sum(r.ade.mu() for r in records)
    spec = "double_A_chain" if all(r.ade.family == "A" for r in records) else "general_linear_frame"
    M = build_condition_matrix(deg, records, spec, surface, name=f"M{deg}")
    rr = rank(M, backend, precision)
    comps = {
        "mu": mu,
        "degree_conditions": deg,
        "rank_conditions": rr.rank,
        "dim_V": _binom(deg + 3, 3) - rr.rank,
    }
    return DefectResult(mu - rr.rank, comps, spec, [rr])


def defect_nfold(
    d: int,
    n: int,
    nodes: Sequence,
    backend: str = "auto",
    precision: int = DEFAULT_PRECISION,
) -> DefectResult:
    """Defect for a cyclic n-fold cover branched along a nodal surface."""
    if n < 2 or d % n or d <= n:
        raise DivisibilityError(f"need n | d and d > n (got d={d}, n={n})")
    pts = [r.point if isinstance(r, SingularPointRecord) else r for r in nodes]
    for r in nodes:
        if isinstance(r, SingularPointRecord) and r.ade != A(1):
            raise UnsupportedSpecialization("n-fold formula needs nodes only")
    a1 = len(pts)
    total = 0
    comps = {"a1": a1, "n": n}
    ranks = []
    for j in range(-(-n // 2), n):
        deg = d + j * d // n - 4
        rr = rank(build_vanishing_matrix(deg, pts, name=f"M{deg}"), backend, precision)
        ranks.append(rr)
        comps[f"rank_degree_{deg}"] = rr.rank
        total -= rr.rank
    delta = total + (n // 2) * a1
    return DefectResult(delta, comps, "nfold", ranks)


def matrix_bundle_json(M: ConditionMatrix, precision: int = DEFAULT_PRECISION) -> str:
    return json.dumps(M.sidecar_json(precision), sort_keys=True)


__all__ = [
    "Column",
    "ConditionMatrix",
    "RankResult",
    "DefectResult",
    "build_vanishing_matrix",
    "build_condition_matrix",
    "conditions_for",
    "rank",
    "rank_of_rows",
    "defect_triple",
    "defect_double",
    "defect_nfold",
    "matrix_bundle_json",
    "SPECIALIZATIONS",
]
