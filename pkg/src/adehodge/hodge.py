"""Closed-form Hodge numbers of big and small resolutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Sequence

from .defect import RankResult
from .errors import AssumptionViolated, UnsupportedCover, UnsupportedFiberTopology
from .singular import A, ADEType, D, lift_type


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``a >= b >= 0``."""
    return math.comb(a, b) if a >= b >= 0 else 0


def h0_p3(k: int) -> int:
    return binom(k + 3, 3)


def h0_weighted(k: int, w: int) -> int:
    """``h^0(O(k))`` on ``P(1,1,1,1,w)``."""
    if k < 0:
        return 0
    return sum(binom(k - j * w + 3, 3) for j in range(k // w + 1))


@dataclass(frozen=True)
class CohomologyInputs:
    h1_Omega: int = 1
    h2_Omega: int = 0
    h3_Omega: int = 0
    h4_Omega: int = 0
    h0_2Y_K: int = 0
    h0_Y_K: int = 0
    h3_minus2Y: int = 0
    h4_Omega_minusY: int = 0
    h2_OX: int = 0
    # h^{3,0} of the threefold, used only for the Euler number
    h3_OY: int = 1

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be nonnegative")

    @classmethod
    def projective_p4(cls, d: int) -> "CohomologyInputs":
        """Ambient data for a degree-d hypersurface in P4."""
        return cls(
            h1_Omega=1,
            h0_2Y_K=binom(2 * d - 1, 4),
            h0_Y_K=binom(d - 1, 4),
            h4_Omega_minusY=5 * binom(d, 4) - binom(d - 1, 4),
            h3_OY=binom(d - 1, 4),
        )

    @classmethod
    def weighted_cover(cls, d: int, n: int) -> "CohomologyInputs":
        """Ambient data for ``y4^n = b_d`` in ``P(1,1,1,1,d/n)``."""
        if n < 2 or d % n:
            raise UnsupportedCover("need n | d")
        w = d // n
        top = (n - 1) * w
        return cls(
            h1_Omega=1,
            h0_2Y_K=h0_weighted(2 * d - 4 - w, w),
            h0_Y_K=h0_weighted(d - 4 - w, w),
            h4_Omega_minusY=4 * h0_weighted(top - 3, w) + h0_weighted(d - 4, w) - h0_weighted(top - 4, w),
            h3_OY=h0_p3(top - 4),
        )


@dataclass
class CoverSpec:
    d: int
    n: int
    inventory: dict = field(default_factory=dict)  # branch-surface types -> counts

    def __post_init__(self):
        if self.n < 2 or self.d % self.n or self.d <= self.n:
            raise UnsupportedCover(f"need n | d and d > n (got d={self.d}, n={self.n})")
        inv = {}
        for k, v in dict(self.inventory).items():
            t = k if isinstance(k, ADEType) else ADEType.parse(k)
            if int(v) < 0:
                raise UnsupportedCover("negative count")
            if int(v):
                inv[t] = inv.get(t, 0) + int(v)
        self.inventory = dict(sorted(inv.items()))

    @property
    def branch_nodal(self) -> bool:
        return all(t == A(1) for t in self.inventory)

    @property
    def branch_cuspidal(self) -> bool:
        return all(t == A(2) for t in self.inventory)

    @property
    def branch_du_val(self) -> bool:
        return True

    def count(self) -> int:
        return sum(self.inventory.values())

    def lifted(self) -> dict:
        out: dict = {}
        for t, c in self.inventory.items():
            lt = lift_type(t, self.n)
            out[lt] = out.get(lt, 0) + c
        return out

    def mu(self) -> int:
        return sum(t.mu() * c for t, c in self.lifted().items())

    def to_json(self):
        return {"d": self.d, "n": self.n, "inventory": {str(t): c for t, c in self.inventory.items()}}


@dataclass
class HodgeReport:
    h11: int
    h12: int | None
    mu: int
    delta: int
    euler: int | None
    resolution: str
    formula_id: str
    rank_inputs: list = field(default_factory=list)
    h3_O: int | None = None
    checks: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "h11": self.h11,
            "h12": self.h12,
            "mu": self.mu,
            "delta": self.delta,
            "euler": self.euler,
            "resolution": self.resolution,
            "formula_id": self.formula_id,
            "rank_inputs": [r.to_json() for r in self.rank_inputs],
            "checks": [dict(c) for c in self.checks],
        }
        if self.h3_O is not None:
            out["h3_O"] = self.h3_O
        return out

    @classmethod
    def from_json(cls, obj) -> "HodgeReport":
        return cls(
            h11=obj["h11"],
            h12=obj["h12"],
            mu=obj["mu"],
            delta=obj["delta"],
            euler=obj["euler"],
            resolution=obj["resolution"],
            formula_id=obj["formula_id"],
            rank_inputs=[RankResult.from_json(r) for r in obj.get("rank_inputs", [])],
            h3_O=obj.get("h3_O"),
            checks=[dict(c) for c in obj.get("checks", [])],
        )


def _euler(h11, h12, h30=1):
    if h12 is None:
        return None
    return 2 * (h11 - h12) + 2 - 2 * h30


def hodge_big_general(c: CohomologyInputs, mu: int, delta: int, want_h12: bool = True) -> HodgeReport:
    """Big-resolution Hodge numbers from ambient cohomology dimensions."""
    if mu < 0 or delta < 0:
        raise ValueError("mu and delta must be nonnegative")
    h11 = c.h1_Omega + mu + delta + c.h3_minus2Y
    h12 = None
    if c.h2_OX == 0:
        h12 = c.h0_2Y_K + c.h4_Omega - c.h0_Y_K - c.h3_Omega - c.h4_Omega_minusY - mu + delta
    elif want_h12:
        raise AssumptionViolated("h^{1,2} formula needs h^2(O_X) = 0")
    return HodgeReport(h11, h12, mu, delta, _euler(h11, h12, c.h3_OY), "big", "ambient_general", h3_O=c.h3_OY)


def cover_h12_constant(d: int, n: int) -> int:
    w = d // n
    return sum(binom(d + j * w - 1, 3) for j in range(1, n)) - 4 * sum(binom(j * w, 3) for j in range(1, n))


def cover_formula_id(spec: CoverSpec) -> str:
    if spec.n == 2:
        return "double"
    if spec.branch_nodal:
        return "nfold"
    if spec.n == 3 and spec.branch_cuspidal:
        return "triple"
    raise UnsupportedCover(f"no formula for {spec.n}-fold covers with {sorted(map(str, spec.inventory))}")


def hodge_big_cover(spec: CoverSpec, delta: int, rank_inputs: Sequence[RankResult] = ()) -> HodgeReport:
    """Big resolution of the cyclic cover ``y4^n = b_d``."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    fid = cover_formula_id(spec)
    mu = spec.mu()
    h11 = 1 + mu + delta
    h12 = cover_h12_constant(spec.d, spec.n) - mu + delta
    h3 = h0_p3((spec.n - 1) * spec.d // spec.n - 4)
    return HodgeReport(h11, h12, mu, delta, _euler(h11, h12, h3), "big", fid, list(rank_inputs), h3_O=h3)


def _small_kind(spec: CoverSpec) -> str:
    if spec.n == 3 and spec.d == 6 and spec.branch_cuspidal:
        return "triple_sextic"
    if spec.n == 2 and spec.d == 8 and all(t.family == "A" and t.index % 2 for t in spec.inventory):
        return "double_octic"
    raise UnsupportedCover("small resolutions are covered for triple sextics with cusps and double octics with odd A-points")


def _chain_weight(spec: CoverSpec) -> int:
    return sum(((t.index + 1) // 2) * c for t, c in spec.inventory.items())


def hodge_small(spec: CoverSpec, rank_inputs: Sequence[RankResult]) -> HodgeReport:
    """Kähler small resolution of a triple sextic or a double octic."""
    kind = _small_kind(spec)
    ranks = [r.rank if isinstance(r, RankResult) else int(r) for r in rank_inputs]
    objs = [r for r in rank_inputs if isinstance(r, RankResult)]
    if kind == "triple_sextic":
        if len(ranks) != 2:
            raise UnsupportedCover("triple sextic needs rank(M4) and rank(M6)")
        nu = spec.count()
        r4, r6 = ranks
        h11 = 1 + 3 * nu - r4 - r6
        h12 = 103 - r4 - r6
        mu = 4 * nu
        delta = mu - r4 - r6
    else:
        if len(ranks) != 1:
            raise UnsupportedCover("double octic needs rank(M8)")
        w = _chain_weight(spec)
        h11 = 1 + w - ranks[0]
        h12 = 149 - ranks[0]
        mu = w
        delta = mu - ranks[0]
    return HodgeReport(h11, h12, mu, delta, 2 * (h11 - h12), "small", kind, objs, h3_O=1)


def fiber_shift(spec: CoverSpec) -> int:
    """Sum of ``h^4`` of exceptional fibres of the big resolution over all points."""
    total = 0
    for t, c in spec.lifted().items():
        if t == D(4) and spec.n == 3:
            total += 5 * c
        elif t.family == "A" and t.index % 2 and spec.n == 2:
            total += ((t.index + 1) // 2) * c
        else:
            raise UnsupportedFiberTopology(f"no fibre data for {t} on an {spec.n}-fold cover")
    return total


def small_big_conversion(spec: CoverSpec, report: HodgeReport) -> HodgeReport:
    """Shift ``h^{1,1}`` between small and big resolutions; ``h^{1,2}`` is unchanged."""
    shift = fiber_shift(spec)
    if report.resolution == "small":
        h11 = report.h11 + shift
        res = "big"
    elif report.resolution == "big":
        h11 = report.h11 - shift
        res = "small"
    else:
        raise ValueError(f"unknown resolution {report.resolution!r}")
    euler = None if report.h12 is None else 2 * (h11 - report.h12)
    return HodgeReport(
        h11, report.h12, report.mu, report.delta, euler, res, report.formula_id + "+fibre_shift",
        list(report.rank_inputs), h3_O=report.h3_O,
    )


def euler_check(report: HodgeReport, spec: CoverSpec) -> dict:
    """Compare ``2(h11 - h12)`` of a small resolution with the closed form."""
    kind = _small_kind(spec)
    if kind == "triple_sextic":
        expected = 6 * spec.count() - 204
    else:
        expected = 2 * _chain_weight(spec) - 296
    got = 2 * (report.h11 - report.h12)
    return {"name": "euler", "pass": got == expected, "computed": got, "expected": expected}


def path_independence_check(spec: CoverSpec, small: HodgeReport, big: HodgeReport) -> dict:
    conv = small_big_conversion(spec, small)
    ok = conv.h11 == big.h11 and conv.h12 == big.h12
    return {"name": "path_independence", "pass": ok, "converted_h11": conv.h11, "big_h11": big.h11}


__all__ = [
    "CohomologyInputs",
    "CoverSpec",
    "HodgeReport",
    "binom",
    "h0_p3",
    "h0_weighted",
    "hodge_big_general",
    "hodge_big_cover",
    "hodge_small",
    "small_big_conversion",
    "euler_check",
    "path_independence_check",
    "fiber_shift",
    "cover_h12_constant",
]
