"""Recognition of A-D-E points, adapted frames and Milnor-type bookkeeping.

Classification follows the splitting lemma: dehomogenize at the point,
diagonalize the quadratic part by congruence, eliminate the nondegenerate
variables by a fixed-point iteration on truncated series and read the type
off the residual germ in the kernel variables (one variable for A_m, two for
D_m and E_m).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    CorankTooHigh,
    InvalidIndex,
    KernelDimensionUnexpected,
    NonHomogeneous,
    NotDoublePoint,
    NotSimple,
    NotSingular,
    TruncationInsufficient,
    Undecided,
    UnsupportedLift,
)
from .linalg import ball_rank, bareiss_rank, cramer_kernel, det
from .numbers import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    ZeroStatus,
    ball_zero_status,
    eval_value,
    lift,
    value_from_json,
    value_to_json,
    working_precision,
)
from .poly import MultiPoly, ProjectivePoint, as_scalars, eval_at, second_partials

DEFAULT_MAX_ORDER = 12
FIRST_PASS_ORDER = 6


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, order=True)
class ADEType:
    family: str
    index: int

    def __post_init__(self):
        fam, m = self.family, self.index
        ok = (
            (fam == "A" and m >= 1)
            or (fam == "D" and m >= 4)
            or (fam == "E" and m in (6, 7, 8))
        )
        if not ok:
            raise InvalidIndex(f"{fam}{m} is not an A-D-E type")

    def __str__(self):
        return f"{self.family}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ADEType":
        m = re.fullmatch(r"\s*([ADE])_?(\d+)\s*", str(text))
        if not m:
            raise InvalidIndex(f"cannot read an A-D-E type from {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def mu(self) -> int:
        """Number of singular points, the point itself included, over it."""
        if self.family == "A":
            return (self.index + 1) // 2
        if self.family == "D":
            return 2 * (self.index // 2)
        return {6: 4, 7: 7, 8: 8}[self.index]

    def near_points(self) -> int:
        """Infinitely near singular points other than the point itself."""
        return self.mu() - 1


def A(m: int) -> ADEType:
    return ADEType("A", m)


def D(m: int) -> ADEType:
    return ADEType("D", m)


def E(m: int) -> ADEType:
    return ADEType("E", m)


class SingularStatus(enum.Enum):
    SINGULAR = "Singular"
    SMOOTH = "Smooth"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class FrameChoice:
    """Deterministic recipe for a frame taken from the Hessian kernel."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    free: tuple[int, ...]

    def to_json(self):
        return {"rows": list(self.rows), "cols": list(self.cols), "free": list(self.free)}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["rows"]), tuple(obj["cols"]), tuple(obj["free"]))


@dataclass(frozen=True)
class SingularPointRecord:
    point: ProjectivePoint
    ade: ADEType
    v1: tuple | None = None
    v2: tuple | None = None
    frame_kind: str = "linear"
    kernel: FrameChoice | None = None

    @property
    def frame_source(self) -> str:
        if self.v1 is not None:
            return "user"
        if self.kernel is not None:
            return "hessian_kernel"
        return "none"

    def has_v1(self) -> bool:
        return self.v1 is not None or (self.kernel is not None and len(self.kernel.free) >= 1)

    def has_v2(self) -> bool:
        if self.v2 is not None:
            return True
        return self.v1 is None and self.kernel is not None and len(self.kernel.free) >= 2

    def to_json(self) -> dict:
        out = {
            "point": self.point.to_json(),
            "type": str(self.ade),
            "frame_kind": self.frame_kind,
        }
        if self.v1 is not None:
            out["v1"] = [value_to_json(c) for c in self.v1]
        if self.v2 is not None:
            out["v2"] = [value_to_json(c) for c in self.v2]
        if self.kernel is not None:
            out["kernel"] = self.kernel.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "SingularPointRecord":
        v1 = obj.get("v1")
        v2 = obj.get("v2")
        return cls(
            point=ProjectivePoint.from_json(obj["point"]),
            ade=ADEType.parse(obj["type"]),
            v1=tuple(value_from_json(c) for c in v1) if v1 is not None else None,
            v2=tuple(value_from_json(c) for c in v2) if v2 is not None else None,
            frame_kind=obj.get("frame_kind", "linear"),
            kernel=FrameChoice.from_json(obj["kernel"]) if obj.get("kernel") else None,
        )


@dataclass
class GermSeries:
    """Truncated local expansion; ``coeffs`` maps exponent tuples to scalars."""

    nvars: int
    coeffs: dict
    order: int

    def part(self, k: int) -> dict:
        return {e: c for e, c in self.coeffs.items() if sum(e) == k}


# ---------------------------------------------------------------------------
# scalar field helpers


class _Field:
    """Zero decisions for Fractions (exact) or balls at a fixed precision."""

    def __init__(self, precision: int | None):
        self.precision = precision

    @property
    def exact(self) -> bool:
        return self.precision is None

    def status(self, x) -> ZeroStatus:
        if isinstance(x, Fraction):
            return ZeroStatus.ZERO if x == 0 else ZeroStatus.NONZERO
        return ball_zero_status(x, self.precision)

    def is_zero(self, x) -> bool:
        st = self.status(x)
        if st is ZeroStatus.UNDECIDED:
            raise Undecided("cannot decide whether a local coefficient vanishes")
        return st is ZeroStatus.ZERO

    def size(self, x) -> float:
        if isinstance(x, Fraction):
            return abs(float(x))
        return float(x.abs_upper())

    def coerce(self, x):
        return Fraction(x) if self.exact else lift(x)


def _mul(a: dict, b: dict, K: int) -> dict:
    out: dict = {}
    bl = [(e, c, sum(e)) for e, c in b.items()]
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb, db in bl:
            if da + db > K:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = ca * cb
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
    return out


def _axpy(acc: dict, a: dict, s) -> None:
    for e, c in a.items():
        v = c * s
        acc[e] = acc[e] + v if e in acc else v


def _compose(g: dict, images: Sequence[dict], K: int, one) -> dict:
    """``g(images)`` truncated at total order ``K``; images in a common ring."""
    nv = len(next(iter(images[0]))) if images[0] else None
    powers: list[list[dict]] = [[None] for _ in images]

    def power(i, k):
        tab = powers[i]
        while len(tab) <= k:
            if len(tab) == 1:
                tab.append(images[i])
            else:
                tab.append(_mul(tab[-1], images[i], K))
        return tab[k]

    out: dict = {}
    for e, c in g.items():
        term = None
        for i, k in enumerate(e):
            if k:
                p = power(i, k)
                term = p if term is None else _mul(term, p, K)
        if term is None:
            if nv is None:
                continue
            term = {(0,) * nv: one}
        _axpy(out, term, c)
    return out


def _derive(g: dict, i: int) -> dict:
    out = {}
    for e, c in g.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return out


# ---------------------------------------------------------------------------
# singularity test


def _point_scalars(F: MultiPoly, P, precision: int):
    xs = P.scalars(precision) if isinstance(P, ProjectivePoint) else as_scalars(P, precision)
    if len(xs) != F.nvars:
        raise ValueError("point dimension does not match the polynomial")
    return xs


def is_singular(F: MultiPoly, P, precision: int = DEFAULT_PRECISION) -> SingularStatus:
    if not F.is_homogeneous():
        raise NonHomogeneous("is_singular needs a homogeneous polynomial")

    def statuses(p):
        xs = _point_scalars(F, P, p)
        vals = [eval_at(F, xs, p)] + [eval_at(G, xs, p) for G in F.gradient()]
        return [ball_zero_status(v, p) for v in vals], vals

    st, vals = statuses(precision)
    if ZeroStatus.NONZERO in st:
        return SingularStatus.SMOOTH
    if ZeroStatus.UNDECIDED in st:
        return SingularStatus.UNDECIDED
    if all(isinstance(v, Fraction) for v in vals):
        return SingularStatus.SINGULAR
    st2, _ = statuses(2 * precision)
    if ZeroStatus.NONZERO in st2:
        return SingularStatus.SMOOTH
    if ZeroStatus.UNDECIDED in st2:
        return SingularStatus.UNDECIDED
    return SingularStatus.SINGULAR


# ---------------------------------------------------------------------------
# local germ


def choose_chart(P, precision: int = DEFAULT_PRECISION) -> int:
    xs = P.scalars(precision) if isinstance(P, ProjectivePoint) else as_scalars(P, precision)
    sizes = [abs(float(x)) if isinstance(x, Fraction) else float(x.abs_upper()) for x in xs]
    return max(range(len(xs)), key=lambda i: (sizes[i], -i))


def local_germ(F: MultiPoly, xs: Sequence, chart: int, K: int, field_: _Field) -> GermSeries:
    """Taylor coefficients of ``u -> F(P + u)`` with ``u[chart] = 0``, up to order K."""
    n = F.nvars
    others = [i for i in range(n) if i != chart]
    one = field_.coerce(1)
    pw = [[one] for _ in range(n)]

    def power(i, k):
        tab = pw[i]
        while len(tab) <= k:
            tab.append(tab[-1] * xs[i])
        return tab[k]

    coeffs: dict = {}
    for e, c in F.terms.items():
        c = field_.coerce(c) if isinstance(c, Fraction) else eval_value(c, field_.precision)
        base = c * power(chart, e[chart])
        subs = [range(e[i] + 1) for i in others]
        for alpha in _product(subs):
            if sum(alpha) > K:
                continue
            v = base
            for i, a in zip(others, alpha):
                k = e[i] - a
                if a:
                    v = v * math.comb(e[i], a)
                if k:
                    v = v * power(i, k)
            coeffs[alpha] = coeffs[alpha] + v if alpha in coeffs else v
    return GermSeries(n - 1, coeffs, K)


def _product(ranges):
    if not ranges:
        yield ()
        return
    head, *tail = ranges
    for a in head:
        for rest in _product(tail):
            yield (a,) + rest


# ---------------------------------------------------------------------------
# splitting


@dataclass
class _Split:
    corank: int
    residual: dict  # series in the kernel variables
    lambdas: list = field(default_factory=list)


def _drop(g: dict, exps) -> None:
    for e in exps:
        g.pop(e, None)


def _linear_substitute(g: dict, i: int, combo: dict, K: int, one) -> dict:
    """Replace variable i by ``x_i + sum combo[j] x_j``."""
    nv = len(next(iter(g))) if g else 0
    images = []
    for j in range(nv):
        unit = tuple(1 if t == j else 0 for t in range(nv))
        img = {unit: one}
        if j == i:
            for k, c in combo.items():
                ek = tuple(1 if t == k else 0 for t in range(nv))
                img[ek] = img[ek] + c if ek in img else c
        images.append(img)
    return _compose(g, images, K, one)


def split_germ(germ: GermSeries, field_: _Field) -> _Split:
    K = germ.order
    g = dict(germ.coeffs)
    m = germ.nvars
    one = field_.coerce(1)
    # order 0 and 1 must vanish at a singular point
    for e in [e for e in g if sum(e) <= 1]:
        if not field_.is_zero(g[e]):
            raise NotSingular("point is not singular on the surface")
        del g[e]

    def q(i, j):
        e = [0] * m
        e[i] += 1
        e[j] += 1
        return g.get(tuple(e))

    done: list[int] = []
    lambdas: list = []
    while True:
        rest = [i for i in range(m) if i not in done]
        diag = []
        off = []
        for i in rest:
            c = q(i, i)
            if c is not None and not field_.is_zero(c):
                diag.append((field_.size(c), -i, i))
        if not diag:
            for a in rest:
                for b in rest:
                    if a < b:
                        c = q(a, b)
                        if c is not None and not field_.is_zero(c):
                            off.append((field_.size(c), -a, -b, a, b))
            if not off:
                break
            _, _, _, a, b = max(off)
            g = _linear_substitute(g, a, {b: one}, K, one)
            continue
        _, _, i = max(diag)
        lam = q(i, i)
        combo = {}
        for j in rest:
            if j == i:
                continue
            c = q(i, j)
            if c is not None and not field_.is_zero(c):
                combo[j] = -c / (2 * lam)
        if combo:
            g = _linear_substitute(g, i, combo, K, one)
        # the completed square has no cross terms left
        for j in rest:
            if j != i:
                g.pop(tuple(int(t == i) + int(t == j) for t in range(m)), None)
        done.append(i)
        lambdas.append(lam)
    kernel = [i for i in range(m) if i not in done]
    # remaining quadratic coefficients were all decided zero
    _drop(g, [e for e in list(g) if sum(e) == 2 and all(e[t] == 0 for t in done)])
    corank = len(kernel)
    if corank == m:
        raise NotDoublePoint("quadratic part vanishes: not a double point")
    if corank > 2:
        raise CorankTooHigh(f"corank {corank} exceeds 2: not an A-D-E point")
    if corank == 0:
        return _Split(0, {}, lambdas)

    # reorder variables: kernel first, then split ones
    order = kernel + done
    g2 = {tuple(e[t] for t in order): c for e, c in g.items()}
    c = corank
    ys = list(range(c, m))
    lam = dict(zip(ys, lambdas))
    h = dict(g2)
    for y in ys:
        e = tuple(2 if t == y else 0 for t in range(m))
        h.pop(e, None)
    dh = {y: _derive(h, y) for y in ys}
    xvars = [{tuple(1 if t == i else 0 for t in range(c)): one} for i in range(c)]
    phi = {y: {} for y in ys}
    for _ in range(K):
        images = xvars + [phi[y] for y in ys]
        new = {}
        for y in ys:
            val = _compose(dh[y], images, K - 1, one)
            s = -1 / (2 * lam[y])
            new[y] = {e: v * s for e, v in val.items() if sum(e) >= 2}
        phi = new
    images = xvars + [phi[y] for y in ys]
    f = _compose(g2, images, K, one)
    return _Split(corank, f, lambdas)


# ---------------------------------------------------------------------------
# residual analysis


def _order_of(f: dict, field_: _Field, K: int) -> int | None:
    for k in range(3, K + 1):
        for e, c in f.items():
            if sum(e) == k and not field_.is_zero(c):
                return k
    return None


def _binary_cubic(f: dict):
    z = Fraction(0)
    return tuple(f.get(e, z) for e in ((3, 0), (2, 1), (1, 2), (0, 3)))


def _analyze_corank2(f: dict, field_: _Field, K: int) -> ADEType:
    one = field_.coerce(1)
    a, b, c, d = _binary_cubic(f)
    if all(field_.is_zero(x) for x in (a, b, c, d)):
        raise NotSimple("cubic term of the residual vanishes")
    disc = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
    if not field_.is_zero(disc):
        return D(4)
    H = (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    if not all(field_.is_zero(x) for x in H):
        return _analyze_dm(f, H, (a, b, c, d), field_, K, one)
    return _analyze_em(f, (a, b, c, d), field_, K, one)


def _analyze_dm(f, H, cubic, field_, K, one) -> ADEType:
    al, be, ga = H
    a, b, c, d = cubic
    # double factor l2 = p x + q y from the square H ~ l2^2
    if field_.size(al) >= field_.size(ga):
        p, q = 2 * al, be
    else:
        p, q = be, 2 * ga
    # simple factor l1 = r x + s y with cubic = l1 * l2^2
    if field_.size(p) >= field_.size(q):
        r = a / (p * p)
        s = (b - 2 * p * q * r) / (p * p)
    else:
        s = d / (q * q)
        r = (c - 2 * p * q * s) / (q * q)
    dt = r * q - s * p
    # x = (q u - s w)/dt, y = (-p u + r w)/dt, with u = l1, w = l2
    img_x = {(1, 0): q / dt, (0, 1): -s / dt}
    img_y = {(1, 0): -p / dt, (0, 1): r / dt}
    g = _compose(f, [img_x, img_y], K, one)
    g.pop((3, 0), None)
    g.pop((2, 1), None)
    g.pop((0, 3), None)
    g[(1, 2)] = one  # cubic is exactly u*w^2 now
    for deg in range(4, K + 1):
        sub_u = {(1, 0): one}
        sub_w = {(0, 1): one}
        killed = []
        for a_ in range(deg + 1):
            b_ = deg - a_
            cf = g.get((a_, b_))
            if cf is None or b_ == 0:
                continue
            if field_.is_zero(cf):
                killed.append((a_, b_))
                continue
            if b_ >= 2:
                e = (a_, b_ - 2)
                sub_u[e] = sub_u.get(e, 0) - cf
            else:
                e = (a_ - 1, 0)
                sub_w[e] = sub_w.get(e, 0) - cf / 2
            killed.append((a_, b_))
        if len(sub_u) > 1 or len(sub_w) > 1:
            g = _compose(g, [sub_u, sub_w], K, one)
        for e in killed:
            g.pop(e, None)
        lead = g.get((deg, 0))
        if lead is not None and not field_.is_zero(lead):
            return D(deg + 1)
    raise TruncationInsufficient(f"D-series type not determined up to order {K}")


def _analyze_em(f, cubic, field_, K, one) -> ADEType:
    a, b, c, d = cubic
    # cubic = kappa * w^3 with w = x + t y (or t x + y)
    if field_.size(a) >= field_.size(d):
        t = b / (3 * a)
        # w = x + t y, u = y  =>  x = w - t u, y = u
        img_x = {(0, 1): one, (1, 0): -t}
        img_y = {(1, 0): one}
    else:
        t = c / (3 * d)
        img_x = {(1, 0): one}
        img_y = {(0, 1): one, (1, 0): -t}
    g = _compose(f, [img_x, img_y], K, one)
    z = Fraction(0)
    for e, kind in (((4, 0), 6), ((3, 1), 7), ((5, 0), 8)):
        if kind == 8 and K < 5:
            raise TruncationInsufficient("E8 test needs order 5")
        if not field_.is_zero(g.get(e, z)):
            return E(kind)
    raise NotSimple("triple-line cubic without E6/E7/E8 principal part")


def _classify_at(F: MultiPoly, xs, chart: int, K: int, field_: _Field) -> ADEType:
    germ = local_germ(F, xs, chart, K, field_)
    return classify_germ(germ, field_)


def classify_germ(germ: GermSeries, field_: _Field | None = None) -> ADEType:
    field_ = field_ or _Field(None)
    K = germ.order
    with working_precision((field_.precision or 64) + GUARD_BITS):
        sp = split_germ(germ, field_)
        if sp.corank == 0:
            return A(1)
        if sp.corank == 1:
            k = _order_of(sp.residual, field_, K)
            if k is None:
                raise TruncationInsufficient(f"residual vanishes up to order {K}")
            return A(k - 1)
        return _analyze_corank2(sp.residual, field_, K)


def classify(
    F: MultiPoly,
    P: ProjectivePoint,
    chart: int | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    precision: int = DEFAULT_PRECISION,
) -> ADEType:
    """A-D-E type of the singular point ``P`` of ``F = 0``."""
    if not F.is_homogeneous():
        raise NonHomogeneous("classify needs a homogeneous polynomial")
    st = is_singular(F, P, precision)
    if st is SingularStatus.SMOOTH:
        raise NotSingular(f"{P!r} is not a singular point")
    if st is SingularStatus.UNDECIDED:
        raise Undecided(f"cannot decide whether {P!r} is singular")
    if chart is None:
        chart = choose_chart(P, precision)
    orders = [FIRST_PASS_ORDER, max_order] if max_order > FIRST_PASS_ORDER else [max_order]
    exact = P.is_exact() and F.is_rational()
    last_err = None
    for K in orders:
        try:
            if exact:
                return _classify_at(F, list(P.exact()), chart, K, _Field(None))
            results = []
            for p in (precision, 2 * precision):
                with working_precision(p + GUARD_BITS):
                    xs = P.scalars(p)
                    results.append(_classify_at(F, xs, chart, K, _Field(p)))
            if results[0] != results[1]:
                raise Undecided(f"classification unstable: {results[0]} vs {results[1]}")
            return results[0]
        except TruncationInsufficient as err:
            last_err = err
    raise last_err


def classify_affine(g: MultiPoly, max_order: int = DEFAULT_MAX_ORDER) -> ADEType:
    """Type of the germ at the origin of an affine polynomial with rational coefficients."""
    orders = [FIRST_PASS_ORDER, max_order] if max_order > FIRST_PASS_ORDER else [max_order]
    last_err = None
    for K in orders:
        coeffs = {e: c for e, c in g.terms.items() if sum(e) <= K}
        try:
            return classify_germ(GermSeries(g.nvars, coeffs, K), _Field(None))
        except TruncationInsufficient as err:
            last_err = err
    raise last_err


# ---------------------------------------------------------------------------
# frames


def _hessian_scalars(F: MultiPoly, P: ProjectivePoint, precision: int):
    xs = P.scalars(precision)
    parts = second_partials(F)
    n = F.nvars
    H = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            H[i][j] = H[j][i] = eval_at(parts[i][j], xs, precision)
    return H, xs


def _rank_of(H, precision: int) -> int:
    if all(isinstance(x, Fraction) for row in H for x in row):
        return bareiss_rank(H)
    res = ball_rank(H, precision)
    if res.straddles:
        raise Undecided("Hessian rank undecided")
    return res.rank


def _best_block(H, r: int, precision: int):
    """Rows/columns of the r x r minor of largest modulus."""
    import itertools

    n = len(H)
    best = None
    with working_precision(precision + GUARD_BITS):
        for rows in itertools.combinations(range(n), r):
            for cols in itertools.combinations(range(n), r):
                v = det([[H[i][j] for j in cols] for i in rows])
                size = abs(float(v)) if isinstance(v, Fraction) else float(v.abs_lower())
                key = (size, tuple(-i for i in rows), tuple(-j for j in cols))
                if best is None or key > best[0]:
                    best = (key, rows, cols)
    return best[1], best[2]


def _indep_measure(vectors, precision: int) -> float:
    """Largest maximal minor modulus of the stacked vectors."""
    import itertools

    n = len(vectors[0])
    k = len(vectors)
    best = 0.0
    with working_precision(precision + GUARD_BITS):
        for cols in itertools.combinations(range(n), k):
            v = det([[vec[j] for j in cols] for vec in vectors])
            size = abs(float(v)) if isinstance(v, Fraction) else float(v.abs_lower())
            best = max(best, size)
    return best


def frame_vectors(
    F: MultiPoly | None, record: SingularPointRecord, precision: int = DEFAULT_PRECISION
) -> tuple[list | None, list | None]:
    """Frame directions of ``record`` as Fractions or balls at ``precision``."""
    v1 = v2 = None
    if record.v1 is not None:
        v1 = as_scalars(record.v1, precision)
        if record.v2 is not None:
            v2 = as_scalars(record.v2, precision)
        return v1, v2
    if record.kernel is None:
        if record.v2 is not None:
            v2 = as_scalars(record.v2, precision)
        return None, v2
    if F is None:
        from .errors import MissingFrame

        raise MissingFrame("frame is derived from the Hessian; the surface is required")
    H, _ = _hessian_scalars(F, record.point, precision)
    with working_precision(precision + GUARD_BITS):
        kern = cramer_kernel(H, record.kernel.rows, record.kernel.cols)
    free = record.kernel.free
    v1 = kern[free[0]]
    if len(free) > 1:
        v2 = kern[free[1]]
    if record.v2 is not None:
        v2 = as_scalars(record.v2, precision)
    return v1, v2


def adapted_frame(
    F: MultiPoly,
    P: ProjectivePoint,
    ade: ADEType,
    precision: int = DEFAULT_PRECISION,
    v1=None,
    v2=None,
) -> SingularPointRecord:
    """Record for ``P`` with the directions its condition set needs.

    A_m (m >= 2) and D_4 take their directions from the kernel of the
    Hessian at ``P``; deeper D and E types only carry user directions.
    """
    n = F.nvars
    if v1 is not None:
        return SingularPointRecord(P, ade, tuple(v1), tuple(v2) if v2 is not None else None, "linear")
    if ade == A(1):
        return SingularPointRecord(P, ade, None, None, "linear")
    if ade.family == "A" or ade == D(4):
        want = 2 if ade.family == "A" else 3
        H, xs = _hessian_scalars(F, P, precision)
        r = _rank_of(H, precision)
        if n - r != want:
            raise KernelDimensionUnexpected(
                f"Hessian kernel at {P!r} has dimension {n - r}, expected {want} for {ade}"
            )
        rows, cols = _best_block(H, r, precision)
        with working_precision(precision + GUARD_BITS):
            kern = cramer_kernel(H, rows, cols)
        free = sorted(kern)
        if ade.family == "A":
            k = max(free, key=lambda k: (_indep_measure([xs, kern[k]], precision), -k))
            choice = (k,)
        else:
            import itertools

            pairs = list(itertools.combinations(free, 2))
            best = max(pairs, key=lambda pr: (_indep_measure([xs, kern[pr[0]], kern[pr[1]]], precision), tuple(-i for i in pr)))
            choice = best
        return SingularPointRecord(P, ade, None, None, "linear", FrameChoice(tuple(rows), tuple(cols), choice))
    return SingularPointRecord(P, ade, None, tuple(v2) if v2 is not None else None, "unavailable")


# ---------------------------------------------------------------------------
# bookkeeping


def mu_and_near_points(inventory: Mapping) -> tuple[int, dict]:
    """Total count of singular and infinitely near points, and per-type shares."""
    total = 0
    breakdown = {}
    for key, count in inventory.items():
        t = key if isinstance(key, ADEType) else ADEType.parse(key)
        count = int(count)
        if count < 0:
            raise InvalidIndex("negative count in inventory")
        share = count * t.mu()
        breakdown[str(t)] = {"count": count, "mu_each": t.mu(), "near_points_each": t.near_points(), "mu": share}
        total += share
    return total, breakdown


def lift_type(branch: ADEType, n: int) -> ADEType:
    """Type of the cyclic n-fold cover singularity over a branch point."""
    if n < 2:
        raise UnsupportedLift("cover degree must be at least 2")
    if n == 2:
        return branch
    if branch == A(1):
        return A(n - 1)
    if branch == A(2) and n == 3:
        return D(4)
    raise UnsupportedLift(f"no lift rule for {branch} under an {n}-fold cover")


def inventory_of(records: Sequence[SingularPointRecord]) -> dict[str, int]:
    out: dict[str, int] = {}
    for rec in records:
        out[str(rec.ade)] = out.get(str(rec.ade), 0) + 1
    return dict(sorted(out.items()))


__all__ = [
    "ADEType",
    "A",
    "D",
    "E",
    "SingularStatus",
    "SingularPointRecord",
    "FrameChoice",
    "GermSeries",
    "is_singular",
    "classify",
    "classify_affine",
    "classify_germ",
    "local_germ",
    "choose_chart",
    "adapted_frame",
    "frame_vectors",
    "mu_and_near_points",
    "lift_type",
    "inventory_of",
]
