"""Exact rationals and certified complex balls for algebraic numbers.

Rationals are :class:`fractions.Fraction`.  Balls are python-flint ``acb``
values (rigorous midpoint-radius complex arithmetic); the working precision
of flint is process-global, so every evaluation here sets it explicitly via
:func:`working_precision` and restores it afterwards.

An :class:`AlgebraicValue` is an immutable recipe: a rational, a simple root
of a monic rational polynomial picked out by a seed and an isolation disk, or
an arithmetic expression over other recipes.  :func:`eval_value` turns a
recipe into a ball whose radius is at most ``2**-precision``.
"""

from __future__ import annotations

import enum
import functools
import threading
from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from flint import acb, acb_poly, arb, ctx, fmpq, fmpq_poly

from .errors import (
    DivisionByProvableZero,
    InputError,
    MultipleRoot,
    NonIsolating,
    PrecisionExhausted,
)

Ball = acb

DEFAULT_PRECISION = 256
GUARD_BITS = 32
ESCALATION_ROUNDS = 4

_prec_lock = threading.RLock()


@contextmanager
def working_precision(bits: int):
    """Temporarily set flint's working precision to ``bits``."""
    with _prec_lock:
        saved = ctx.prec
        ctx.prec = int(bits)
        try:
            yield
        finally:
            ctx.prec = saved


class ZeroStatus(enum.Enum):
    ZERO = "Zero"
    NONZERO = "NonZero"
    UNDECIDED = "Undecided"


# ---------------------------------------------------------------------------
# small conversions


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not a rational: {x!r}")


def to_fmpq(q) -> fmpq:
    q = to_fraction(q)
    return fmpq(q.numerator, q.denominator)


def rational_ball(q) -> acb:
    """Ball around a rational at the current precision (exact when dyadic)."""
    return acb(arb(to_fmpq(q)))


def pow2(k: int) -> arb:
    """Exact ``2**k`` as an arb."""
    if k >= 0:
        return arb(2**k)
    return arb(fmpq(1, 2 ** (-k)))


def ball_radius(b: acb) -> arb:
    """Upper bound for the distance from the midpoint to any point of ``b``."""
    rr = b.real.rad()
    ri = b.imag.rad()
    if ri == 0:
        return arb(rr)
    if rr == 0:
        return arb(ri)
    return (arb(rr) ** 2 + arb(ri) ** 2).sqrt().upper()


def ball_abs_upper(b: acb) -> arb:
    return b.abs_upper().upper()


def ball_abs_lower(b: acb) -> arb:
    return b.abs_lower().lower()


def ball_with_radius(center: acb, radius: arb) -> acb:
    """Ball (rectangle) with the given midpoint and per-part radius."""
    return acb(arb(center.real.mid(), radius), arb(center.imag.mid(), radius))


def ball_zero_status(b, precision: int) -> ZeroStatus:
    """Single-precision zero decision for a scalar (Fraction or ball).

    A ball that excludes 0 is certified nonzero; one lying entirely within
    ``2**(-precision/2)`` of 0 is reported zero (heuristically).
    """
    if isinstance(b, (int, Fraction)):
        return ZeroStatus.ZERO if b == 0 else ZeroStatus.NONZERO
    if not b.contains(0):
        return ZeroStatus.NONZERO
    if ball_abs_upper(b) < pow2(-(precision // 2)):
        return ZeroStatus.ZERO
    return ZeroStatus.UNDECIDED


def lift(x) -> acb:
    """Coerce a Fraction/int/acb scalar to a ball at the current precision."""
    if isinstance(x, acb):
        return x
    return rational_ball(x)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# algebraic value recipes


class AlgebraicValue:
    """Immutable recipe for an algebraic number.  See module docstring."""

    __slots__ = ("_hash",)

    def is_rational(self) -> bool:
        return False

    # arithmetic builds expression nodes, folding rationals eagerly
    def __add__(self, other):
        return _combine("+", self, other)

    def __radd__(self, other):
        return _combine("+", other, self)

    def __sub__(self, other):
        return _combine("-", self, other)

    def __rsub__(self, other):
        return _combine("-", other, self)

    def __mul__(self, other):
        return _combine("*", self, other)

    def __rmul__(self, other):
        return _combine("*", other, self)

    def __truediv__(self, other):
        return _combine("/", self, other)

    def __rtruediv__(self, other):
        return _combine("/", other, self)

    def __neg__(self):
        return _combine("*", RationalValue(Fraction(-1)), self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if isinstance(self, RationalValue):
            if n < 0 and self.value == 0:
                raise DivisionByProvableZero("0 raised to a negative power")
            return RationalValue(self.value**n)
        if n == 0:
            return ONE
        if n == 1:
            return self
        return Expr("pow", (self, RationalValue(Fraction(n))))


class RationalValue(AlgebraicValue):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", to_fraction(value))
        object.__setattr__(self, "_hash", hash(("q", self.value)))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicValue is immutable")

    def is_rational(self) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, RationalValue) and other.value == self.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"rational({self.value})"


class RootOf(AlgebraicValue):
    """The unique root of a monic rational polynomial inside a seed disk.

    ``coeffs`` are listed from the constant term upward and end with 1.
    The isolation disk is checked at construction by certified root
    enumeration: exactly one root must lie in it.
    """

    __slots__ = ("coeffs", "seed", "radius")

    def __init__(self, coeffs: Sequence, seed: complex, radius=Fraction(1, 10)):
        cs = tuple(to_fraction(c) for c in coeffs)
        if len(cs) < 2 or cs[-1] != 1:
            raise InputError("root_of needs a monic polynomial of degree >= 1")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "seed", complex(seed))
        if isinstance(radius, float):
            radius = Fraction(radius).limit_denominator(10**12)
        object.__setattr__(self, "radius", to_fraction(radius))
        if self.radius <= 0:
            raise InputError("isolation radius must be positive")
        object.__setattr__(self, "_hash", hash(("root", cs, self.seed, self.radius)))
        _check_isolation(cs, self.seed, self.radius)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicValue is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RootOf)
            and other.coeffs == self.coeffs
            and other.seed == self.seed
            and other.radius == self.radius
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"root_of({list(map(str, self.coeffs))}, seed={self.seed}, radius={self.radius})"


class Expr(AlgebraicValue):
    __slots__ = ("op", "args")
    OPS = ("+", "-", "*", "/", "pow")

    def __init__(self, op: str, args: Iterable[AlgebraicValue]):
        args = tuple(args)
        if op not in self.OPS:
            raise InputError(f"unknown operator {op!r}")
        if op == "pow":
            if len(args) != 2 or not (
                isinstance(args[1], RationalValue) and args[1].value.denominator == 1
            ):
                raise InputError("pow takes a base and an integer exponent")
        elif op == "/" and len(args) != 2:
            raise InputError("division takes two operands")
        elif op == "-" and len(args) not in (1, 2):
            raise InputError("subtraction takes one or two operands")
        elif not args:
            raise InputError(f"{op!r} needs operands")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(("expr", op, args)))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicValue is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Expr)
            and other._hash == self._hash
            and other.op == self.op
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Expr({self.op!r}, {list(self.args)!r})"


ZERO = RationalValue(0)
ONE = RationalValue(1)


def as_value(x) -> AlgebraicValue:
    if isinstance(x, AlgebraicValue):
        return x
    return RationalValue(to_fraction(x))


def rational(q) -> RationalValue:
    return RationalValue(q)


def root_of(coeffs: Sequence, seed: complex, radius=Fraction(1, 10)) -> RootOf:
    return RootOf(coeffs, seed, radius)


def _combine(op: str, a, b) -> AlgebraicValue:
    a = as_value(a)
    b = as_value(b)
    if isinstance(a, RationalValue) and isinstance(b, RationalValue):
        x, y = a.value, b.value
        if op == "+":
            return RationalValue(x + y)
        if op == "-":
            return RationalValue(x - y)
        if op == "*":
            return RationalValue(x * y)
        if y == 0:
            raise DivisionByProvableZero("division by rational zero")
        return RationalValue(x / y)
    if op == "+":
        if a == ZERO:
            return b
        if b == ZERO:
            return a
    elif op == "-":
        if b == ZERO:
            return a
    elif op == "*":
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE:
            return a
    elif op == "/":
        if b == ZERO:
            raise DivisionByProvableZero("division by rational zero")
        if b == ONE:
            return a
        if a == ZERO:
            return ZERO
    return Expr(op, (a, b))


def exact_rational(v: AlgebraicValue) -> Fraction | None:
    """The exact value of ``v`` if it is built from rationals only."""
    if isinstance(v, RationalValue):
        return v.value
    if isinstance(v, RootOf):
        if len(v.coeffs) == 2:
            return -v.coeffs[0]
        return None
    vals = [exact_rational(a) for a in v.args]
    if any(x is None for x in vals):
        return None
    if v.op == "pow":
        base, n = vals
        if base == 0 and n < 0:
            raise DivisionByProvableZero("0 raised to a negative power")
        return base ** int(n)
    acc = vals[0]
    for x in vals[1:]:
        if v.op == "+":
            acc += x
        elif v.op == "-":
            acc -= x
        elif v.op == "*":
            acc *= x
        else:
            if x == 0:
                raise DivisionByProvableZero("division by rational zero")
            acc /= x
    return acc


# ---------------------------------------------------------------------------
# root refinement


def _as_fmpq_poly(p) -> fmpq_poly:
    if isinstance(p, fmpq_poly):
        return p
    return fmpq_poly([to_fmpq(c) for c in p])


def _check_isolation(coeffs, seed: complex, radius: Fraction) -> None:
    poly = _as_fmpq_poly(coeffs)
    g = poly.gcd(poly.derivative())
    with working_precision(64):
        center = acb(seed.real, seed.imag)
        r = arb(to_fmpq(radius))
        inside = 0
        straddle = False
        for root, _mult in poly.complex_roots():
            dist = (root - center).abs_upper()
            near = (root - center).abs_lower()
            if dist < r:
                inside += 1
            elif not (near > r):
                straddle = True
        repeated = False
        if g.degree() > 0:
            for root, _mult in g.complex_roots():
                if not ((root - center).abs_lower() > r):
                    repeated = True
    if repeated:
        raise MultipleRoot(f"repeated root of {poly} inside isolation disk around {seed}")
    if straddle or inside != 1:
        raise NonIsolating(
            f"disk of radius {radius} around {seed} holds {inside} roots of {poly}"
            + (" (one on the boundary)" if straddle else "")
        )


@functools.lru_cache(maxsize=4096)
def _refine_cached(coeffs: tuple, seed: complex, target: int) -> acb:
    poly = _as_fmpq_poly(coeffs)
    if poly.degree() == 1:
        with working_precision(target + GUARD_BITS):
            return rational_ball(-to_fraction(coeffs[0]))
    dpoly = poly.derivative()
    for attempt in range(3):
        wp = target + GUARD_BITS + 32 * attempt
        with working_precision(wp):
            P = acb_poly(poly)
            dP = acb_poly(dpoly)
            x = acb(seed.real, seed.imag)
            eps = pow2(-(wp - 4))
            for _ in range(200 + wp):
                fx = P(x)
                dfx = dP(x)
                if dfx.contains(0):
                    break
                step = fx / dfx
                x = acb(
                    (x - step).real.mid(), (x - step).imag.mid()
                )
                if step.abs_upper() < eps:
                    break
            # Krawczyk test on a small square around x
            r = pow2(-(target + 10))
            D = ball_with_radius(x, r)
            dfx = dP(x)
            if dfx.contains(0):
                continue
            Y = 1 / acb(dfx.real.mid(), dfx.imag.mid())
            Y = acb(Y.real.mid(), Y.imag.mid())
            K = x - Y * P(x) + (1 - Y * dP(D)) * (D - x)
            if D.contains_interior(K):
                # widen to a fixed radius so that calls at growing precision nest
                return ball_with_radius(K, pow2(-(target + 1)) * arb(fmpq(7, 10)))
    g = poly.gcd(dpoly)
    if g.degree() > 0:
        with working_precision(64):
            s = acb(seed.real, seed.imag)
            for root, _m in g.complex_roots():
                if (root - s).abs_upper() < arb("0.1"):
                    raise MultipleRoot(f"seed {seed} approaches a repeated root of {poly}")
    raise NonIsolating(f"interval Newton failed to isolate a root of {poly} near {seed}")


def refine_root(p, seed: complex, target_precision: int) -> acb:
    """Certified ball around the simple root of ``p`` attracting ``seed``.

    ``p`` is a monic polynomial given by coefficients (constant term first)
    or as an ``fmpq_poly``.  The returned ball has per-part radius below
    ``2**-target_precision`` and contains a root of ``p``; the root is unique
    in a neighbourhood certified by a Krawczyk contraction test.
    """
    if isinstance(p, fmpq_poly):
        coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in p.coeffs())
    else:
        coeffs = tuple(to_fraction(c) for c in p)
    if coeffs[-1] != 1:
        raise InputError("refine_root expects a monic polynomial")
    return _refine_cached(coeffs, complex(seed), int(target_precision))


# ---------------------------------------------------------------------------
# evaluation


def _eval_node(v: AlgebraicValue, wp: int, memo: dict) -> acb:
    key = id(v)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(v, RationalValue):
        out = rational_ball(v.value)
    elif isinstance(v, RootOf):
        out = refine_root(v.coeffs, v.seed, wp)
        disk = acb(v.seed.real, v.seed.imag)
        if not (out - disk).abs_upper() < arb(to_fmpq(v.radius)):
            raise NonIsolating(f"refined root left the isolation disk of {v!r}")
    else:
        vals = [_eval_node(a, wp, memo) for a in v.args]
        if v.op == "pow":
            n = int(v.args[1].value)
            base = vals[0]
            if n < 0:
                if base.contains(0):
                    raise _NeedsPrecision(v.args[0])
                out = (1 / base) ** (-n)
            else:
                out = base**n
        else:
            out = vals[0]
            for x in vals[1:]:
                if v.op == "+":
                    out = out + x
                elif v.op == "-":
                    out = out - x
                elif v.op == "*":
                    out = out * x
                else:
                    if x.contains(0):
                        raise _NeedsPrecision(v.args[1])
                    out = out / x
            if v.op == "-" and len(vals) == 1:
                out = -out
    memo[key] = (v, out)
    return out


class _NeedsPrecision(Exception):
    def __init__(self, divisor):
        self.divisor = divisor


def eval_value(v, precision: int = DEFAULT_PRECISION) -> acb:
    """Certified ball for ``v`` with radius at most ``2**-precision``.

    Evaluation is bottom-up at a working precision that doubles (at most
    four rounds) until the radius target is met.
    """
    v = as_value(v)
    target = pow2(-int(precision))
    wp = int(precision) + GUARD_BITS
    last = None
    for _ in range(ESCALATION_ROUNDS + 1):
        with working_precision(wp):
            try:
                out = _eval_node(v, wp, {})
            except _NeedsPrecision as exc:
                last = exc
                wp *= 2
                continue
            if ball_radius(out) <= target:
                return out
        wp *= 2
    if isinstance(last, _NeedsPrecision):
        divisor = last.divisor
        if exact_rational_or_none(divisor) == 0:
            raise DivisionByProvableZero(f"divisor {divisor!r} is zero")
        raise DivisionByProvableZero(
            f"divisor {divisor!r} cannot be separated from zero at {wp} bits"
        )
    raise PrecisionExhausted(f"radius target 2^-{precision} missed for {v!r}")


def exact_rational_or_none(v) -> Fraction | None:
    try:
        return exact_rational(as_value(v))
    except DivisionByProvableZero:
        return None


def is_zero_heuristic(v, precision: int = DEFAULT_PRECISION) -> ZeroStatus:
    """Decide whether ``v`` vanishes.

    NonZero answers are certified (the ball excludes 0).  Zero answers are
    heuristic: the value lies within ``2**(-precision/2)`` of 0 at both
    ``precision`` and ``2*precision``.  Rational recipes are decided exactly.
    """
    v = as_value(v)
    q = exact_rational_or_none(v)
    if q is not None:
        return ZeroStatus.ZERO if q == 0 else ZeroStatus.NONZERO
    status = ZeroStatus.UNDECIDED
    for p in (precision, 2 * precision):
        try:
            b = eval_value(v, p)
        except DivisionByProvableZero:
            raise
        except PrecisionExhausted:
            return ZeroStatus.UNDECIDED
        with working_precision(p + GUARD_BITS):
            s = ball_zero_status(b, p)
        if s is ZeroStatus.NONZERO:
            return s
        if s is ZeroStatus.UNDECIDED:
            return s
        status = s
    return status


def scalar_zero_status(compute, precision: int) -> ZeroStatus:
    """Zero decision for a quantity computed by ``compute(precision)``.

    ``compute`` returns a Fraction (exact) or a ball.  Balls are checked at
    ``precision`` and ``2*precision`` as in :func:`is_zero_heuristic`.
    """
    first = compute(precision)
    if is_exact_scalar(first):
        return ZeroStatus.ZERO if first == 0 else ZeroStatus.NONZERO
    s = ball_zero_status(first, precision)
    if s is not ZeroStatus.ZERO:
        return s
    second = compute(2 * precision)
    return ball_zero_status(second, 2 * precision)


# ---------------------------------------------------------------------------
# JSON


def value_to_json(v) -> dict:
    v = as_value(v)
    if isinstance(v, RationalValue):
        return {"rational": str(v.value)}
    if isinstance(v, RootOf):
        return {
            "root_of": {
                "poly": [str(c) for c in v.coeffs],
                "seed": [v.seed.real, v.seed.imag],
                "radius": str(v.radius),
            }
        }
    return {"expr": {"op": v.op, "args": [value_to_json(a) for a in v.args]}}


def value_from_json(obj) -> AlgebraicValue:
    if isinstance(obj, (int, str)):
        return RationalValue(to_fraction(obj))
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError(f"bad AlgebraicValue encoding: {obj!r}")
    (kind, body), = obj.items()
    if kind == "rational":
        return RationalValue(to_fraction(str(body)))
    if kind == "root_of":
        re, im = (float(x) for x in body["seed"])
        radius = body.get("radius", "1/10")
        return RootOf(body["poly"], complex(re, im), to_fraction(str(radius)))
    if kind == "expr":
        args = [value_from_json(a) for a in body["args"]]
        if body["op"] == "-" and len(args) == 1:
            return -args[0]
        return Expr(body["op"], args)
    raise InputError(f"unknown AlgebraicValue kind {kind!r}")
