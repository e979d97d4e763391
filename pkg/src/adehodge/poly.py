"""Homogeneous multivariate polynomials over algebraic coefficients.

Polynomials are sparse maps ``exponent tuple -> coefficient``.  Coefficients
are :class:`~fractions.Fraction` whenever they are rational and
:class:`~adehodge.numbers.AlgebraicValue` otherwise.  Evaluation takes the
exact path when the point and all coefficients are rational and returns a
certified ball otherwise.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateDirection,
    DimensionMismatch,
    InputError,
    NonHomogeneous,
    PolySyntaxError,
    UnknownVariable,
)
from .numbers import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    AlgebraicValue,
    RationalValue,
    ZeroStatus,
    as_value,
    ball_zero_status,
    eval_value,
    exact_rational_or_none,
    is_exact_scalar,
    lift,
    value_from_json,
    value_to_json,
    working_precision,
)

MAX_EXPONENT = 255


def default_names(nvars: int) -> tuple[str, ...]:
    return tuple(f"y{i}" for i in range(nvars))


def _normalize_coeff(c):
    """Rational coefficients become Fractions, the rest stay AlgebraicValues."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, AlgebraicValue):
        q = c.value if isinstance(c, RationalValue) else None
        return q if q is not None else c
    return Fraction(c)


def _is_zero_coeff(c) -> bool:
    return isinstance(c, Fraction) and c == 0


def grlex_key(exp: tuple[int, ...]):
    """Sort key putting terms in descending graded-lex order."""
    return (-sum(exp), tuple(-e for e in exp))


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = int(nvars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise DimensionMismatch(f"exponent {exp} has wrong length for {nvars} variables")
            if any(e < 0 or e > MAX_EXPONENT for e in exp):
                raise InputError(f"exponent out of range in {exp}")
            c = _normalize_coeff(c)
            if not _is_zero_coeff(c):
                clean[exp] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=Fraction(1)) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(n, terms)

    # -- basic properties ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def homogeneous_degree(self) -> int | None:
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None if degs else 0

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DimensionMismatch("polynomials in different numbers of variables")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = _normalize_coeff(terms[e] + c) if e in terms else c
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _normalize_coeff(as_value(other) if not isinstance(other, (int, Fraction)) else other)
            if _is_zero_coeff(c):
                return MultiPoly(self.nvars)
            return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc[e] = _normalize_coeff(acc[e] + prod) if e in acc else prod
        return MultiPoly(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        c = _normalize_coeff(c)
        if _is_zero_coeff(c):
            raise ZeroDivisionError("division of a polynomial by zero")
        return MultiPoly(self.nvars, {e: v / c for e, v in self.terms.items()})

    # -- calculus -----------------------------------------------------------

    def derive(self, var_index: int) -> "MultiPoly":
        if not 0 <= var_index < self.nvars:
            raise DimensionMismatch(f"variable index {var_index} out of range")
        terms = {}
        for e, c in self.terms.items():
            k = e[var_index]
            if k:
                ne = list(e)
                ne[var_index] = k - 1
                terms[tuple(ne)] = c * k
        return MultiPoly(self.nvars, terms)

    def gradient(self) -> list["MultiPoly"]:
        return [self.derive(i) for i in range(self.nvars)]

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``images[i]`` for variable ``i``."""
        if len(images) != self.nvars:
            raise DimensionMismatch("compose needs one image per variable")
        m = images[0].nvars
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(m, 1)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        out = MultiPoly(m)
        for e, c in self.terms.items():
            term = MultiPoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def divmod(self, divisor: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Division with remainder by a single divisor in graded-lex order."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_exp, lead_c = divisor.sorted_terms()[0]
        rest = dict(self.terms)
        quot: dict = {}
        rem: dict = {}
        while rest:
            exp = min(rest, key=grlex_key)
            c = rest.pop(exp)
            if all(a >= b for a, b in zip(exp, lead_exp)):
                qe = tuple(a - b for a, b in zip(exp, lead_exp))
                qc = _normalize_coeff(c / lead_c)
                quot[qe] = qc
                for de, dc in divisor.terms.items():
                    if de == lead_exp:
                        continue
                    e = tuple(a + b for a, b in zip(qe, de))
                    v = (rest[e] if e in rest else Fraction(0)) - qc * dc
                    v = _normalize_coeff(v)
                    if _is_zero_coeff(v):
                        rest.pop(e, None)
                    else:
                        rest[e] = v
            else:
                rem[exp] = c
        return MultiPoly(self.nvars, quot), MultiPoly(self.nvars, rem)

    # -- serialization ------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form: graded-lex order, explicit ``*`` and ``^``."""
        names = tuple(names) if names else default_names(self.nvars)
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            if not isinstance(c, Fraction):
                raise InputError("only rational coefficients have a text form")
            factors = [
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            ]
            mag = abs(c)
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [[list(e), value_to_json(c)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj) -> "MultiPoly":
        return cls(obj["nvars"], {tuple(e): value_from_json(c) for e, c in obj["terms"]})


# ---------------------------------------------------------------------------
# points


class ProjectivePoint:
    """Point of projective space given by an (unnormalized) representative."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        vals = tuple(as_value(c) for c in coords)
        if not vals:
            raise InputError("empty point")
        object.__setattr__(self, "coords", vals)
        if all(exact_rational_or_none(c) == 0 for c in vals):
            raise InputError("all coordinates of a projective point vanish")

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and other.coords == self.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        exact = self.exact()
        if exact is not None:
            return "(" + " : ".join(str(c) for c in exact) + ")"
        return f"ProjectivePoint({list(self.coords)!r})"

    def exact(self) -> tuple[Fraction, ...] | None:
        vals = [exact_rational_or_none(c) for c in self.coords]
        if any(v is None for v in vals):
            return None
        return tuple(vals)

    def is_exact(self) -> bool:
        return self.exact() is not None

    def scalars(self, precision: int = DEFAULT_PRECISION):
        """Coordinates as Fractions (exact) or balls at ``precision``."""
        exact = self.exact()
        if exact is not None:
            return list(exact)
        return [eval_value(c, precision) for c in self.coords]

    def rescaled(self, lam) -> "ProjectivePoint":
        return ProjectivePoint([as_value(lam) * c for c in self.coords])

    def same_point(self, other: "ProjectivePoint", precision: int = DEFAULT_PRECISION) -> ZeroStatus:
        """ZERO-status semantics: ZERO means the representatives are proportional."""
        if len(other) != len(self):
            return ZeroStatus.NONZERO
        return proportional(self.coords, other.coords, precision)

    def to_json(self):
        return [value_to_json(c) for c in self.coords]

    @classmethod
    def from_json(cls, obj) -> "ProjectivePoint":
        return cls([value_from_json(c) for c in obj])


def proportional(u: Sequence, v: Sequence, precision: int = DEFAULT_PRECISION) -> ZeroStatus:
    """Zero status of all 2x2 minors of the pair ``(u, v)``.

    ZERO means proportional, NONZERO means certifiably independent.
    """
    n = len(u)
    if len(v) != n:
        raise DimensionMismatch("vectors of different lengths")

    def minors(p):
        a = as_scalars(u, p)
        b = as_scalars(v, p)
        with working_precision(p + GUARD_BITS):
            return [a[i] * b[j] - a[j] * b[i] for i in range(n) for j in range(i + 1, n)]

    first = minors(precision)
    statuses = [ball_zero_status(m, precision) for m in first]
    if ZeroStatus.NONZERO in statuses:
        return ZeroStatus.NONZERO
    if ZeroStatus.UNDECIDED in statuses:
        return ZeroStatus.UNDECIDED
    if all(is_exact_scalar(m) for m in first):
        return ZeroStatus.ZERO
    second = [ball_zero_status(m, 2 * precision) for m in minors(2 * precision)]
    if ZeroStatus.NONZERO in second:
        return ZeroStatus.NONZERO
    if ZeroStatus.UNDECIDED in second:
        return ZeroStatus.UNDECIDED
    return ZeroStatus.ZERO


def as_scalars(vec: Sequence, precision: int = DEFAULT_PRECISION) -> list:
    """Fractions if every entry is rational, otherwise balls."""
    conv = []
    for c in vec:
        if isinstance(c, AlgebraicValue):
            q = exact_rational_or_none(c)
            conv.append(q if q is not None else c)
        else:
            conv.append(c)
    if all(is_exact_scalar(x) for x in conv):
        return [Fraction(x) for x in conv]
    with working_precision(precision + GUARD_BITS):
        return [eval_value(x, precision) if isinstance(x, AlgebraicValue) else lift(x) for x in conv]


def _is_ball(x) -> bool:
    from flint import acb

    return isinstance(x, acb)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "op" and val == "**":
            val = "^"
        tokens.append((kind, val, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = len(names)
        self.index = {}
        for k, name in enumerate(names):
            self.index[name] = k
            self.index.setdefault(name.replace("_", ""), k)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val:
            raise PolySyntaxError(f"expected {val!r}", pos)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty expression", 0)
        out = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected token {v!r}", pos)
        return out

    def expr(self) -> MultiPoly:
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, _ = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> MultiPoly:
        out = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.degree() > 0:
                    raise PolySyntaxError("division by a non-constant", pos)
                c = rhs.terms.get((0,) * self.n, Fraction(0))
                if c == 0:
                    raise PolySyntaxError("division by zero", pos)
                out = out / c
        return out

    def unary(self) -> MultiPoly:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, v, pos = self.take()
            if kind != "num" or "." in v:
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(v)
        return base

    def atom(self) -> MultiPoly:
        kind, v, pos = self.take()
        if kind == "num":
            return MultiPoly.constant(self.n, Fraction(v))
        if kind == "name":
            k = self.index.get(v, self.index.get(v.replace("_", "")))
            if k is None:
                raise UnknownVariable(f"unknown variable {v!r} at position {pos}")
            return MultiPoly.variable(self.n, k)
        if v == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise PolySyntaxError(f"unexpected token {v!r}" if v else "unexpected end of input", pos)


def parse_poly(
    text: str,
    variables: Sequence[str] | int = 4,
    assert_homogeneous: bool = False,
) -> MultiPoly:
    """Parse and expand a polynomial expression.

    ``variables`` is the ordered list of names or a count (names ``y0, y1, ...``).
    Underscores in names are ignored, so ``y_0`` and ``y0`` agree.
    """
    names = default_names(variables) if isinstance(variables, int) else tuple(variables)
    poly = _Parser(text, names).parse()
    if assert_homogeneous and not poly.is_homogeneous():
        raise NonHomogeneous(f"{text!r} is not homogeneous")
    return poly


# ---------------------------------------------------------------------------
# evaluation


def _coeff_scalars(F: MultiPoly, exact: bool, precision: int):
    if exact:
        return dict(F.terms)
    out = {}
    for e, c in F.terms.items():
        out[e] = lift(c) if isinstance(c, Fraction) else eval_value(c, precision)
    return out


def eval_at(F: MultiPoly, xs: Sequence, precision: int = DEFAULT_PRECISION):
    """Evaluate at a vector of scalars (all Fractions, or balls)."""
    if len(xs) != F.nvars:
        raise DimensionMismatch(f"point has {len(xs)} coordinates, polynomial {F.nvars} variables")
    exact = all(is_exact_scalar(x) for x in xs) and F.is_rational()
    with working_precision(precision + GUARD_BITS):
        if not exact:
            xs = [lift(x) for x in xs]
        coeffs = _coeff_scalars(F, exact, precision)
        pw = [[x ** 0 if exact else lift(1)] for x in xs]
        total = Fraction(0) if exact else lift(0)
        for e, c in coeffs.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    table = pw[i]
                    while len(table) <= k:
                        table.append(table[-1] * xs[i])
                    term = term * table[k]
            total = total + term
        return total


def evaluate(F: MultiPoly, P, precision: int = DEFAULT_PRECISION):
    """``F`` at the given representative of ``P`` (no normalization)."""
    xs = P.scalars(precision) if isinstance(P, ProjectivePoint) else as_scalars(P, precision)
    return eval_at(F, xs, precision)


def evaluate_algebraic(F: MultiPoly, P: ProjectivePoint) -> AlgebraicValue:
    """``F(P)`` as an :class:`AlgebraicValue` recipe (no numerics)."""
    total = as_value(0)
    pw = [[as_value(1)] for _ in P.coords]
    for e, c in F.sorted_terms():
        term = as_value(c)
        for i, k in enumerate(e):
            if k:
                table = pw[i]
                while len(table) <= k:
                    table.append(table[-1] * P.coords[i])
                term = term * table[k]
        total = total + term
    return total


def second_partials(F: MultiPoly) -> list[list[MultiPoly]]:
    n = F.nvars
    first = F.gradient()
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            out[i][j] = out[j][i] = first[i].derive(j)
    return out


def hessian(F: MultiPoly, P, precision: int = DEFAULT_PRECISION):
    """Matrix of second partials at ``P``; symmetric entry by entry."""
    if not F.is_homogeneous():
        raise NonHomogeneous("hessian needs a homogeneous polynomial")
    xs = P.scalars(precision) if isinstance(P, ProjectivePoint) else as_scalars(P, precision)
    n = F.nvars
    parts = second_partials(F)
    H = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            H[i][j] = H[j][i] = eval_at(parts[i][j], xs, precision)
    return H


def restrict_to_line(F: MultiPoly, P, v, precision: int = DEFAULT_PRECISION) -> list:
    """Coefficients (ascending in ``t``) of ``F(P + t*v)``.

    The k-th derivative at ``t = 0`` is ``k!`` times the k-th coefficient.
    """
    pv = P.coords if isinstance(P, ProjectivePoint) else P
    if len(pv) != F.nvars or len(v) != F.nvars:
        raise DimensionMismatch("point/direction size does not match the polynomial")
    if proportional(pv, v, precision) is ZeroStatus.ZERO:
        raise DegenerateDirection("direction is proportional to the point")
    xs = as_scalars(list(pv) + list(v), precision)
    exact = all(is_exact_scalar(x) for x in xs) and F.is_rational()
    with working_precision(precision + GUARD_BITS):
        if not exact:
            xs = [lift(x) for x in xs]
        n = F.nvars
        base = [[xs[i], xs[n + i]] for i in range(n)]
        one = Fraction(1) if exact else lift(1)
        zero = Fraction(0) if exact else lift(0)
        pw = [[[one]] for _ in range(n)]

        def power(i, k):
            table = pw[i]
            while len(table) <= k:
                table.append(_upoly_mul(table[-1], base[i], zero))
            return table[k]

        coeffs = _coeff_scalars(F, exact, precision)
        d = F.degree()
        out = [zero] * (max(d, 0) + 1)
        for e, c in coeffs.items():
            term = [c]
            for i, k in enumerate(e):
                if k:
                    term = _upoly_mul(term, power(i, k), zero)
            for k, a in enumerate(term):
                out[k] = out[k] + a
        return out


def _upoly_mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def line_derivative(coeffs: Sequence, k: int):
    """k-th derivative at t = 0 of the univariate polynomial with these coefficients."""
    if k >= len(coeffs):
        return coeffs[0] * 0
    return coeffs[k] * math.factorial(k)


# ---------------------------------------------------------------------------
# monomials


def monomial_exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total ``degree`` in descending graded-lex order."""
    if degree < 0:
        raise InputError("degree must be nonnegative")
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], degree, nvars)
    return out


def monomial_basis(nvars: int, degree: int) -> list[MultiPoly]:
    return [MultiPoly.monomial(e) for e in monomial_exponents(nvars, degree)]


def basis_size(nvars: int, degree: int) -> int:
    return math.comb(degree + nvars - 1, nvars - 1)


def all_exponents_upto(nvars: int, degree: int):
    for d in range(degree + 1):
        yield from monomial_exponents(nvars, d)


__all__ = [
    "MultiPoly",
    "ProjectivePoint",
    "parse_poly",
    "evaluate",
    "evaluate_algebraic",
    "eval_at",
    "hessian",
    "second_partials",
    "restrict_to_line",
    "line_derivative",
    "monomial_basis",
    "monomial_exponents",
    "basis_size",
    "proportional",
    "as_scalars",
    "default_names",
    "grlex_key",
]
