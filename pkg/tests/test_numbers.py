import random
from fractions import Fraction

import pytest
from flint import acb, arb

from adehodge.errors import DivisionByProvableZero, InputError, MultipleRoot, NonIsolating
from adehodge.numbers import (
    GUARD_BITS,
    ZeroStatus,
    as_value,
    ball_radius,
    eval_value,
    is_zero_heuristic,
    pow2,
    rational,
    refine_root,
    root_of,
    value_from_json,
    value_to_json,
    working_precision,
)


def bisect_sqrt(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational bracket of sqrt(q) of width below 2**-bits."""
    lo, hi = Fraction(0), max(Fraction(1), q)
    while hi - lo >= Fraction(1, 2**bits):
        mid = (lo + hi) / 2
        if mid * mid <= q:
            lo = mid
        else:
            hi = mid
    return lo, hi


def test_refine_sqrt2_against_bisection():
    b = refine_root([-2, 0, 1], 1.41, 128)
    lo, hi = bisect_sqrt(Fraction(2), 140)
    with working_precision(200):
        assert ball_radius(b) <= pow2(-128)
        assert b.imag.contains(0)
        mid = Fraction(int(b.real.mid().man_exp()[0]) * Fraction(2) ** int(b.real.mid().man_exp()[1]))
        assert abs(mid - lo) < Fraction(1, 2**120)


def test_refine_real_cube_root_of_minus_third():
    b = refine_root([Fraction(1, 3), 0, 0, 1], -0.693, 64)
    with working_precision(64 + GUARD_BITS):
        assert (b**3 + acb(arb(1) / 3)).contains(0)
        assert float(b.real) == pytest.approx(-(1 / 3) ** (1 / 3))


def test_refine_linear_is_exact():
    b = refine_root([-5, 1], 5, 100)
    assert ball_radius(b) == 0
    assert b.real == 5


def test_refine_nested_balls():
    lo = refine_root([-2, 0, 1], 1.41, 64)
    hi = refine_root([-2, 0, 1], 1.41, 256)
    with working_precision(300):
        assert lo.contains(hi)


def test_refine_errors():
    with pytest.raises(MultipleRoot):
        refine_root([1, -2, 1], 1.0, 64)
    with pytest.raises(NonIsolating):
        root_of([-2, 0, 1], 0.0, Fraction(2))
    with pytest.raises(InputError):
        refine_root([-2, 0, 2], 1.0, 64)


def test_eval_rational_exact():
    b = eval_value(rational(Fraction(3, 4)), 64)
    assert ball_radius(b) == 0
    assert b.real == arb(0.75)


def test_eval_cube_root_of_unity_square():
    eps = root_of([1, 1, 1], complex(-0.5, 0.87))
    b = eval_value(eps**2, 128)
    assert float(b.imag) == pytest.approx(-(3**0.5) / 2)
    with working_precision(160):
        assert (b + eval_value(eps, 128) + 1).contains(0)


def test_eval_fourth_root_of_eight():
    r = root_of([-8, 0, 0, 0, 1], 1.68)
    b = eval_value(r, 128)
    with working_precision(160):
        assert (b**4 - 8).contains(0)


def test_zero_heuristic_examples():
    eps = root_of([1, 1, 1], complex(-0.5, 0.87))
    assert is_zero_heuristic(rational(0)) is ZeroStatus.ZERO
    assert is_zero_heuristic(eps * eps + eps + 1) is ZeroStatus.ZERO
    assert is_zero_heuristic(rational(Fraction(1, 2**1000)), 64) is ZeroStatus.NONZERO
    assert is_zero_heuristic(eps - 1) is ZeroStatus.NONZERO


def test_division_by_zero():
    eps = root_of([1, 1, 1], complex(-0.5, 0.87))
    with pytest.raises(DivisionByProvableZero):
        eval_value(as_value(1) / (eps * eps + eps + 1), 64)


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        q = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        return as_value(q), q
    a, qa = _random_tree(rng, depth - 1)
    b, qb = _random_tree(rng, depth - 1)
    op = rng.choice("+-*/")
    if op == "/" and qb == 0:
        op = "*"
    ops = {
        "+": lambda x, y: x + y,
        "-": lambda x, y: x - y,
        "*": lambda x, y: x * y,
        "/": lambda x, y: x / y,
    }
    return ops[op](a, b), ops[op](qa, qb)


def test_containment_and_monotone_refinement():
    rng = random.Random(7)
    for _ in range(40):
        v, q = _random_tree(rng, 4)
        prev = None
        for p in (32, 64, 128, 256):
            b = eval_value(v, p)
            with working_precision(p + 64):
                assert b.real.contains(arb(q.numerator) / q.denominator)
                r = ball_radius(b)
                if prev is not None:
                    assert r <= prev
                prev = r
            assert is_zero_heuristic(v - q, p) is ZeroStatus.ZERO


def test_zero_heuristic_one_sided_on_algebraic_identities():
    r2 = root_of([-2, 0, 1], 1.41)
    r3 = root_of([-3, 0, 1], 1.73)
    for v in (r2 * r2 - 2, (r2 + r3) * (r2 - r3) + 1, r2**4 - 4, r3**3 - 3 * r3):
        assert is_zero_heuristic(v) is not ZeroStatus.NONZERO


def test_json_round_trip():
    eps = root_of([Fraction(1, 3), 0, 0, 1], complex(0.35, 0.6), Fraction(1, 10))
    v = (eps**2 + Fraction(1, 7)) / (eps - 2)
    back = value_from_json(value_to_json(v))
    assert value_to_json(back) == value_to_json(v)
    with working_precision(200):
        assert (eval_value(back, 128) - eval_value(v, 128)).contains(0)
    assert value_to_json(rational(Fraction(-3, 4))) == {"rational": "-3/4"}
