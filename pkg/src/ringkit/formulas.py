"""Case-by-case formulas for the named generators, as an independent oracle.

Each formula is a list of branches ``(lo, hi, expr)``.  :func:`build` checks
that the branches tile [0,1] continuously (mod 1 for circle maps) and returns
the PLMap; :func:`evaluate` evaluates the branch list directly at a point.

``x_printed`` keeps the third branch of x_{n,i} (i < n) exactly as it is
usually printed; that branch does not meet its neighbours, so :func:`build`
rejects it.  ``x`` is the continuous version used everywhere else.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .foundation import as_rational
from .plmap import PLMap

Branch = tuple[Fraction, Fraction, Callable[[Fraction], Fraction]]


class FormulaInconsistency(ValueError):
    pass


def _q(n):
    return Fraction(1, n)


def x_printed(n: int, i: int) -> list[Branch]:
    q = _q(n)
    if not 1 <= i <= n - 1:
        raise ValueError("printed x_{n,i} covers 1 <= i <= n-1")
    return [
        (Fraction(0), (i - 1) * q, lambda t: t),
        ((i - 1) * q, i * q - i * q * q, lambda t: n * (t - (i - 1) * q) + (i - 1) * q),
        (i * q - i * q * q, i * q, lambda t: t - (i * q + i * q * q) + (n - 1) * q),
        (i * q, Fraction(1), lambda t: q * (t - 1) + 1),
    ]


def x(n: int, i: int) -> list[Branch]:
    q = _q(n)
    if i == n:
        return x_nn(n)
    branches = x_printed(n, i)
    lo, hi, _ = branches[2]
    branches[2] = (lo, hi, lambda t: t - (i * q - i * q * q) + (n - 1) * q)
    return branches


def x_nn(n: int) -> list[Branch]:
    q = _q(n)
    b1 = 1 - q
    b2 = 1 - q + q ** 2 - q ** 3
    b3 = 1 - q + q ** 2
    return [
        (Fraction(0), b1, lambda t: t),
        (b1, b2, lambda t: n * (t - (1 - q)) + 1 - q),
        (b2, b3, lambda t: t + q - 2 * q ** 2 + q ** 3),
        (b3, Fraction(1), lambda t: q * (t - 1) + 1),
    ]


def y(n: int) -> list[Branch]:
    q = _q(n)
    return [
        (Fraction(0), q, lambda t: t + 1 - q),
        (q, Fraction(1), lambda t: t - q),
    ]


def g1(n: int) -> list[Branch]:
    q = _q(n)
    return [
        (Fraction(0), 1 - q, lambda t: q ** 2 * t),
        (1 - q, 1 - q + q ** 2, lambda t: q * (t - (1 - q)) + q ** 2 - q ** 3),
        (1 - q + q ** 2, 1 - q ** 2, lambda t: t - (1 - q)),
        (1 - q ** 2, 1 - q ** 2 + q ** 3, lambda t: n * (t - (1 - q ** 2)) + q - q ** 2),
        (1 - q ** 2 + q ** 3, Fraction(1), lambda t: n ** 2 * (t - 1) + 1),
    ]


def g2(n: int) -> list[Branch]:
    q = _q(n)
    return [
        (Fraction(0), 1 - q, lambda t: q * t),
        (1 - q, 1 - q + q ** 2, lambda t: t - 1 + 2 * q - q ** 2),
        (1 - q + q ** 2, 1 - 2 * q ** 2, lambda t: n * (t - (1 - q + q ** 2)) + q),
        (1 - 2 * q ** 2, 1 - 2 * q ** 2 + q ** 3, lambda t: n ** 2 * (t - (1 - 2 * q ** 2)) + 1 - 2 * q),
        (1 - 2 * q ** 2 + q ** 3, 1 - q ** 2, lambda t: n * (t - (1 - 2 * q ** 2 + q ** 3)) + 1 - q),
        (1 - q ** 2, Fraction(1), lambda t: t),
    ]


FORMULAS = {"x": x, "x_printed": x_printed, "y": lambda n, i=None: y(n),
            "g1": lambda n, i=None: g1(n), "g2": lambda n, i=None: g2(n)}


def formula(name: str, n: int, i: int | None = None) -> list[Branch]:
    if name in ("x", "x_printed"):
        return FORMULAS[name](n, i)
    return FORMULAS[name](n)


def build(branches: list[Branch], circle: bool = False) -> PLMap:
    """PLMap of a branch list; raises FormulaInconsistency on gaps, overlaps or jumps.

    For circle maps a jump by exactly -1 between branches is the value passing
    the basepoint and is unwrapped into the lift.
    """
    ts: list[Fraction] = []
    vs: list[Fraction] = []
    offset = 0
    prev_hi = Fraction(0)
    for k, (lo, hi, expr) in enumerate(branches):
        if lo > hi:
            raise FormulaInconsistency(f"branch {k + 1} has reversed bounds [{lo}, {hi}]")
        if lo != prev_hi:
            raise FormulaInconsistency(f"branch {k + 1} starts at {lo}, previous ended at {prev_hi}")
        prev_hi = hi
        if lo == hi:
            continue
        a, b = expr(lo) + offset, expr(hi) + offset
        if vs and a != vs[-1]:
            jump = a - vs[-1]
            if circle and jump == -1:
                offset += 1
                a, b = a + 1, b + 1
            else:
                raise FormulaInconsistency(
                    f"discontinuity at t={lo}: left value {vs[-1]}, right value {a}")
        if not ts:
            ts.append(lo)
            vs.append(a)
        ts.append(hi)
        vs.append(b)
    if prev_hi != 1:
        raise FormulaInconsistency("branches do not reach 1")
    return PLMap(ts, vs)


def evaluate(branches: list[Branch], t, circle: bool = False) -> Fraction:
    """Value of the first branch whose closed range contains t (mod 1 for circle maps)."""
    t = as_rational(t)
    for lo, hi, expr in branches:
        if lo <= t <= hi:
            v = expr(t)
            return v % 1 if circle else v
    raise ValueError(f"{t} outside the branch ranges")


def discrepancies(branches: list[Branch], f: PLMap, points, circle: bool = False):
    """Points where the branch list and the map disagree, with both values."""
    out = []
    for t in points:
        ref = evaluate(branches, t, circle)
        got = f.evaluate(t) if circle else f(t)
        if circle:
            ref %= 1
        if ref != got:
            out.append((t, ref, got))
    return out
