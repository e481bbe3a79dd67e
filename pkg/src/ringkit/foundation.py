"""Exact rationals, circle points, cyclic order and open-set algebra on S^1.

The circle is [0,1] with 0 and 1 identified.  Every number in the package is
a :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class FormatError(ValueError):
    """Raised for malformed serialized input (rationals, trees, JSON documents)."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.

    Only the plain integer-ratio syntax is accepted; decimal or exponent
    notation is rejected so every value in a document is exact by construction.
    """
    if not isinstance(text, str):
        raise FormatError(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise FormatError(f"malformed rational {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise FormatError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x) -> str:
    return str(Fraction(x))


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def circle_point(x) -> Fraction:
    """Canonical representative in [0,1) of a point of S^1 (1 is stored as 0)."""
    return as_rational(x) % 1


def cyclic_between(a, b, c) -> bool:
    """True iff ``b`` lies strictly inside the positively oriented arc from ``a`` to ``c``."""
    a, b, c = circle_point(a), circle_point(b), circle_point(c)
    if a == b or b == c:
        return False
    db = (b - a) % 1
    dc = (c - a) % 1
    if dc == 0:
        # a == c: the arc from a back to itself is the punctured circle
        return True
    return db < dc


def cyclic_increasing(points: Sequence) -> bool:
    """True iff the points are strictly increasing along an open arc starting at the first one.

    This is the meaning of a chain of inequalities ``p0 < p1 < ... < pk`` read
    in the order induced on some open interval of S^1.
    """
    pts = [circle_point(p) for p in points]
    offsets = [(p - pts[0]) % 1 for p in pts[1:]]
    prev = Fraction(0)
    for d in offsets:
        if d <= prev:
            return False
        prev = d
    return True


def is_nadic(t, n: int) -> bool:
    """True iff ``t = a/n**b`` with integers a, b >= 0 and 0 <= t <= 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    t = as_rational(t)
    if t < 0 or t > 1:
        return False
    return _divides_power_of(t.denominator, n)


def is_nadic_number(t, n: int) -> bool:
    """Like :func:`is_nadic` without the range restriction (for lift values)."""
    return _divides_power_of(as_rational(t).denominator, n)


def _divides_power_of(d: int, n: int) -> bool:
    while d > 1:
        g = math.gcd(d, n)
        if g == 1:
            return False
        while d % g == 0:
            d //= g
    return True


def power_of(x, n: int) -> int | None:
    """Return k with ``x == n**k`` (k may be negative), or None."""
    x = as_rational(x)
    if x <= 0:
        return None
    num, den = x.numerator, x.denominator
    if den == 1:
        base, sign = num, 1
    elif num == 1:
        base, sign = den, -1
    else:
        return None
    k = 0
    while base % n == 0:
        base //= n
        k += 1
    return sign * k if base == 1 else None


@dataclass(frozen=True, order=True)
class Arc:
    """Open arc of S^1 starting at ``lower`` and running ``length`` in the positive direction.

    ``length == 1`` is the circle punctured at ``lower``; the arc then starts
    and ends at the same point, which is excluded.
    """

    lower: Fraction
    length: Fraction

    def __post_init__(self):
        lower, length = as_rational(self.lower), as_rational(self.length)
        if not 0 <= lower < 1:
            raise ValueError(f"arc lower endpoint {lower} outside [0,1)")
        if not 0 < length <= 1:
            raise ValueError(f"degenerate or oversized arc length {length}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "length", length)

    @classmethod
    def between(cls, a, b) -> "Arc":
        """The open arc (a, b).  With 0 <= a < b <= 1 this is the usual interval."""
        a, b = as_rational(a), as_rational(b)
        if 0 <= a < b <= 1:
            return cls(a, b - a)
        a %= 1
        length = (b - a) % 1
        if length == 0:
            raise ValueError(f"degenerate arc ({a}, {b})")
        return cls(a, length)

    @property
    def upper(self) -> Fraction:
        return (self.lower + self.length) % 1

    @property
    def upper_lift(self) -> Fraction:
        return self.lower + self.length

    @property
    def wraps(self) -> bool:
        """Whether the arc passes through the basepoint."""
        return self.lower + self.length > 1

    def contains(self, x) -> bool:
        d = (as_rational(x) - self.lower) % 1
        return 0 < d < self.length

    def as_pair(self) -> tuple[Fraction, Fraction]:
        """(lower, upper) with upper written as 1 for arcs ending at the basepoint from below."""
        up = self.lower + self.length
        return (self.lower, up if up <= 1 else up - 1)

    def __repr__(self):
        a, b = self.as_pair()
        return f"({a}, {b})"


class IntervalSet:
    """A finite union of open arcs of S^1 kept in a unique canonical form.

    Canonical form: maximal arcs sorted by lower endpoint; two arcs may share
    an endpoint only when that point is excluded.  The whole circle is the
    ``full`` flag.  Canonical forms are compared for equality.
    """

    __slots__ = ("arcs", "full")

    def __init__(self, arcs: Iterable[Arc] = (), full: bool = False):
        arcs = tuple(arcs)
        if full:
            self.arcs: tuple[Arc, ...] = ()
            self.full = True
            return
        if not arcs:
            self.arcs, self.full = (), False
            return
        canon = _sweep([_RawSet(arcs, False)], lambda m: m[0])
        self.arcs, self.full = canon.arcs, canon.full

    @classmethod
    def _canonical(cls, arcs: tuple[Arc, ...], full: bool) -> "IntervalSet":
        obj = cls.__new__(cls)
        obj.arcs, obj.full = arcs, full
        return obj

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls._canonical((), False)

    @classmethod
    def circle(cls) -> "IntervalSet":
        return cls._canonical((), True)

    @classmethod
    def interval(cls, a, b) -> "IntervalSet":
        return cls([Arc.between(a, b)])

    @classmethod
    def of(cls, *pairs) -> "IntervalSet":
        """Union of the open arcs given as (a, b) pairs."""
        return cls([Arc.between(a, b) for a, b in pairs])

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.full == other.full and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.full, self.arcs))

    def __repr__(self):
        if self.full:
            return "IntervalSet(S1)"
        if not self.arcs:
            return "IntervalSet(empty)"
        return "IntervalSet(" + " u ".join(repr(a) for a in self.arcs) + ")"

    def __bool__(self):
        return self.full or bool(self.arcs)

    def is_empty(self) -> bool:
        return not self

    def is_arc(self) -> bool:
        """Whether the set is a single open arc (the full circle is not an arc)."""
        return not self.full and len(self.arcs) == 1

    def contains(self, x) -> bool:
        return self.full or any(a.contains(x) for a in self.arcs)

    __contains__ = contains

    def endpoints(self) -> list[Fraction]:
        pts = []
        for a in self.arcs:
            pts.extend([a.lower, a.upper])
        return pts

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return _sweep([self, other], lambda m: m[0] or m[1])

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        return _sweep([self, other], lambda m: m[0] and m[1])

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        """Interior of the set difference, so the result is again open."""
        return _sweep([self, other], lambda m: m[0] and not m[1])

    def complement_interior(self) -> "IntervalSet":
        return _sweep([self], lambda m: not m[0])

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def disjoint(self, other: "IntervalSet") -> bool:
        return not self.intersection(other)

    def issubset(self, other: "IntervalSet") -> bool:
        """Exact point-set inclusion (boundary points included in the comparison)."""
        for m in _elements([self, other]):
            if m[0] and not m[1]:
                return False
        return True

    __le__ = issubset

    def image(self, f: Callable) -> "IntervalSet":
        """Image under an orientation-preserving homeomorphism given as a point map on S^1."""
        if self.full:
            return IntervalSet.circle()
        arcs = []
        for a in self.arcs:
            lo = circle_point(f(a.lower))
            hi = circle_point(f(a.upper))
            length = (hi - lo) % 1
            arcs.append(Arc(lo, length if length else Fraction(1)))
        return IntervalSet(arcs)

    def closure_hull(self) -> tuple[Fraction, Fraction]:
        """Smallest closed interval [p, q] of [0,1] containing the set (non-wrapping sets only)."""
        if self.full or not self.arcs:
            raise ValueError("hull of an empty or full set")
        if any(a.wraps for a in self.arcs) or (0 in self):
            raise ValueError("set passes through the basepoint")
        return self.arcs[0].lower, self.arcs[-1].as_pair()[1]


class _RawSet:
    """Arc list not yet canonical; only used as sweep input."""

    def __init__(self, arcs, full):
        self.arcs, self.full = arcs, full

    def contains(self, x):
        return self.full or any(a.contains(x) for a in self.arcs)


def _cuts(sets) -> list[Fraction]:
    cuts = {Fraction(0)}
    for s in sets:
        for a in s.arcs:
            cuts.add(a.lower)
            cuts.add(a.upper)
    return sorted(cuts)


def _elements(sets):
    """Membership vectors for each cut point and each open gap after it, in cyclic order."""
    cuts = _cuts(sets)
    bounds = cuts + [Fraction(1)]
    for i, c in enumerate(cuts):
        yield tuple(s.contains(c) for s in sets)
        mid = (bounds[i] + bounds[i + 1]) / 2
        yield tuple(s.contains(mid) for s in sets)


def _sweep(sets, pred) -> IntervalSet:
    cuts = _cuts(sets)
    bounds = cuts + [Fraction(1)]
    k = len(cuts)
    flags = [pred(m) for m in _elements(sets)]
    cut_raw, gap_in = flags[0::2], flags[1::2]
    # interior: a cut point survives only if both neighbouring gaps survive
    cut_in = [cut_raw[i] and gap_in[i - 1] and gap_in[i] for i in range(k)]
    if all(cut_in) and all(gap_in):
        return IntervalSet.circle()
    if not any(gap_in):
        return IntervalSet.empty()
    seq = []
    for i in range(k):
        seq.append(("cut", i, cut_in[i]))
        seq.append(("gap", i, gap_in[i]))
    # start from an excluded element so no run crosses the starting point
    start = next(j for j, e in enumerate(seq) if not e[2])
    arcs = []
    run_lo = run_hi = None
    for kind, i, member in seq[start:] + seq[:start]:
        if member:
            if kind == "gap":
                if run_lo is None:
                    run_lo = cuts[i]
                run_hi = bounds[i + 1]
        elif run_lo is not None:
            arcs.append(_arc_from(run_lo, run_hi))
            run_lo = None
    if run_lo is not None:
        arcs.append(_arc_from(run_lo, run_hi))
    arcs.sort()
    return IntervalSet._canonical(tuple(arcs), False)


def _arc_from(lo: Fraction, hi: Fraction) -> Arc:
    length = (hi - lo) % 1
    return Arc(lo % 1, length if length else Fraction(1))
