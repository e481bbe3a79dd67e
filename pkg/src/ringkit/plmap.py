"""Piecewise-affine orientation-preserving homeomorphisms of [0,1] and S^1.

A map is stored as the nodes of a lift ``gamma`` on the fundamental domain
[0,1]: breakpoints ``0 = t_0 < ... < t_k = 1`` and strictly increasing values
with ``gamma(1) = gamma(0) + 1`` and ``gamma(0)`` in [0,1).  The circle map is
``gamma mod 1``.  Maps fixing the basepoint (``gamma(0) == 0``) are the
homeomorphisms of the interval and report ``kind == "interval"``.

Composition order is fixed throughout the package: ``compose(f, g)`` is
``f o g``, i.e. ``g`` is applied first.  ``f * g`` means the same.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .foundation import (
    Arc,
    FormatError,
    IntervalSet,
    as_rational,
    circle_point,
    format_rational,
    is_nadic,
    is_nadic_number,
    parse_rational,
    power_of,
)

INTERVAL = "interval"
CIRCLE = "circle"


class NotHomeomorphismError(ValueError):
    """Node data do not describe an orientation-preserving PL homeomorphism."""


@dataclass(frozen=True)
class Germ:
    point: Fraction
    side: str
    slope: Fraction
    fixed: bool

    @property
    def is_identity(self) -> bool:
        return self.fixed and self.slope == 1


class PLMap:
    """Exact PL homeomorphism in canonical form (no redundant breakpoints)."""

    __slots__ = ("ts", "vs", "_hash")

    def __init__(self, ts: Sequence, vs: Sequence):
        ts = [as_rational(t) for t in ts]
        vs = [as_rational(v) for v in vs]
        if len(ts) != len(vs) or len(ts) < 2:
            raise NotHomeomorphismError("need matching breakpoint/value lists of length >= 2")
        if ts[0] != 0 or ts[-1] != 1:
            raise NotHomeomorphismError("breakpoints must run from 0 to 1")
        for a, b in zip(ts, ts[1:]):
            if not a < b:
                raise NotHomeomorphismError("breakpoints must be strictly increasing")
        for a, b in zip(vs, vs[1:]):
            if not a < b:
                raise NotHomeomorphismError("values must be strictly increasing")
        if vs[-1] - vs[0] != 1:
            raise NotHomeomorphismError("lift must satisfy gamma(1) = gamma(0) + 1")
        shift = math.floor(vs[0])
        if shift:
            vs = [v - shift for v in vs]
        ts, vs = _drop_collinear(ts, vs)
        self.ts: tuple[Fraction, ...] = tuple(ts)
        self.vs: tuple[Fraction, ...] = tuple(vs)
        self._hash = hash((self.ts, self.vs))

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls) -> "PLMap":
        return cls([0, 1], [0, 1])

    @classmethod
    def rotation(cls, offset) -> "PLMap":
        """Rigid rotation t -> t + offset (mod 1)."""
        offset = circle_point(offset)
        return cls([0, 1], [offset, offset + 1])

    @classmethod
    def from_nodes(cls, nodes: Iterable[tuple], kind: str | None = None) -> "PLMap":
        nodes = list(nodes)
        ts = [t for t, _ in nodes]
        vs = [v for _, v in nodes]
        f = cls(ts, vs)
        if kind == INTERVAL and (as_rational(vs[0]) != 0 or as_rational(vs[-1]) != 1):
            raise NotHomeomorphismError("interval maps must fix 0 and 1")
        if kind == CIRCLE and not 0 <= as_rational(vs[0]) < 1:
            raise NotHomeomorphismError("circle lift must start in [0,1)")
        return f

    # -- basic protocol -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.ts == other.ts and self.vs == other.vs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        nodes = ", ".join(f"{t}->{v}" for t, v in zip(self.ts, self.vs))
        return f"PLMap[{self.kind}]({nodes})"

    @property
    def kind(self) -> str:
        return INTERVAL if self.vs[0] == 0 else CIRCLE

    @property
    def nodes(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.ts, self.vs))

    @property
    def slopes(self) -> list[Fraction]:
        return [(v1 - v0) / (t1 - t0) for t0, t1, v0, v1 in
                zip(self.ts, self.ts[1:], self.vs, self.vs[1:])]

    def is_identity(self) -> bool:
        return self.ts == (0, 1) and self.vs == (0, 1)

    # -- evaluation ---------------------------------------------------

    def lift(self, x) -> Fraction:
        """Value of the degree-one lift R -> R at any real x."""
        x = as_rational(x)
        k = math.floor(x)
        r = x - k
        i = min(bisect_right(self.ts, r) - 1, len(self.ts) - 2)
        t0, t1, v0, v1 = self.ts[i], self.ts[i + 1], self.vs[i], self.vs[i + 1]
        return v0 + (r - t0) * (v1 - v0) / (t1 - t0) + k

    def lift_inverse(self, y) -> Fraction:
        y = as_rational(y)
        k = math.floor(y - self.vs[0])
        r = y - k
        i = min(bisect_right(self.vs, r) - 1, len(self.vs) - 2)
        t0, t1, v0, v1 = self.ts[i], self.ts[i + 1], self.vs[i], self.vs[i + 1]
        return t0 + (r - v0) * (t1 - t0) / (v1 - v0) + k

    def __call__(self, t) -> Fraction:
        """Image of t.  Interval maps act on [0,1] (so 1 -> 1); circle maps return a value in [0,1)."""
        t = as_rational(t)
        if self.kind == INTERVAL and 0 <= t <= 1:
            return self.lift(t)
        return self.lift(t) % 1

    def evaluate(self, t) -> Fraction:
        """Image of the circle point t, as a circle point."""
        return self.lift(circle_point(t)) % 1

    def preimage(self, y) -> Fraction:
        y = as_rational(y)
        if self.kind == INTERVAL and 0 <= y <= 1:
            return self.lift_inverse(y)
        return self.lift_inverse(y) % 1

    # -- algebra ------------------------------------------------------

    def __mul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def __pow__(self, n: int) -> "PLMap":
        return power(self, n)

    def inverse(self) -> "PLMap":
        return inverse(self)

    # -- dynamics -----------------------------------------------------

    def fixed_components(self) -> list[tuple[Fraction, Fraction]]:
        """Closed fixed intervals [p, q] (p == q for isolated points) inside [0,1)."""
        comps = []
        for t0, t1, v0, v1 in zip(self.ts, self.ts[1:], self.vs, self.vs[1:]):
            d0, d1 = v0 - t0, v1 - t1
            lo, hi = min(d0, d1), max(d0, d1)
            for k in range(math.ceil(lo), math.floor(hi) + 1):
                if d0 == d1:
                    comps.append((t0, t1))
                else:
                    comps.append((t0 + (k - d0) * (t1 - t0) / (d1 - d0),) * 2)
        out = []
        for p, q in comps:
            if p == 1:
                p = q = Fraction(0)
            out.append((p, q))
        out.sort()
        merged: list[list[Fraction]] = []
        for p, q in out:
            if merged and p <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], q)
            else:
                merged.append([p, q])
        return [(p, q) for p, q in merged]

    def support(self) -> IntervalSet:
        return support(self)

    def germ_at(self, t, side: str) -> Germ:
        return germ_at(self, t, side)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "nodes": [{"t": format_rational(t), "v": format_rational(v)}
                      for t, v in zip(self.ts, self.vs)],
        }

    @classmethod
    def from_json(cls, doc) -> "PLMap":
        if not isinstance(doc, dict) or "nodes" not in doc:
            raise FormatError("PLMap document needs a 'nodes' list")
        kind = doc.get("kind")
        if kind not in (INTERVAL, CIRCLE):
            raise FormatError(f"unknown PLMap kind {kind!r}")
        try:
            nodes = [(parse_rational(nd["t"]), parse_rational(nd["v"])) for nd in doc["nodes"]]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed PLMap node: {exc}") from exc
        return cls.from_nodes(nodes, kind)


def _drop_collinear(ts, vs):
    keep_t, keep_v = [ts[0]], [vs[0]]
    for i in range(1, len(ts) - 1):
        s_in = (vs[i] - keep_v[-1]) / (ts[i] - keep_t[-1])
        s_out = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        if s_in != s_out:
            keep_t.append(ts[i])
            keep_v.append(vs[i])
    keep_t.append(ts[-1])
    keep_v.append(vs[-1])
    return keep_t, keep_v


def compose(f: PLMap, g: PLMap) -> PLMap:
    """``f o g``: apply g, then f."""
    g0, g1 = g.vs[0], g.vs[-1]
    xs = set(g.ts)
    for k in range(math.floor(g0) - 1, math.ceil(g1) + 1):
        for t in f.ts:
            y = t + k
            if g0 <= y <= g1:
                xs.add(g.lift_inverse(y))
    xs = sorted(x for x in xs if 0 <= x <= 1)
    return PLMap(xs, [f.lift(g.lift(x)) for x in xs])


def inverse(f: PLMap) -> PLMap:
    xs = {Fraction(0), Fraction(1)}
    for v in f.vs:
        xs.add(v % 1)
    xs = sorted(xs)
    return PLMap(xs, [f.lift_inverse(x) for x in xs])


def power(f: PLMap, n: int) -> PLMap:
    if n < 0:
        return power(inverse(f), -n)
    result = PLMap.identity()
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def conjugate(g: PLMap, f: PLMap) -> PLMap:
    """The conjugate ``g f g^-1``, whose support is ``g(supp f)``."""
    return compose(compose(g, f), inverse(g))


def commutator(f: PLMap, g: PLMap) -> PLMap:
    """``[f, g] = f g f^-1 g^-1``."""
    return compose(compose(f, g), compose(inverse(f), inverse(g)))


def support(f: PLMap) -> IntervalSet:
    """The open set of moved points, solved exactly segment by segment."""
    comps = f.fixed_components()
    if not comps:
        return IntervalSet.circle()
    arcs = []
    for j, (p, q) in enumerate(comps):
        nxt = comps[(j + 1) % len(comps)][0]
        if j == len(comps) - 1:
            nxt += 1
        if nxt > q:
            arcs.append(Arc(q % 1, nxt - q))
    return IntervalSet(arcs)


def germ_at(f: PLMap, t, side: str) -> Germ:
    """One-sided affine behaviour of f at the circle point t."""
    t = circle_point(t)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    slopes = f.slopes
    if side == "right":
        i = bisect_right(f.ts, t) - 1
    else:
        x = t if t != 0 else Fraction(1)
        i = bisect_right(f.ts, x) - 1
        if f.ts[i] == x:
            i -= 1
    return Germ(t, side, slopes[i], f.evaluate(t) == t)


def is_identity_near(f: PLMap, t) -> bool:
    """True iff f is the identity on a one-sided neighbourhood on both sides of t."""
    return germ_at(f, t, "left").is_identity and germ_at(f, t, "right").is_identity


def member_of(f: PLMap, group: str, n: int) -> bool:
    """Membership in the Higman-Thompson group F_n or T_n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    group = group.upper().rstrip("N_")
    if group not in ("F", "T"):
        raise ValueError(f"unknown group {group!r}")
    if group == "F" and f.kind != INTERVAL:
        return False
    if not all(is_nadic(t, n) for t in f.ts):
        return False
    if not all(is_nadic_number(v, n) for v in f.vs):
        return False
    return all(power_of(s, n) is not None for s in f.slopes)
