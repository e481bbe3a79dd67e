"""Generating families, words in the generators, and the chain/ring tests."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..foundation import Arc, FormatError, IntervalSet
from ..plmap import PLMap, compose, inverse, power


class StructureError(ValueError):
    """A support is not a single open arc, or a family has the wrong shape."""


class PreconditionError(ValueError):
    pass


class NotFoundError(RuntimeError):
    """A bounded search ran out of budget."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


_TOKEN_RE = re.compile(r"^f(\d+)(?:\^([+-]?\d+))?$")


@dataclass(frozen=True)
class Word:
    """A word in the generators; ``syllables`` are (1-based index, nonzero exponent).

    Read as a product, so the rightmost syllable acts first.
    """

    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        syl = tuple((int(i), int(e)) for i, e in self.syllables)
        for i, e in syl:
            if i < 1 or e == 0:
                raise ValueError(f"bad syllable f{i}^{e}")
        object.__setattr__(self, "syllables", syl)

    @classmethod
    def parse(cls, text: str) -> "Word":
        syl = []
        for tok in text.split():
            m = _TOKEN_RE.match(tok)
            if m is None:
                raise FormatError(f"bad word token {tok!r}")
            e = int(m.group(2)) if m.group(2) is not None else 1
            if e == 0:
                raise FormatError(f"zero exponent in {tok!r}")
            syl.append((int(m.group(1)), e))
        return cls(tuple(syl))

    def __str__(self):
        return " ".join(f"f{i}" if e == 1 else f"f{i}^{e}" for i, e in self.syllables)

    def __len__(self):
        """Number of letters, i.e. the sum of |exponent|."""
        return sum(abs(e) for _, e in self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.syllables * k)

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.syllables)))

    def reduced(self) -> "Word":
        out: list[list[int]] = []
        for i, e in self.syllables:
            if out and out[-1][0] == i:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([i, e])
        return Word(tuple((i, e) for i, e in out))

    def exponent_sum(self, index: int) -> int:
        return sum(e for i, e in self.syllables if i == index)

    def exponent_sums(self, m: int) -> list[int]:
        return [self.exponent_sum(i) for i in range(1, m + 1)]

    def max_index(self) -> int:
        return max((i for i, _ in self.syllables), default=0)


@dataclass(eq=False)
class GeneratingFamily:
    """Ordered generators whose supports are single open arcs."""

    generators: list[PLMap]
    supports: list[IntervalSet] = field(init=False)
    _letters: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.generators = list(self.generators)
        if not self.generators:
            raise StructureError("empty family")
        self.supports = [f.support() for f in self.generators]
        for i, s in enumerate(self.supports, start=1):
            if not s.is_arc():
                raise StructureError(f"support of f{i} is {s!r}, not a single open arc")

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, GeneratingFamily) and self.generators == other.generators

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def arcs(self) -> list[Arc]:
        return [s.arcs[0] for s in self.supports]

    @property
    def context(self) -> str:
        """``line`` when every generator fixes the basepoint and no support passes it."""
        if all(f.kind == "interval" for f in self.generators) and not any(a.wraps for a in self.arcs):
            return "line"
        return "circle"

    def letter(self, index: int, exponent: int = 1) -> PLMap:
        key = (index, exponent)
        if key not in self._letters:
            f = self.generators[index - 1]
            self._letters[key] = f if exponent == 1 else (
                inverse(f) if exponent == -1 else power(f, exponent))
        return self._letters[key]

    def check_word(self, w: Word):
        if w.max_index() > self.m:
            raise ValueError(f"word {w} uses a generator beyond f{self.m}")

    def to_plmap(self, w: Word) -> PLMap:
        self.check_word(w)
        result = PLMap.identity()
        for i, e in w.syllables:
            result = compose(result, self.letter(i, e))
        return result

    def apply(self, w: Word, t) -> Fraction:
        """Image of a point of [0,1] under the word, letter by letter."""
        self.check_word(w)
        for i, e in reversed(w.syllables):
            step = self.letter(i, 1 if e > 0 else -1)
            for _ in range(abs(e)):
                t = step(t)
        return t

    def trace(self, w: Word, p, q) -> list[tuple[Fraction, Fraction]]:
        """Images of the endpoints after each syllable, starting with (p, q) itself."""
        self.check_word(w)
        out = [(p, q)]
        for i, e in reversed(w.syllables):
            step = self.letter(i, 1 if e > 0 else -1)
            for _ in range(abs(e)):
                p, q = step(p), step(q)
            out.append((p, q))
        return out

    def direction(self, index: int) -> int:
        """+1 if the generator moves points of its support forward, -1 otherwise."""
        arc = self.arcs[index - 1]
        mid = (arc.lower + arc.length / 2) % 1
        f = self.generators[index - 1]
        return 1 if (f.evaluate(mid) - mid) % 1 < Fraction(1, 2) else -1


def _single_arc(s) -> Arc:
    if isinstance(s, Arc):
        return s
    if isinstance(s, IntervalSet) and s.is_arc():
        return s.arcs[0]
    raise StructureError(f"{s!r} is not a single open arc")


def _pair_ok(a: Arc, b: Arc) -> bool:
    A, B = IntervalSet([a]), IntervalSet([b])
    return bool(A - B) and bool(B - A)


def is_chain(supports: Sequence) -> bool:
    """m-chain test: consecutive arcs each stick out of the other, non-neighbours are disjoint."""
    arcs = [_single_arc(s) for s in supports]
    m = len(arcs)
    if m < 2:
        raise StructureError("a chain needs at least two intervals")
    for i in range(m - 1):
        if not _pair_ok(arcs[i], arcs[i + 1]):
            return False
    for i in range(m):
        for j in range(i + 2, m):
            if not IntervalSet([arcs[i]]).disjoint(IntervalSet([arcs[j]])):
                return False
    return True


def is_ring(supports: Sequence) -> bool:
    """m-ring test with indices mod m: pairs at cyclic distance >= 2 are disjoint."""
    arcs = [_single_arc(s) for s in supports]
    m = len(arcs)
    if m < 3:
        raise StructureError("a ring needs at least three intervals")
    for i in range(m):
        if not _pair_ok(arcs[i], arcs[(i + 1) % m]):
            return False
    for i in range(m):
        for j in range(i + 1, m):
            if 2 <= j - i <= m - 2 and not IntervalSet([arcs[i]]).disjoint(IntervalSet([arcs[j]])):
                return False
    return True


def is_prechain(fam: GeneratingFamily) -> bool:
    if fam.context != "line" or fam.m < 2:
        return False
    union = IntervalSet.empty()
    for s in fam.supports:
        union = union | s
    return is_chain(fam.supports) and union == IntervalSet.interval(0, 1)
