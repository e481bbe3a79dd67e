"""Certificates: the exact data behind each verdict, JSON round-trip, and replay.

Every certificate is rebuilt from the family plus the certificate's own
choices (exponent N, word, conjugator, intervals); replay recomputes the whole
record from those and compares it with the stored one field by field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..foundation import Arc, FormatError, IntervalSet, format_rational, parse_rational
from ..plmap import PLMap, compose, conjugate, inverse, power
from .family import GeneratingFamily, StructureError, Word, is_chain, is_ring

FORMAT = "ringkit/1"


class OverlapPatternError(ValueError):
    """Supports do not overlap in the a < a' < b < b' pattern the criterion needs."""


def _r(x) -> str:
    return format_rational(x)


def _pair(p) -> list[str]:
    return [_r(p[0]), _r(p[1])]


def _map_json(f: PLMap | None):
    return None if f is None else f.to_json()


# -- F-criterion ---------------------------------------------------------


def _arc_of(f: PLMap) -> Arc:
    s = f.support()
    if not s.is_arc():
        raise StructureError(f"support {s!r} is not a single open arc")
    return s.arcs[0]


def _linear_pattern(A: Arc, B: Arc) -> bool:
    if A.wraps or B.wraps:
        return False
    a, b = A.as_pair()
    a2, b2 = B.as_pair()
    return a < a2 < b < b2


def _cyclic_pattern(A: Arc, B: Arc) -> bool:
    d = (B.lower - A.lower) % 1
    return 0 < d < A.length < d + B.length <= 1


def auto_rotation(A: Arc, B: Arc) -> PLMap:
    """Rotation sending the midpoint of the gap left by A and B to the basepoint."""
    gap_lo = (A.lower + (B.lower - A.lower) % 1 + B.length) % 1
    gap_len = 1 - ((B.lower - A.lower) % 1 + B.length)
    mid = (gap_lo + gap_len / 2) % 1
    return PLMap.rotation(-mid)


@dataclass
class FPairCert:
    f: PLMap
    g: PLMap
    conjugator: PLMap | None
    a: Fraction
    b: Fraction
    a_prime: Fraction
    b_prime: Fraction
    value: Fraction

    @property
    def certified(self) -> bool:
        return self.value >= self.b

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "inconclusive"

    def data(self) -> dict:
        return {"conjugator": _map_json(self.conjugator), "a": _r(self.a), "b": _r(self.b),
                "a_prime": _r(self.a_prime), "b_prime": _r(self.b_prime),
                "value": _r(self.value), "verdict": self.verdict}

    def to_json(self) -> dict:
        return envelope("fpair", [self.f, self.g], self.data())


def fpair_check(f: PLMap, g: PLMap, conjugator: PLMap | None = None) -> FPairCert:
    """Evaluate g(f(a')) against b, in a frame where both supports sit on the line.

    With no conjugator, non-wrapping supports are used as they are; otherwise a
    rotation moving the common gap to the basepoint is chosen.
    """
    A, B = _arc_of(f), _arc_of(g)
    if conjugator is None and not _linear_pattern(A, B):
        if not _cyclic_pattern(A, B):
            raise OverlapPatternError(f"supports {A!r}, {B!r} are not in the pattern a < a' < b < b'")
        conjugator = auto_rotation(A, B)
    F, G = f, g
    if conjugator is not None:
        F, G = conjugate(conjugator, f), conjugate(conjugator, g)
        A, B = _arc_of(F), _arc_of(G)
        if not _linear_pattern(A, B):
            raise OverlapPatternError(
                f"conjugated supports {A!r}, {B!r} are not in the pattern a < a' < b < b'")
    a, b = A.as_pair()
    a2, b2 = B.as_pair()
    return FPairCert(f, g, conjugator, a, b, a2, b2, G(F(a2)))


@dataclass
class PairFailure:
    index: int
    reason: str


@dataclass
class RingCert:
    family: GeneratingFamily
    conjugator: PLMap | None
    is_ring: bool
    pairs: list  # FPairCert | PairFailure, pair i is (f_i, f_{i+1 mod m})

    @property
    def failing_index(self) -> int | None:
        for i, p in enumerate(self.pairs, start=1):
            if isinstance(p, PairFailure) or not p.certified:
                return i
        return None

    @property
    def valid(self) -> bool:
        return self.is_ring and self.failing_index is None

    def data(self) -> dict:
        return {"m": self.family.m, "conjugator": _map_json(self.conjugator),
                "supports": [_pair(a.as_pair()) for a in self.family.arcs],
                "is_ring": self.is_ring, "pairs": _pairs_json(self.pairs),
                "valid": self.valid, "failing_index": self.failing_index}

    def to_json(self) -> dict:
        return envelope("ring", self.family.generators, self.data())


def _pairs_json(pairs) -> list:
    out = []
    for i, p in enumerate(pairs, start=1):
        if isinstance(p, PairFailure):
            out.append({"index": i, "error": p.reason})
        else:
            out.append({"index": i, **p.data()})
    return out


def _pair_or_failure(i: int, f: PLMap, g: PLMap, conjugator):
    try:
        return fpair_check(f, g, conjugator)
    except (OverlapPatternError, StructureError) as exc:
        return PairFailure(i, str(exc))


def ring_check(fam: GeneratingFamily, conjugator: PLMap | None = None) -> RingCert:
    """is_ring plus the criterion on every cyclic pair.

    ``conjugator`` is used for pairs that cannot be read on the line directly;
    when it does not straighten a pair, the automatic rotation is used instead.
    """
    m = fam.m
    if m < 3:
        raise StructureError("a ring family needs m >= 3")
    ring = is_ring(fam.supports)
    pairs = []
    for i in range(m):
        f, g = fam.generators[i], fam.generators[(i + 1) % m]
        A, B = fam.arcs[i], fam.arcs[(i + 1) % m]
        c = None
        if conjugator is not None and not _linear_pattern(A, B) and _straightens(conjugator, A, B):
            c = conjugator
        pairs.append(_pair_or_failure(i + 1, f, g, c))
    return RingCert(fam, conjugator, ring, pairs)


def _straightens(c: PLMap, A: Arc, B: Arc) -> bool:
    ia = IntervalSet([A]).image(c.evaluate)
    ib = IntervalSet([B]).image(c.evaluate)
    return ia.is_arc() and ib.is_arc() and _linear_pattern(ia.arcs[0], ib.arcs[0])


# -- chains and powers -----------------------------------------------------


@dataclass
class ChainCert:
    family: GeneratingFamily
    N: int
    is_chain: bool
    pairs: list

    @property
    def valid(self) -> bool:
        return self.is_chain and all(isinstance(p, FPairCert) and p.certified for p in self.pairs)

    def data(self) -> dict:
        return {"N": self.N, "is_chain": self.is_chain, "pairs": _pairs_json(self.pairs),
                "valid": self.valid}

    def to_json(self) -> dict:
        return envelope("chain", self.family.generators, self.data())


def chain_check(fam: GeneratingFamily, N: int) -> ChainCert:
    powered = [power(f, N) for f in fam.generators]
    chain = is_chain(fam.supports)
    pairs = [_pair_or_failure(i + 1, powered[i], powered[i + 1], None)
             for i in range(fam.m - 1)]
    return ChainCert(fam, N, chain, pairs)


# -- ring expansion --------------------------------------------------------


def expanded_generators(gens: list[PLMap], N: int) -> list[PLMap]:
    """The (m+1)-family built from an m-ring family with exponent N."""
    m = len(gens)
    if m < 4:
        raise StructureError("ring expansion needs m >= 4")
    f = {i + 1: g for i, g in enumerate(gens)}
    new = dict(f)
    new[1] = conjugate(power(f[m], N), f[1])
    new[m - 2] = conjugate(power(f[m - 1], -N), f[m - 2])
    new[m] = conjugate(power(compose(f[m - 2], f[m]), N), power(f[m - 1], N))
    new[m - 1] = conjugate(inverse(new[m]), f[m - 1])
    new[m + 1] = f[m]
    return [new[i] for i in range(1, m + 2)]


def cyclic_chain(points: list[Fraction], relations: list[str]) -> bool:
    """Points read counterclockwise from points[0] within one turn, each step '<' or '<='."""
    offsets = [(p - points[0]) % 1 for p in points]
    for d0, d1, rel in zip(offsets, offsets[1:], relations):
        if d1 < d0 or (rel == "<" and d1 == d0):
            return False
    return True


def expansion_inequalities(arcs: list[Arc]) -> list[tuple[str, list[Fraction], bool]]:
    """The two cyclic boundary orderings required of the new family (1-based arcs[i-1]).

    Links between supports that only need to be disjoint are '<=': rings may have
    touching non-neighbours (the T_n ring does at the basepoint).  The strict
    reading of every link is reported alongside.
    """
    m = len(arcs) - 1

    def lo(i):
        return arcs[i - 1].lower

    def hi(i):
        return arcs[i - 1].upper

    chains = [
        ([lo(m + 1), hi(m), lo(1), hi(m + 1)], ["<", "<=", "<"],
         [f"lower(f'{m + 1})", f"upper(f'{m})", "lower(f'1)", f"upper(f'{m + 1})"]),
        ([hi(m + 1), lo(2), hi(1)], ["<=", "<"], [f"upper(f'{m + 1})", "lower(f'2)", "upper(f'1)"]),
    ]
    out = []
    for pts, rels, names in chains:
        label = names[0] + "".join(f" {r} {nm}" for r, nm in zip(rels, names[1:]))
        out.append((label, pts, cyclic_chain(pts, rels), cyclic_chain(pts, ["<"] * len(rels))))
    return out


@dataclass
class ExpansionCert:
    family: GeneratingFamily
    N: int
    new_family: GeneratingFamily | None
    inequalities: list
    ring: RingCert | None
    error: str | None = None

    @property
    def valid(self) -> bool:
        return (self.error is None and all(h for _, _, h, _ in self.inequalities)
                and self.ring is not None and self.ring.valid)

    def data(self) -> dict:
        return {
            "N": self.N,
            "new_family": None if self.new_family is None else [g.to_json() for g in self.new_family.generators],
            "inequalities": [{"label": lab, "points": [_r(p) for p in pts], "holds": h,
                              "strict_holds": strict}
                             for lab, pts, h, strict in self.inequalities],
            "ring": None if self.ring is None else self.ring.data(),
            "error": self.error,
            "valid": self.valid,
        }

    def to_json(self) -> dict:
        return envelope("expansion", self.family.generators, self.data())


def expansion_check(fam: GeneratingFamily, N: int) -> ExpansionCert:
    gens = expanded_generators(fam.generators, N)
    try:
        new = GeneratingFamily(gens)
    except StructureError as exc:
        return ExpansionCert(fam, N, None, [], None, str(exc))
    ineq = expansion_inequalities(new.arcs)
    ring = ring_check(new)
    return ExpansionCert(fam, N, new, ineq, ring)


# -- shrinking and displacement --------------------------------------------


@dataclass
class ShrinkCert:
    family: GeneratingFamily
    word: Word
    interval: tuple[Fraction, Fraction]
    target: tuple[Fraction, Fraction]
    point: Fraction
    images: list[tuple[Fraction, Fraction]]

    @property
    def image(self) -> tuple[Fraction, Fraction]:
        return self.images[-1]

    @property
    def exponent_sums(self) -> list[int]:
        return self.word.exponent_sums(self.family.m)

    @property
    def contained(self) -> bool:
        p, q = self.image
        return self.target[0] < p and q < self.target[1]

    @property
    def valid(self) -> bool:
        lo, hi = self.target
        return self.contained and lo < self.point < hi and not any(self.exponent_sums)

    def data(self) -> dict:
        lo, hi = self.target
        p, q = self.image
        return {"word": str(self.word), "letters": len(self.word), "interval": _pair(self.interval),
                "target": _pair(self.target), "point": _r(self.point),
                "point_offsets": [_r(self.point - lo), _r(hi - self.point)],
                "images": [_pair(x) for x in self.images], "margins": [_r(p - lo), _r(hi - q)],
                "exponent_sums": self.exponent_sums, "contained": self.contained, "valid": self.valid}

    def to_json(self) -> dict:
        return envelope("shrink", self.family.generators, self.data())


def shrink_check(fam, word, interval, target, point) -> ShrinkCert:
    p, q = interval
    return ShrinkCert(fam, word, (p, q), tuple(target), point, fam.trace(word, p, q))


@dataclass
class DisplaceCert:
    family: GeneratingFamily
    word: Word
    interval: tuple[Fraction, Fraction]
    image: tuple[Fraction, Fraction]

    @property
    def exponent_sums(self) -> list[int]:
        return self.word.exponent_sums(self.family.m)

    @property
    def disjoint(self) -> bool:
        p, q = self.interval
        u, v = self.image
        return v < p or u > q

    @property
    def valid(self) -> bool:
        return self.disjoint and not any(self.exponent_sums)

    def data(self) -> dict:
        return {"word": str(self.word), "letters": len(self.word), "interval": _pair(self.interval),
                "image": _pair(self.image), "exponent_sums": self.exponent_sums,
                "disjoint": self.disjoint, "valid": self.valid}

    def to_json(self) -> dict:
        return envelope("displace", self.family.generators, self.data())


def displace_check(fam, word, interval) -> DisplaceCert:
    p, q = interval
    return DisplaceCert(fam, word, (p, q), (fam.apply(word, p), fam.apply(word, q)))


# -- JSON envelope and replay ------------------------------------------------


def envelope(variant: str, generators, data: dict) -> dict:
    return {"format": FORMAT, "variant": variant,
            "family": [g.to_json() for g in generators], "data": data}


@dataclass
class ReplayResult:
    variant: str
    reproduced: bool
    verdict: bool
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.reproduced and self.verdict

    def to_json(self) -> dict:
        return {"variant": self.variant, "reproduced": self.reproduced, "verdict": self.verdict,
                "ok": self.ok, "mismatches": self.mismatches}


def _diff(path: str, stored: Any, fresh: Any, out: list[str]):
    if isinstance(stored, dict) and isinstance(fresh, dict):
        for k in sorted(set(stored) | set(fresh)):
            _diff(f"{path}.{k}", stored.get(k, "<missing>"), fresh.get(k, "<missing>"), out)
    elif isinstance(stored, list) and isinstance(fresh, list):
        if len(stored) != len(fresh):
            out.append(f"{path}: length {len(stored)} != {len(fresh)}")
        for i, (s, f) in enumerate(zip(stored, fresh)):
            _diff(f"{path}[{i}]", s, f, out)
    elif stored != fresh:
        out.append(f"{path}: stored {stored!r}, recomputed {fresh!r}")


def _req(data: dict, key: str):
    if key not in data:
        raise FormatError(f"certificate data lacks {key!r}")
    return data[key]


def _read_pair(x) -> tuple[Fraction, Fraction]:
    if not isinstance(x, list) or len(x) != 2:
        raise FormatError(f"expected a pair of rationals, got {x!r}")
    return parse_rational(x[0]), parse_rational(x[1])


def _read_map(x) -> PLMap | None:
    return None if x is None else PLMap.from_json(x)


def _read_int(x) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise FormatError(f"expected an integer, got {x!r}")
    return x


def recompute(doc: dict, family: GeneratingFamily | None = None) -> tuple[dict, dict]:
    """Rebuild the certificate's data from its family and choices: (stored, fresh)."""
    if not isinstance(doc, dict):
        raise FormatError("certificate must be a JSON object")
    if doc.get("format") != FORMAT:
        raise FormatError(f"unsupported certificate format {doc.get('format')!r}")
    variant = _req(doc, "variant")
    data = _req(doc, "data")
    gens_doc = _req(doc, "family")
    if not isinstance(data, dict) or not isinstance(gens_doc, list):
        raise FormatError("certificate 'data' must be an object and 'family' a list")
    gens = [PLMap.from_json(g) for g in gens_doc]
    if family is not None and list(family.generators) != gens:
        raise StructureError("certificate family differs from the supplied family")

    if variant == "fpair":
        if len(gens) != 2:
            raise FormatError("fpair certificate needs exactly two maps")
        fresh = fpair_check(gens[0], gens[1], _read_map(data.get("conjugator"))).data()
    elif variant == "ring":
        fresh = ring_check(GeneratingFamily(gens), _read_map(data.get("conjugator"))).data()
    elif variant == "chain":
        fresh = chain_check(GeneratingFamily(gens), _read_int(_req(data, "N"))).data()
    elif variant == "expansion":
        fresh = expansion_check(GeneratingFamily(gens), _read_int(_req(data, "N"))).data()
    elif variant == "shrink":
        fresh = shrink_check(GeneratingFamily(gens), Word.parse(_req(data, "word")),
                             _read_pair(_req(data, "interval")), _read_pair(_req(data, "target")),
                             parse_rational(_req(data, "point"))).data()
    elif variant == "displace":
        fresh = displace_check(GeneratingFamily(gens), Word.parse(_req(data, "word")),
                               _read_pair(_req(data, "interval"))).data()
    else:
        raise FormatError(f"unknown certificate variant {variant!r}")
    return data, fresh


_VERDICT_KEY = {"fpair": ("verdict", "certified"), "ring": ("valid", True), "chain": ("valid", True),
                "expansion": ("valid", True), "shrink": ("valid", True), "displace": ("valid", True)}


def replay(doc: dict, family: GeneratingFamily | None = None) -> ReplayResult:
    stored, fresh = recompute(doc, family)
    mismatches: list[str] = []
    _diff("data", stored, fresh, mismatches)
    key, good = _VERDICT_KEY[doc["variant"]]
    return ReplayResult(doc["variant"], not mismatches, fresh.get(key) == good, mismatches)
