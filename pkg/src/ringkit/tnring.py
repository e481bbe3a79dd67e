"""T_n as an (n+1)-ring group: the generators f_{n,1..n+1} and a full exact report.

Every displayed value is checked two ways: the exact composite is compared with
the displayed closed form (``matches``), and with the bound the F-criterion
actually needs (``bound_holds``).  Only the bounds, supports, ring structure and
certificates decide validity; a closed-form mismatch is listed under
``discrepancies`` so it can be diffed against hand computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chainring import GeneratingFamily, PreconditionError, RingCert, verify_ring_group
from .chainring.family import is_ring
from .foundation import Arc, IntervalSet, format_rational
from .plmap import PLMap, commutator, compose, conjugate, germ_at, inverse, member_of
from .treepair import generator, to_plmap


def _gen(name: str, n: int, i: int | None = None) -> PLMap:
    return to_plmap(generator(name, n, i))


def build_family(n: int) -> GeneratingFamily:
    """f_{n,i} = x_{i+1}^-1 x_i (i < n), f_{n,n} = x_n, f_{n,n+1} = g2 (y g1) g2^-1."""
    if n < 3:
        raise PreconditionError("the ring family needs n >= 3")
    x = {i: _gen("x", n, i) for i in range(1, n + 1)}
    fs = [compose(inverse(x[i + 1]), x[i]) for i in range(1, n)]
    fs.append(x[n])
    fs.append(conjugate(_gen("g2", n), compose(_gen("y", n), _gen("g1", n))))
    return GeneratingFamily(fs)


def expected_supports(n: int) -> list[IntervalSet]:
    q = Fraction(1, n)
    out = [IntervalSet.interval((i - 1) * q, (i + 1) * q) for i in range(1, n - 1)]
    out.append(IntervalSet.interval(1 - 2 * q, 1 - q + q * q))
    out.append(IntervalSet.interval(1 - q, 1))
    # displayed as (0,1/n) u (1-1/n^2,1) in [0,1]; f_{n,n+1} moves the basepoint,
    # so on the circle this is one arc through 0
    out.append(IntervalSet([Arc.between(1 - q * q, q)]))
    return out


@dataclass
class ValueCheck:
    label: str
    description: str
    point: Fraction
    value: Fraction
    displayed: Fraction | None
    bound: Fraction

    @property
    def matches(self) -> bool | None:
        return None if self.displayed is None else self.value == self.displayed

    @property
    def bound_holds(self) -> bool:
        return self.value >= self.bound

    def to_json(self) -> dict:
        r = format_rational
        return {"label": self.label, "description": self.description, "point": r(self.point),
                "value": r(self.value), "displayed": None if self.displayed is None else r(self.displayed),
                "matches": self.matches, "bound": r(self.bound), "bound_holds": self.bound_holds}


@dataclass
class SupportCheck:
    label: str
    computed: IntervalSet
    displayed: IntervalSet

    @property
    def matches(self) -> bool:
        return self.computed == self.displayed

    def to_json(self) -> dict:
        return {"label": self.label, "computed": _arcs_json(self.computed),
                "displayed": _arcs_json(self.displayed), "matches": self.matches}


def _arcs_json(s: IntervalSet) -> list:
    return [[format_rational(a), format_rational(b)] for a, b in (arc.as_pair() for arc in s.arcs)]


@dataclass
class TnRingReport:
    n: int
    family: GeneratingFamily
    supports: list[SupportCheck]
    is_ring: bool
    ring_cert: RingCert
    inequality_checks: list[ValueCheck]
    conjugated_supports: list[SupportCheck]
    membership: dict[str, bool] = field(default_factory=dict)

    @property
    def support_matches(self) -> list[bool]:
        return [c.matches for c in self.supports]

    def failures(self) -> list[str]:
        out = [c.label for c in self.supports if not c.matches]
        if not self.is_ring:
            out.append("(b) is_ring")
        out += [c.label for c in self.inequality_checks if not c.bound_holds]
        out += [c.label for c in self.conjugated_supports if not c.matches]
        if not self.ring_cert.valid:
            out.append(f"(h) pair {self.ring_cert.failing_index}")
        out += [f"membership {k}" for k, ok in self.membership.items() if not ok]
        return out

    @property
    def valid(self) -> bool:
        return not self.failures()

    @property
    def first_failure(self) -> str | None:
        f = self.failures()
        return f[0] if f else None

    @property
    def discrepancies(self) -> list[str]:
        return [c.label for c in self.inequality_checks if c.matches is False]

    def check(self, label: str) -> ValueCheck:
        for c in self.inequality_checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "format": "ringkit/1",
            "n": self.n,
            "valid": self.valid,
            "first_failure": self.first_failure,
            "family": [g.to_json() for g in self.family.generators],
            "supports": [c.to_json() for c in self.supports],
            "is_ring": self.is_ring,
            "inequality_checks": [c.to_json() for c in self.inequality_checks],
            "conjugated_supports": [c.to_json() for c in self.conjugated_supports],
            "discrepancies": self.discrepancies,
            "membership": self.membership,
            "ring_certificate": self.ring_cert.to_json(),
        }


def verify(n: int) -> TnRingReport:
    fam = build_family(n)
    f = {i: g for i, g in enumerate(fam.generators, start=1)}
    q = Fraction(1, n)

    supports = [SupportCheck(f"(a) supp f{i}", s, e)
                for i, (s, e) in enumerate(zip(fam.supports, expected_supports(n)), start=1)]

    checks: list[ValueCheck] = []
    for i in range(1, n - 2):
        # the criterion evaluates at a' = lower end of supp f_{i+1} = i/n
        checks.append(ValueCheck(
            f"(c) i={i}", f"f{i + 1} f{i} (i/n) against (i+2)/n - 2/n^2, bound (i+1)/n",
            i * q, f[i + 1](f[i](i * q)), (i + 2) * q - 2 * q * q, (i + 1) * q))
        checks.append(ValueCheck(
            f"(c') i={i}", f"f{i + 1} f{i} ((i+1)/n) at the printed argument, bound (i+1)/n",
            (i + 1) * q, f[i + 1](f[i]((i + 1) * q)), (i + 2) * q - 2 * q * q, (i + 1) * q))
    t = 1 - 2 * q
    checks.append(ValueCheck(
        "(d)", f"f{n - 1} f{n - 2} (1-2/n) against 1-1/n+1/n^2-1/n^3, bound 1-1/n",
        t, f[n - 1](f[n - 2](t)), 1 - q + q ** 2 - q ** 3, 1 - q))
    t = 1 - q
    v = f[n](f[n - 1](t))
    checks.append(ValueCheck("(e1)", f"f{n} f{n - 1} (1-1/n), bound 1-1/n^2", t, v, None, 1 - q * q))
    checks.append(ValueCheck("(e2)", f"f{n} f{n - 1} (1-1/n), bound 1-1/n+1/n^2", t, v, None,
                             1 - q + q * q))

    y_inv = inverse(_gen("y", n))
    cf = {i: conjugate(y_inv, f[i]) for i in (n, n + 1, 1)}
    conj_supports = [
        SupportCheck(f"(f) supp y^-1 f{n} y", cf[n].support(), IntervalSet.interval(0, q)),
        SupportCheck(f"(f) supp y^-1 f{n + 1} y", cf[n + 1].support(), IntervalSet.interval(q - q * q, 2 * q)),
        SupportCheck("(f) supp y^-1 f1 y", cf[1].support(), IntervalSet.interval(q, 3 * q)),
    ]
    t = q - q * q
    checks.append(ValueCheck(
        "(g1)", f"conjugated f{n + 1} f{n} (1/n-1/n^2) against y^-1(1/n-2/n^2), bound y^-1(0)",
        t, cf[n + 1](cf[n](t)), y_inv.evaluate(q - 2 * q * q), y_inv.evaluate(0)))
    t = q
    checks.append(ValueCheck(
        "(g2)", f"conjugated f1 f{n + 1} (1/n) against y^-1(2/n-1/n^2-1/n^3), bound y^-1(1/n)",
        t, cf[1](cf[n + 1](t)), y_inv.evaluate(2 * q - q * q - q ** 3), y_inv.evaluate(q)))

    ring_cert = verify_ring_group(fam, y_inv)
    membership = {f"f{i} in T{n}": member_of(g, "T", n) for i, g in f.items()}
    membership.update({f"f{i} in F{n}": member_of(f[i], "F", n) for i in range(1, n + 1)})
    return TnRingReport(n, fam, supports, is_ring(fam.supports), ring_cert, checks, conj_supports,
                        membership)


@dataclass
class CommutatorCheck:
    index: int
    union: IntervalSet
    support: IntervalSet
    inside: bool
    identity_near_ends: bool

    @property
    def ok(self) -> bool:
        return self.inside and self.identity_near_ends


def fn_abelianization_sanity(n: int) -> tuple[bool, list[CommutatorCheck]]:
    """Each c_i = [f_i, f_{i+1}] is supported inside supp f_i u supp f_{i+1} and trivial near its ends."""
    fam = build_family(n)
    m = fam.m
    out = []
    for i in range(m):
        c = commutator(fam.generators[i], fam.generators[(i + 1) % m])
        U = fam.supports[i] | fam.supports[(i + 1) % m]
        ends = U.endpoints()
        near = all(germ_at(c, e, "left").is_identity and germ_at(c, e, "right").is_identity for e in ends)
        out.append(CommutatorCheck(i + 1, U, c.support(), c.support() <= U, near))
    return all(ch.ok for ch in out), out
