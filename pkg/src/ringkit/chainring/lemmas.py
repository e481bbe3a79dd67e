"""Constructive lemmas on prechain families: shrinking, displacement, pushers, p1.

All pushing happens on the line (0,1).  A "push" is one letter f_j^{+-1}
chosen so that a tracked point moves in the wanted direction; on a chain
every point of (0,1) lies in some support, so repeated pushes reach any
target.  Words built here always have zero exponent sums: the net motion
is done by a word w, and each generator's surplus is cancelled by a
conjugate h f_i^{-s} h^{-1} whose support has been moved off w(I).
"""

from __future__ import annotations

from fractions import Fraction

from ..foundation import IntervalSet, as_rational
from .certs import DisplaceCert, ShrinkCert, displace_check, shrink_check
from .family import GeneratingFamily, NotFoundError, PreconditionError, Word, is_prechain

DEFAULT_BUDGET = 64


class BudgetExceeded(NotFoundError):
    pass


def _require_prechain(fam: GeneratingFamily):
    if not is_prechain(fam):
        raise PreconditionError("family is not a prechain (chain of arcs covering (0,1))")


def _push_letter(fam: GeneratingFamily, j: int, forward: bool) -> tuple[int, int]:
    d = fam.direction(j)
    return (j, d if forward else -d)


def _step(fam, x: Fraction, forward: bool) -> tuple[int, int] | None:
    """Letter moving x furthest: the support through x reaching furthest in that direction."""
    cands = [j for j, a in enumerate(fam.arcs, start=1) if a.contains(x)]
    if not cands:
        return None
    if forward:
        j = max(cands, key=lambda j: fam.arcs[j - 1].as_pair()[1])
    else:
        j = min(cands, key=lambda j: fam.arcs[j - 1].lower)
    return _push_letter(fam, j, forward)


def _push_point(fam, x: Fraction, goal: Fraction, limit: int) -> list[tuple[int, int]] | None:
    """Letters (in order of application) moving x to or past goal."""
    letters: list[tuple[int, int]] = []
    forward = goal > x
    while (x > goal) if not forward else (x < goal):
        lt = _step(fam, x, forward)
        if lt is None or len(letters) >= limit:
            return None
        letters.append(lt)
        x = fam.letter(*lt)(x)
    return letters


def _word_from_letters(letters: list[tuple[int, int]]) -> Word:
    """Letters listed in order of application -> Word (rightmost acts first)."""
    return Word(tuple(reversed(letters))).reduced()


def _motion(fam, p, q, k: int, toward_upper: bool, lo, hi, limit: int):
    """Letters taking [p,q] into supp(f_k), then toward its chosen end until inside (lo, hi)."""
    A = fam.arcs[k - 1]
    a, b = A.as_pair()
    letters: list[tuple[int, int]] = []

    def inside():
        return lo < p and q < hi

    while not inside() and not (a < p and q < b):
        if len(letters) > limit:
            return None, (p, q)
        lt = _step(fam, q, False) if q >= b else _step(fam, p, True)
        if lt is None:
            return None, (p, q)
        letters.append(lt)
        f = fam.letter(*lt)
        p, q = f(p), f(q)
    lt = _push_letter(fam, k, toward_upper)
    f = fam.letter(*lt)
    while not inside():
        if len(letters) > limit:
            return None, (p, q)
        letters.append(lt)
        p, q = f(p), f(q)
    return letters, (p, q)


def _corrector(fam, i: int, s: int, p, q, limit: int) -> Word | None:
    """h f_i^{-s} h^{-1} with h moving supp(f_i) off [p, q]."""
    a, b = fam.arcs[i - 1].as_pair()
    base = Word(((i, -s),))
    if b <= p or a >= q:
        return base
    options = []
    if b < 1:
        h = _push_point(fam, b, p, limit)
        if h is not None:
            options.append(h)
    if a > 0:
        h = _push_point(fam, a, q, limit)
        if h is not None:
            options.append(h)
    if not options:
        return None
    h = _word_from_letters(min(options, key=len))
    return (h * base * h.inverse()).reduced()


def _balance(fam, w: Word, p, q, limit: int) -> Word | None:
    sums = w.exponent_sums(fam.m)
    out = w
    for i, s in enumerate(sums, start=1):
        if s:
            c = _corrector(fam, i, s, p, q, limit)
            if c is None:
                return None
            out = c * out
    return out


def _boundary_candidates(fam: GeneratingFamily, t: Fraction) -> list[tuple[int, bool]]:
    """(generator index, push toward upper end?) for each support having t as an end."""
    out = []
    for k, A in enumerate(fam.arcs, start=1):
        a, b = A.as_pair()
        if b == t:
            out.append((k, True))
        if a == t:
            out.append((k, False))
    return out


def shrink_into(fam: GeneratingFamily, I, J, t=None, budget: int | None = None) -> ShrinkCert:
    """Word g with zero exponent sums and g(I) inside the open interval J.

    ``t`` is the support boundary point J surrounds; when omitted, the unique
    support boundary point inside J is used.
    """
    _require_prechain(fam)
    budget = DEFAULT_BUDGET if budget is None else budget
    p, q = (as_rational(x) for x in I)
    lo, hi = (as_rational(x) for x in J)
    if not (0 < p <= q < 1) or not (0 <= lo < hi <= 1):
        raise PreconditionError("I must be a closed interval in (0,1) and J an open interval in [0,1]")
    ends = sorted({e for A in fam.arcs for e in A.as_pair() if 0 < e < 1})
    if t is None:
        inside = [e for e in ends if lo < e < hi]
        if len(inside) != 1:
            raise PreconditionError("J must contain exactly one support boundary point, or pass t")
        t = inside[0]
    t = as_rational(t)
    if t not in ends:
        raise PreconditionError(f"{t} is not a boundary point of any support in (0,1)")
    if not lo < t < hi:
        raise PreconditionError(f"J does not contain {t}")
    if lo < p and q < hi:
        return shrink_check(fam, Word(), (p, q), (lo, hi), t)

    best = None
    for k, up in _boundary_candidates(fam, t):
        letters, img = _motion(fam, p, q, k, up, lo, hi, budget)
        if letters is None:
            best = best or img
            continue
        w = _word_from_letters(letters)
        g = _balance(fam, w, img[0], img[1], budget)
        if g is None:
            best = best or img
            continue
        if len(g) <= budget:
            cert = shrink_check(fam, g, (p, q), (lo, hi), t)
            if cert.valid:
                return cert
        best = img
    raise BudgetExceeded(f"no word within {budget} letters; best image {best}", best=best)


def _gap_target(t: Fraction, p: Fraction, q: Fraction):
    """Open interval around t, away from [p, q] and inside (0, 1)."""
    dist = p - t if t < p else t - q
    r = min(dist / 2, t, 1 - t) if dist > 0 else Fraction(0)
    if r <= 0:
        return None
    return (t - r, t + r)


def displace(fam: GeneratingFamily, I, budget: int | None = None) -> DisplaceCert:
    """Word g with zero exponent sums and g(I) disjoint from I (shortest over boundary targets)."""
    _require_prechain(fam)
    p, q = (as_rational(x) for x in I)
    ends = sorted({e for A in fam.arcs for e in A.as_pair() if 0 < e < 1})
    found = []
    for t in ends:
        J = _gap_target(t, p, q)
        if J is None:
            continue
        try:
            s = shrink_into(fam, (p, q), J, t, budget)
        except NotFoundError:
            continue
        found.append(s.word)
    if not found:
        raise BudgetExceeded(f"no displacement of [{p}, {q}] within budget")
    w = min(found, key=lambda w: (len(w), str(w)))
    return displace_check(fam, w, (p, q))


def _hull(K) -> tuple[Fraction, Fraction]:
    if isinstance(K, IntervalSet):
        return K.closure_hull()
    p, q = K
    return as_rational(p), as_rational(q)


def disjoint_pushers(fam: GeneratingFamily, K, k: int, budget: int | None = None) -> list[Word]:
    """k words whose images of K are pairwise disjoint: powers c^0..c^{k-1} of a displacement c.

    If c moves the hull of K entirely to one side, monotonicity forces the
    translates c^j(K) to march off in that direction without meeting.
    """
    _require_prechain(fam)
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return [Word()]
    p, q = _hull(K)
    c = displace(fam, (p, q), budget).word
    words = [c ** j for j in range(k)]
    images = [pushed_image(fam, w, K) for w in words]
    for i in range(k):
        for j in range(i + 1, k):
            if not images[i].disjoint(images[j]):
                raise BudgetExceeded("pushed images overlap")
    return words


def pushed_image(fam: GeneratingFamily, w: Word, K) -> IntervalSet:
    if not isinstance(K, IntervalSet):
        K = IntervalSet.interval(*_hull(K))
    return K.image(lambda x: fam.apply(w, x))


def p1(fam: GeneratingFamily, w: Word) -> int:
    fam.check_word(w)
    return w.exponent_sum(1)


def p1_consistency(fam: GeneratingFamily, w1: Word, w2: Word) -> bool:
    """False only if the words give equal maps but different p1 values."""
    if fam.to_plmap(w1) != fam.to_plmap(w2):
        return True
    return p1(fam, w1) == p1(fam, w2)
