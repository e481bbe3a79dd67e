"""n-ary tree pairs for the Higman-Thompson groups F_n and T_n.

A tree is stored by its leaf addresses in left-to-right order; an address is
the tuple of child indices on the path from the root.  A tree pair maps the
k-th domain leaf affinely onto range leaf ``(k + shift) mod L``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .foundation import FormatError, as_rational
from .plmap import PLMap, member_of

Address = tuple[int, ...]


class NotInGroupError(ValueError):
    """The map is not an element of T_n (or F_n) for the requested n."""


@dataclass(frozen=True)
class Tree:
    n: int
    leaves: tuple[Address, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("arity must be at least 2")

    @classmethod
    def leaf(cls, n: int) -> "Tree":
        return cls(n, ((),))

    @classmethod
    def caret(cls, n: int) -> "Tree":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def with_expanded(cls, n: int, *paths: Address) -> "Tree":
        """Tree whose internal nodes are the given paths (plus their ancestors)."""
        internal = set()
        for p in paths:
            for j in range(len(p) + 1):
                internal.add(tuple(p[:j]))
        return cls.from_internal(n, internal)

    @classmethod
    def from_internal(cls, n: int, internal: set) -> "Tree":
        if not internal:
            return cls.leaf(n)
        leaves = []

        def walk(node):
            if node in internal:
                for c in range(n):
                    walk(node + (c,))
            else:
                leaves.append(node)

        walk(())
        return cls(n, tuple(leaves))

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    @property
    def carets(self) -> int:
        return (len(self.leaves) - 1) // (self.n - 1)

    def internal(self) -> set[Address]:
        out = set()
        for leaf in self.leaves:
            for j in range(len(leaf)):
                out.add(leaf[:j])
        return out

    def leaf_partition(self) -> list[tuple[Fraction, Fraction]]:
        return [address_interval(a, self.n) for a in self.leaves]

    def __str__(self):
        return format_tree(self)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Tree":
        return parse_tree(text, n)


def address_interval(addr: Address, n: int) -> tuple[Fraction, Fraction]:
    lo = Fraction(0)
    width = Fraction(1)
    for c in addr:
        width /= n
        lo += c * width
    return lo, lo + width


def interval_address(lo: Fraction, hi: Fraction, n: int) -> Address | None:
    """Address of the standard n-adic interval [lo, hi], or None if it is not standard."""
    width = hi - lo
    depth = 0
    w = Fraction(1)
    while w > width:
        w /= n
        depth += 1
    if w != width:
        return None
    idx = lo / w
    if idx.denominator != 1:
        return None
    idx = int(idx)
    digits = []
    for _ in range(depth):
        digits.append(idx % n)
        idx //= n
    if idx:
        return None
    return tuple(reversed(digits))


def leaf_partition(tree: Tree) -> list[tuple[Fraction, Fraction]]:
    return tree.leaf_partition()


# -- serialization: "L" for a leaf, "(c1 ... cn)" for a node ------------------

def format_tree(tree: Tree) -> str:
    internal = tree.internal()

    def fmt(node):
        if node not in internal:
            return "L"
        return "(" + "".join(fmt(node + (c,)) for c in range(tree.n)) + ")"

    return fmt(())


def parse_tree(text: str, n: int | None = None) -> Tree:
    """Recursive-descent parser for the ``L`` / ``(...)`` tree syntax.

    The arity is taken from the first node when ``n`` is not given; every node
    must then have exactly that many children.
    """
    src = "".join(text.split())
    pos = 0
    arity = n
    internal: set = set()

    def node(path):
        nonlocal pos, arity
        if pos >= len(src):
            raise FormatError(f"unexpected end of tree {text!r}")
        ch = src[pos]
        if ch == "L":
            pos += 1
            return
        if ch != "(":
            raise FormatError(f"unexpected {ch!r} at offset {pos} in {text!r}")
        pos += 1
        internal.add(path)
        count = 0
        while pos < len(src) and src[pos] != ")":
            node(path + (count,))
            count += 1
        if pos >= len(src):
            raise FormatError(f"unbalanced parenthesis in {text!r}")
        pos += 1
        if arity is None:
            arity = count
        if count != arity or count < 2:
            raise FormatError(f"node with {count} children in {arity}-ary tree {text!r}")

    node(())
    if pos != len(src):
        raise FormatError(f"trailing input in tree {text!r}")
    if arity is None:
        raise FormatError("a bare leaf does not determine the arity; pass n")
    return Tree.from_internal(arity, internal)


# -- tree pairs -------------------------------------------------------------------

@dataclass(frozen=True)
class TreePair:
    n: int
    domain: Tree
    range: Tree
    shift: int = 0

    def __post_init__(self):
        if self.domain.n != self.n or self.range.n != self.n:
            raise ValueError("tree arity does not match the pair")
        if self.domain.leaf_count != self.range.leaf_count:
            raise ValueError("domain and range trees need the same number of leaves")
        if not 0 <= self.shift < self.domain.leaf_count:
            raise ValueError("shift out of range")

    @classmethod
    def identity(cls, n: int) -> "TreePair":
        return cls(n, Tree.leaf(n), Tree.leaf(n), 0)

    @property
    def leaf_count(self) -> int:
        return self.domain.leaf_count

    def is_identity(self) -> bool:
        r = reduce(self)
        return r.leaf_count == 1

    def __mul__(self, other: "TreePair") -> "TreePair":
        return multiply(self, other)

    def to_json(self) -> dict:
        return {"n": self.n, "domain": format_tree(self.domain),
                "range": format_tree(self.range), "shift": self.shift}

    @classmethod
    def from_json(cls, doc) -> "TreePair":
        try:
            n = int(doc["n"])
            return cls(n, parse_tree(doc["domain"], n), parse_tree(doc["range"], n),
                       int(doc.get("shift", 0)))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed tree pair: {exc}") from exc


def _with_leaves(n, d_leaves, r_leaves, shift):
    return TreePair(n, Tree(n, tuple(d_leaves)), Tree(n, tuple(r_leaves)), shift)


def _expand_range_leaf(n, D, R, s, j):
    """Split range leaf j and its preimage leaf; returns new (D, R, s)."""
    L = len(D)
    k = (j - s) % L
    D2 = D[:k] + [D[k] + (c,) for c in range(n)] + D[k + 1:]
    R2 = R[:j] + [R[j] + (c,) for c in range(n)] + R[j + 1:]
    if k == 0:
        s2 = j
    elif s < j:
        s2 = s
    else:
        s2 = s + n - 1
    return D2, R2, s2


def _expand_domain_leaf(n, D, R, s, k):
    return _expand_range_leaf(n, D, R, s, (k + s) % len(D))


def invert(p: TreePair) -> TreePair:
    L = p.leaf_count
    return TreePair(p.n, p.range, p.domain, (-p.shift) % L)


def multiply(p: TreePair, q: TreePair) -> TreePair:
    """Product ``p o q`` (q applied first), reduced."""
    if p.n != q.n:
        raise ValueError("arity mismatch")
    n = p.n
    target = q.range.internal() | p.domain.internal()
    qD, qR, qs = list(q.domain.leaves), list(q.range.leaves), q.shift
    pD, pR, ps = list(p.domain.leaves), list(p.range.leaves), p.shift
    j = 0
    while j < len(qR):
        if qR[j] in target:
            qD, qR, qs = _expand_range_leaf(n, qD, qR, qs, j)
        else:
            j += 1
    k = 0
    while k < len(pD):
        if pD[k] in target:
            pD, pR, ps = _expand_domain_leaf(n, pD, pR, ps, k)
        else:
            k += 1
    assert qR == pD
    L = len(qD)
    return reduce(_with_leaves(n, qD, pR, (qs + ps) % L))


def _reducible_carets(n, D, R, s) -> list[int]:
    """Start indices k of domain carets whose images form an aligned range caret."""
    L = len(D)
    out = []
    for k in range(L - n + 1):
        parent = D[k][:-1]
        if not D[k] or any(D[k + c] != parent + (c,) for c in range(n)):
            continue
        j = (k + s) % L
        if j + n > L:
            continue
        rparent = R[j][:-1]
        if R[j] and all(R[j + c] == rparent + (c,) for c in range(n)):
            out.append(k)
    return out


def reduce(p: TreePair, rng: random.Random | None = None) -> TreePair:
    """Cancel matching carets until none remain.  ``rng`` randomizes the order (same result)."""
    n = p.n
    D, R, s = list(p.domain.leaves), list(p.range.leaves), p.shift
    while True:
        cands = _reducible_carets(n, D, R, s)
        if not cands:
            break
        k = rng.choice(cands) if rng is not None else cands[0]
        L = len(D)
        j = (k + s) % L
        D = D[:k] + [D[k][:-1]] + D[k + n:]
        R = R[:j] + [R[j][:-1]] + R[j + n:]
        if len(D) == 1 or k == 0:
            s = 0 if len(D) == 1 else j
        elif s > j:
            s -= n - 1
    return _with_leaves(n, D, R, s)


def to_plmap(p: TreePair) -> PLMap:
    n, L, s = p.n, p.leaf_count, p.shift
    dom = p.domain.leaf_partition()
    rng = p.range.leaf_partition()
    ts, vs = [], []
    for k in range(L):
        j = k + s
        lo = rng[j % L][0] + (1 if j >= L else 0)
        ts.append(dom[k][0])
        vs.append(lo)
    ts.append(Fraction(1))
    vs.append(vs[0] + 1)
    return PLMap(ts, vs)


def from_plmap(f: PLMap, n: int) -> TreePair:
    """Reduced tree pair of an element of T_n."""
    if not member_of(f, "T", n):
        raise NotInGroupError(f"map is not an element of T_{n}")
    cuts = set(f.ts[1:-1])
    if f.kind != "interval":
        cuts.add(f.lift_inverse(1) % 1)
    cuts.discard(Fraction(0))

    domain_leaves: list[Address] = []
    stack: list[Address] = [()]
    while stack:
        addr = stack.pop()
        lo, hi = address_interval(addr, n)
        split = any(lo < c < hi for c in cuts)
        if not split:
            a, b = f.lift(lo), f.lift(hi)
            base = a - (a // 1)
            split = interval_address(base, base + (b - a), n) is None or base + (b - a) > 1
        if split:
            stack.extend(addr + (c,) for c in reversed(range(n)))
        else:
            domain_leaves.append(addr)

    images = []
    for addr in domain_leaves:
        lo, hi = address_interval(addr, n)
        a, b = f.lift(lo), f.lift(hi)
        base = a % 1
        images.append(interval_address(base, base + (b - a), n))
    range_leaves = sorted(images, key=lambda ad: address_interval(ad, n)[0])
    shift = range_leaves.index(images[0])
    return reduce(_with_leaves(n, domain_leaves, range_leaves, shift))


# -- named generators -------------------------------------------------------------

def generator(name: str, n: int, i: int | None = None) -> TreePair:
    """Named elements of F_n and T_n as tree pairs.

    ``x`` (1 <= i <= n), ``y``, ``g1``, ``g2`` (n >= 3), and the ring family
    ``f`` (1 <= i <= n, plus i = n+1 when n >= 3) with
    ``f_i = x_{i+1}^-1 x_i``, ``f_n = x_n`` and ``f_{n+1} = g2 (y g1) g2^-1``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if name == "y":
        return TreePair(n, Tree.caret(n), Tree.caret(n), n - 1)
    if name == "x":
        if i is None or not 1 <= i <= n:
            raise ValueError(f"x_{{n,i}} needs 1 <= i <= {n}")
        if i < n:
            return TreePair(n, Tree.with_expanded(n, (i - 1,)), Tree.with_expanded(n, (n - 1,)))
        return TreePair(n, Tree.with_expanded(n, (n - 1, 0)), Tree.with_expanded(n, (n - 1, n - 1)))
    if name == "g1":
        return TreePair(n, Tree.with_expanded(n, (n - 1, n - 1)), Tree.with_expanded(n, (0, 0)))
    if name == "g2":
        if n < 3:
            raise ValueError("g_{n,2} is defined for n >= 3")
        return TreePair(n, Tree.with_expanded(n, (n - 1, n - 2)), Tree.with_expanded(n, (0,), (n - 1,)))
    if name == "f":
        top = n + 1 if n >= 3 else n
        if i is None or not 1 <= i <= top:
            raise ValueError(f"f_{{n,i}} needs 1 <= i <= {top}")
        if i < n:
            return multiply(invert(generator("x", n, i + 1)), generator("x", n, i))
        if i == n:
            return reduce(generator("x", n, n))
        g2 = generator("g2", n)
        yg1 = multiply(generator("y", n), generator("g1", n))
        return multiply(multiply(g2, yg1), invert(g2))
    raise ValueError(f"unknown generator {name!r}")


def random_tree(n: int, carets: int, rng: random.Random) -> Tree:
    leaves: list[Address] = [()]
    for _ in range(carets):
        k = rng.randrange(len(leaves))
        leaves[k:k + 1] = [leaves[k] + (c,) for c in range(n)]
    return Tree(n, tuple(leaves))


def random_pair(n: int, max_carets: int, rng: random.Random, circle: bool = True) -> TreePair:
    """Random reduced tree pair with at most ``max_carets`` carets per tree."""
    c = rng.randint(0, max_carets)
    d, r = random_tree(n, c, rng), random_tree(n, c, rng)
    shift = rng.randrange(d.leaf_count) if circle else 0
    return reduce(TreePair(n, d, r, shift))
