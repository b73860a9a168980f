"""Anick chains of monomial (quiver) algebras."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .presentation import Monomial, Presentation, is_normal, render_bar


@dataclass(frozen=True)
class Chain:
    """An Anick chain with its bar splitting ``[u_0|u_1|...|u_r]``.

    Equality compares splittings, so ``[t|t2]`` and ``[t2|t]`` differ even though
    their monomials agree.  ``interlace`` holds the 1-based sequences ``(a, b)``;
    segment ``a_j..b_j`` of the monomial is the j-th obstruction.
    """

    splitting: tuple
    interlace: tuple = field(default=((), ()), compare=False, hash=False, repr=False)

    @cached_property
    def monomial(self) -> Monomial:
        return tuple(a for seg in self.splitting for a in seg)

    @property
    def length(self) -> int:
        return len(self.splitting) - 1

    @property
    def weight(self) -> int:
        return len(self.monomial)

    @property
    def degree(self) -> int:
        """Homological degree of the class in Tor."""
        return len(self.splitting)

    def sort_key(self):
        return (self.length, self.weight, self.monomial)

    def render(self, p: Presentation) -> str:
        return render_bar(p.quiver, self.splitting)


@dataclass(frozen=True)
class Overlaps:
    overlapping: frozenset
    dual: frozenset


class BettiTable(dict):
    """Mapping ``(n, w) -> count`` holding only the nonzero entries."""

    def __missing__(self, key):
        return 0

    def rows(self):
        return [(n, w, c) for (n, w), c in sorted(self.items()) if c]

    def to_csv(self) -> str:
        lines = ["n,w,count"] + [f"{n},{w},{c}" for n, w, c in self.rows()]
        return "\n".join(lines) + "\n"


def _make_chain(splitting: tuple, p: Presentation) -> Chain:
    mono = tuple(a for seg in splitting for a in seg)
    a_seq, b_seq = [], []
    end = len(splitting[0])
    for seg in splitting[1:]:
        end += len(seg)
        rel = p.relation_suffix(mono[:end])
        b_seq.append(end)
        a_seq.append(end - len(rel) + 1)
    return Chain(tuple(splitting), (tuple(a_seq), tuple(b_seq)))


def tails(u: Monomial, p: Presentation) -> list[Monomial]:
    """Normal ``v`` with ``uv = 0`` minimally, shortest first."""
    out = set()
    n = len(u)
    for rel in p.relations:
        for k in range(n):
            overlap = n - k
            if len(rel) > overlap and rel[:overlap] == u[k:]:
                v = rel[overlap:]
                if not p.quiver.composable(u, v):
                    continue
                w = u + v
                if any(p.ends_with_relation(w[:n + j]) for j in range(1, len(v))):
                    continue
                if is_normal(v, p):
                    out.add(v)
    return sorted(out, key=lambda v: (len(v), v))


def enumerate_chains(p: Presentation, max_weight: int) -> dict:
    """All chains of weight <= ``max_weight``, keyed by ``(length, weight)``.

    Built by extending each (r-1)-chain with the tails of its last segment.
    Groups are in deglex order of the monomial.
    """
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    groups: dict = defaultdict(list)
    layer = [((i,),) for i in range(len(p.quiver.arrows))]
    tail_cache: dict = {}
    while layer:
        nxt = []
        for split in layer:
            c = _make_chain(split, p)
            groups[(c.length, c.weight)].append(c)
            last = split[-1]
            if last not in tail_cache:
                tail_cache[last] = tails(last, p)
            wt = c.weight
            for v in tail_cache[last]:
                if wt + len(v) <= max_weight:
                    nxt.append(split + (v,))
        layer = nxt
    for key in groups:
        groups[key].sort(key=lambda c: c.monomial)
    return dict(sorted(groups.items()))


def all_chains(p: Presentation, max_weight: int) -> list[Chain]:
    out = [c for group in enumerate_chains(p, max_weight).values() for c in group]
    out.sort(key=lambda c: (c.weight, c.length, c.monomial))
    return out


def chain_splitting(m: Monomial, p: Presentation) -> tuple | None:
    """The unique chain splitting of ``m``, if ``m`` underlies a chain at all.

    Each segment is forced: it is the shortest continuation whose product with
    the previous segment is reducible.
    """
    m = tuple(m)
    if not m or not p.quiver.is_composable(m):
        return None
    split = [m[:1]]
    pos = 1
    n = len(m)
    while pos < n:
        start = pos - len(split[-1])
        for end in range(pos + 1, n + 1):
            if p.ends_with_relation(m[start:end]):
                break
        else:
            return None
        seg = m[pos:end]
        if not is_normal(seg, p):
            return None
        split.append(seg)
        pos = end
    return tuple(split)


def chain_length(m: Monomial, p: Presentation) -> int | None:
    s = chain_splitting(m, p)
    return None if s is None else len(s) - 1


def chain_from_monomial(m: Monomial, r: int, p: Presentation) -> Chain | None:
    s = chain_splitting(m, p)
    if s is None or len(s) - 1 != r:
        return None
    return _make_chain(s, p)


def chain_from_splitting(splitting, p: Presentation) -> Chain | None:
    """The chain with exactly this bar structure, or ``None``."""
    splitting = tuple(tuple(s) for s in splitting)
    s = chain_splitting(tuple(a for seg in splitting for a in seg), p)
    if s != splitting:
        return None
    return _make_chain(s, p)


def betti(p: Presentation, max_weight: int) -> BettiTable:
    table = BettiTable()
    for (r, w), group in enumerate_chains(p, max_weight).items():
        table[(r + 1, w)] = len(group)
    return table


def overlapping_positions(c: Chain) -> Overlaps:
    """Positions ``s`` with ``a_{j+1} <= s < b_j``; ``a_{j+1} == b_j`` is reported as dual."""
    a, b = c.interlace
    over, dual = set(), set()
    for j in range(len(a) - 1):
        over.update(range(a[j + 1], b[j]))
        if a[j + 1] == b[j]:
            dual.add(b[j])
    return Overlaps(frozenset(over), frozenset(dual))
