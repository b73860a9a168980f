"""Bar construction, the Anick Morse matching and the induced contraction onto Tor.

A bar term is a tuple of normal monomials ``(a_1, ..., a_n)``; its homological
degree is ``n``.  Linear combinations are plain ``{term: int}`` dicts with no
zero coefficients.  Segments are indexed from 0, so merging segments ``i`` and
``i+1`` carries the sign ``(-1)**i``.
"""
from __future__ import annotations

import graphlib
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .chains import BettiTable, Chain, _make_chain
from .linalg import check_cap, rank
from .presentation import Monomial, Presentation, composable_words, normal_basis

BarTerm = tuple


def _add(acc: dict, key, coeff: int) -> None:
    v = acc.get(key, 0) + coeff
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class _Ctx:
    """Per-presentation memo tables."""

    def __init__(self, p: Presentation):
        self.p = p
        self.normal: dict = {}
        self.zm: dict = {}
        self.h: dict = {}
        self.proj: dict = {}
        self.transfer: dict = {}

    def is_normal(self, m: Monomial) -> bool:
        r = self.normal.get(m)
        if r is None:
            p = self.p
            r = True
            for k in range(2, len(m) + 1):
                if p.ends_with_relation(m[:k]):
                    r = False
                    break
            self.normal[m] = r
        return r

    def zero_min(self, u: Monomial, v: Monomial) -> bool:
        key = (u, v)
        r = self.zm.get(key)
        if r is None:
            w = u + v
            n = len(u)
            ends = self.p.ends_with_relation
            r = ends(w) and not any(ends(w[:n + j]) for j in range(1, len(v)))
            self.zm[key] = r
        return r

    def first_zero(self, u: Monomial, v: Monomial) -> int | None:
        """Shortest ``L`` with ``u v[:L]`` reducible, for normal ``u`` and ``v``."""
        w = u + v
        n = len(u)
        ends = self.p.ends_with_relation
        for L in range(1, len(v) + 1):
            if ends(w[:n + L]):
                return L
        return None


def _ctx(p: Presentation) -> _Ctx:
    c = p.__dict__.get("_bar_ctx")
    if c is None:
        c = _Ctx(p)
        p.__dict__["_bar_ctx"] = c
    return c


# ---------------------------------------------------------------------------
# the bar construction

def bar_terms(p: Presentation, degree: int, weight: int) -> list[BarTerm]:
    """Basis of the bar construction in bidegree ``(degree, weight)``, sorted."""
    if degree < 1 or weight < degree:
        return []
    q = p.quiver
    basis = normal_basis(p, weight - degree + 1)
    out = []

    def grow(prefix, left, slots):
        if slots == 0:
            if left == 0:
                out.append(prefix)
            return
        for L in range(1, left - slots + 2):
            for m in basis[L - 1]:
                if prefix and not q.composable(prefix[-1], m):
                    continue
                grow(prefix + (m,), left - L, slots - 1)

    grow((), weight, degree)
    out.sort(key=lambda t: (tuple(a for s in t for a in s), tuple(len(s) for s in t)))
    return out


def bar_differential(t: BarTerm, p: Presentation) -> dict:
    ctx = _ctx(p)
    out: dict = {}
    for i in range(len(t) - 1):
        m = t[i] + t[i + 1]
        if ctx.is_normal(m):
            _add(out, t[:i] + (m,) + t[i + 2:], -1 if i % 2 else 1)
    return out


def apply_linear(f, x: dict) -> dict:
    """Extend ``f: term -> dict`` linearly to the combination ``x``."""
    out: dict = {}
    for t, c in x.items():
        for u, d in f(t).items():
            _add(out, u, c * d)
    return out


def deconcatenation(t: BarTerm) -> list[tuple[BarTerm, BarTerm]]:
    return [(t[:i], t[i:]) for i in range(1, len(t))]


def is_attached(t: BarTerm, p: Presentation) -> bool:
    ctx = _ctx(p)
    return all(not ctx.is_normal(t[i] + t[i + 1]) for i in range(len(t) - 1))


def chain_prefix(t: BarTerm, p: Presentation) -> int:
    """Largest ``k`` such that ``t[:k+1]`` is a chain splitting, ``-1`` if none."""
    if len(t[0]) != 1:
        return -1
    ctx = _ctx(p)
    k = 0
    while k + 1 < len(t) and ctx.zero_min(t[k], t[k + 1]):
        k += 1
    return k


def is_critical(t: BarTerm, p: Presentation) -> bool:
    return chain_prefix(t, p) == len(t) - 1


@dataclass(frozen=True)
class Match:
    """Role of a bar term in the Anick matching.

    ``kind`` is ``"critical"``, ``"up"`` (matched with ``partner`` one degree
    higher) or ``"down"`` (matched with ``partner`` one degree lower).  ``index``
    is the merge position in the higher term of the matched pair.
    """

    kind: str
    partner: BarTerm | None = None
    index: int = -1

    @property
    def sign(self) -> int:
        return -1 if self.index % 2 else 1


def match(t: BarTerm, p: Presentation) -> Match:
    ctx = _ctx(p)
    k = chain_prefix(t, p)
    if k == len(t) - 1:
        return Match("critical")
    if k == -1:
        u = t[0]
        return Match("up", (u[:1], u[1:]) + t[1:], 0)
    u, v = t[k], t[k + 1]
    L = ctx.first_zero(u, v)
    if L is None:
        return Match("down", t[:k] + (u + v,) + t[k + 2:], k)
    return Match("up", t[:k + 1] + (v[:L], v[L:]) + t[k + 2:], k + 1)


# ---------------------------------------------------------------------------
# contraction (i, p, h)

def inclusion_i(c: Chain) -> BarTerm:
    return c.splitting


def _walk(t: BarTerm, p: Presentation):
    """Run the rewriting of an attached term; returns (h-terms, final term or None)."""
    ctx = _ctx(p)
    h: dict = {}
    cur = t
    while True:
        k = chain_prefix(cur, p)
        if k == len(cur) - 1:
            return h, cur
        i = k + 1
        seg = cur[i]
        L = 1 if i == 0 else ctx.first_zero(cur[k], seg)
        v1, v2 = seg[:L], seg[L:]
        _add(h, cur[:i] + (v1, v2) + cur[i + 1:], 1 if i % 2 else -1)
        if i == len(cur) - 1:
            return h, None
        merged = v2 + cur[i + 1]
        if not ctx.is_normal(merged):
            return h, None
        cur = cur[:i] + (v1, merged) + cur[i + 2:]


def homotopy_h(t: BarTerm, p: Presentation) -> dict:
    """The Morse homotopy on one bar term.

    Attached terms use the explicit rewriting: split the first segment that
    stops the chain prefix, emit the split term with sign ``(-1)**(i+1)``, push
    the remainder into the next segment and repeat until a chain or zero is
    reached.  Other terms go through the matching recursion.
    """
    ctx = _ctx(p)
    r = ctx.h.get(t)
    if r is None:
        if is_attached(t, p):
            r = _walk(t, p)[0]
        else:
            r = _morse_h(t, p)
        ctx.h[t] = r
    return r


def _morse_h(t: BarTerm, p: Presentation) -> dict:
    m = match(t, p)
    if m.kind != "up":
        return {}
    s = m.partner
    w = -m.sign
    out = {s: w}
    for face, coef in bar_differential(s, p).items():
        if face != t:
            for u, c in homotopy_h(face, p).items():
                _add(out, u, w * coef * c)
    return out


def projection_p(t: BarTerm, p: Presentation) -> dict:
    """Projection onto chains, as a combination of chain splittings."""
    ctx = _ctx(p)
    r = ctx.proj.get(t)
    if r is None:
        if is_attached(t, p):
            end = _walk(t, p)[1]
            r = {} if end is None or len(end) != len(t) else {end: 1}
        else:
            r = _morse_p(t, p)
        ctx.proj[t] = r
    return r


def _morse_p(t: BarTerm, p: Presentation) -> dict:
    m = match(t, p)
    if m.kind == "critical":
        return {t: 1}
    if m.kind == "down":
        return {}
    s = m.partner
    w = -m.sign
    out: dict = {}
    for face, coef in bar_differential(s, p).items():
        if face != t:
            for u, c in projection_p(face, p).items():
                _add(out, u, w * coef * c)
    return out


# ---------------------------------------------------------------------------
# explicit Morse graph (oracle)

@dataclass
class MorseGraph:
    weight: int
    degrees: tuple[int, ...]
    vertices: list
    edges: dict = field(default_factory=dict)   # vertex -> [(vertex, weight)] in G_M
    matched: set = field(default_factory=set)   # (higher, lower) pairs of the matching
    critical: set = field(default_factory=set)
    _order: list = field(default_factory=list, repr=False)

    def degree(self, v) -> int:
        return len(v)


def _edge_matched_face(s: BarTerm, ctx: _Ctx) -> BarTerm | None:
    """Face of ``s`` matched with it: merge the first non-minimal pair after the
    chain-like prefix, provided that pair multiplies to a nonzero monomial."""
    if len(s) < 2 or len(s[0]) != 1:
        return None
    j = 1
    while j < len(s) and ctx.zero_min(s[j - 1], s[j]):
        j += 1
    if j == len(s):
        return None
    m = s[j - 1] + s[j]
    if not ctx.is_normal(m):
        return None
    return s[:j - 1] + (m,) + s[j + 1:]


def build_morse_graph(p: Presentation, degree: int, weight: int) -> MorseGraph:
    """Morse graph of the bar construction on degrees ``degree-1 .. degree+1``."""
    ctx = _ctx(p)
    degs = tuple(d for d in (degree - 1, degree, degree + 1) if d >= 1)
    verts = [t for d in degs for t in bar_terms(p, d, weight)]
    vset = set(verts)
    g = MorseGraph(weight, degs, verts, {v: [] for v in verts})
    partner: dict = {}
    for s in verts:
        f = _edge_matched_face(s, ctx)
        if f is not None and f in vset:
            if s in partner or f in partner:
                raise AssertionError("matching condition M1 violated")
            partner[s] = f
            partner[f] = s
            g.matched.add((s, f))
    for s in verts:
        if len(s) == degs[0]:
            continue
        for face, coef in bar_differential(s, p).items():
            if (s, face) in g.matched:
                if abs(coef) != 1:
                    raise AssertionError("matching condition M2 violated")
                g.edges[face].append((s, -coef))
            else:
                g.edges[s].append((face, coef))
    g.critical = {v for v in verts if v not in partner}
    sorter = graphlib.TopologicalSorter({v: [u for u, _ in g.edges[v]] for v in verts})
    try:
        order = list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise AssertionError("matching condition M3 violated") from exc
    g._order = order[::-1]  # sources before targets
    return g


def path_weights_from(g: MorseGraph, source) -> dict:
    """``Gamma(source, v)`` for every vertex ``v`` reachable from ``source``."""
    if source not in g.edges:
        raise KeyError(f"{source!r} is not a vertex of the graph")
    acc = {source: 1}
    for v in g._order:
        a = acc.get(v)
        if not a:
            continue
        for u, w in g.edges[v]:
            acc[u] = acc.get(u, 0) + a * w
    return {v: c for v, c in acc.items() if c}


def path_weight_sum(g: MorseGraph, source, target) -> int:
    if target not in g.edges:
        raise KeyError(f"{target!r} is not a vertex of the graph")
    return path_weights_from(g, source).get(target, 0)


# ---------------------------------------------------------------------------
# homology oracle

def _word_cells(p: Presentation, word: Monomial):
    """Bar terms over a fixed underlying word, as tuples of cut positions."""
    n = len(word)
    ends = p.ends_with_relation
    # normal_to[i] = largest j such that word[i:j] is normal
    normal_to = []
    for i in range(n):
        j = i + 1
        while j < n and not ends(word[i:j + 1]):
            j += 1
        normal_to.append(j)
    cells: dict = defaultdict(list)

    def grow(cuts):
        start = cuts[-1]
        if start == n:
            cells[len(cuts) - 1].append(cuts)
            return
        for end in range(start + 1, normal_to[start] + 1):
            grow(cuts + (end,))

    grow((0,))
    return cells, normal_to


def _word_homology(p: Presentation, word: Monomial, cap: int | None) -> dict:
    cells, normal_to = _word_cells(p, word)
    index = {d: {c: i for i, c in enumerate(cs)} for d, cs in cells.items()}
    ranks = {}
    for d, cs in cells.items():
        check_cap(len(cs), cap, f"bar block (degree {d}, weight {len(word)})")
        if d < 2 or d - 1 not in index:
            continue
        target = index[d - 1]
        rows = []
        for c in cs:
            row = {}
            for i in range(d - 1):
                # merge segments i, i+1 by dropping cut c[i+1]
                if c[i + 2] <= normal_to[c[i]]:
                    row[target[c[:i + 1] + c[i + 2:]]] = -1 if i % 2 else 1
            rows.append(row)
        ranks[d] = rank(rows)
    return {d: len(cs) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d, cs in cells.items()}


def _weight_homology(args):
    p, w, cap = args
    out: dict = defaultdict(int)
    for word in composable_words(p.quiver, w):
        for d, h in _word_homology(p, word, cap).items():
            out[d] += h
    return w, dict(out)


def homology_dims(p: Presentation, max_weight: int, cap: int | None = None, jobs: int = 1) -> BettiTable:
    """``dim H_n(BA)_w`` for ``w <= max_weight`` by exact ranks.

    The differential preserves the underlying word of a bar term, so each word
    spans its own subcomplex; ranks are taken block by block.
    """
    tasks = [(p, w, cap) for w in range(1, max_weight + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_weight_homology, tasks))
    else:
        results = [_weight_homology(t) for t in tasks]
    table = BettiTable()
    for w, dims in sorted(results):
        for d, h in sorted(dims.items()):
            if h:
                table[(d, w)] = h
    return table


# ---------------------------------------------------------------------------
# transferred coproducts (oracle for the closed formula)

def _proj_chains(t: BarTerm, p: Presentation) -> dict:
    return {(_make_chain(c, p),): k for c, k in projection_p(t, p).items()}


def _tensor(x: dict, y: dict, sign: int) -> dict:
    out: dict = {}
    for a, c in x.items():
        for b, d in y.items():
            _add(out, a + b, sign * c * d)
    return out


def _projected_delta(t: BarTerm, n: int, p: Presentation) -> dict:
    """``p^{(x)n} Delta'_n`` on a bar term, through the full transfer recursion

    ``Delta'_n = sum_{s+t=n} (-1)^{s(t+1)} (Delta'_s h (x) Delta'_t h) Delta'_2``

    with ``Delta'_1 h = 1`` and the Koszul rule for ``|Delta'_t h| = t - 1``.
    """
    ctx = _ctx(p)
    key = (t, n)
    r = ctx.transfer.get(key)
    if r is not None:
        return r
    if n == 1:
        r = _proj_chains(t, p)
    else:
        r = {}
        for s in range(1, n):
            u = n - s
            sign = -1 if (s * (u + 1)) % 2 else 1
            for a, b in deconcatenation(t):
                left = _leg(a, s, p)
                if not left:
                    continue
                right = _leg(b, u, p)
                if not right:
                    continue
                k = -sign if ((u - 1) * len(a)) % 2 else sign
                for key2, c in _tensor(left, right, k).items():
                    _add(r, key2, c)
    ctx.transfer[key] = r
    return r


def _leg(x: BarTerm, k: int, p: Presentation) -> dict:
    if k == 1:
        return _proj_chains(x, p)
    out: dict = {}
    for y, c in homotopy_h(x, p).items():
        for key, d in _projected_delta(y, k, p).items():
            _add(out, key, c * d)
    return out


def transfer_delta_n(c: Chain, n: int, p: Presentation) -> dict:
    """``Delta_n = p^{(x)n} Delta'_n i`` on a chain, keyed by tuples of chains."""
    if n < 2:
        raise ValueError("arity must be >= 2")
    return dict(_projected_delta(inclusion_i(c), n, p))
