"""Hochschild cohomology through the twisted complex hom_tau(Tor, A).

Elements of ``A`` are ``{path: coeff}`` dicts where a path is ``(source, word)``
and ``word`` is a normal monomial, empty for a trivial path.  A cochain of
cohomological degree ``n >= 1`` is supported on chains of length ``n - 1``; in
degree 0 it is supported on vertices.  Its shift is the weight of a value minus
the weight of its argument.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import comb

from .bar import _add, _ctx, bar_terms
from .chains import Chain, _make_chain, all_chains, chain_splitting, enumerate_chains
from .linalg import LimitError, check_cap, left_kernel, rank
from .model import _b_rule, coproduct, decompositions
from .presentation import Presentation, max_normal_weight, normal_basis, render_monomial
from .report import Report


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# the algebra -----------------------------------------------------------------

def path_target(p: Presentation, a) -> str:
    v, w = a
    return p.quiver.arrows[w[-1]].target if w else v


def path_mul(p: Presentation, a, b):
    """Product of two paths in ``A``, ``None`` when it vanishes."""
    if path_target(p, a) != b[0]:
        return None
    w = a[1] + b[1]
    if a[1] and b[1] and not _ctx(p).is_normal(w):
        return None
    return (a[0], w)


def word_path(p: Presentation, word) -> tuple:
    return (p.quiver.arrows[word[0]].source, tuple(word))


def element_mul(p: Presentation, x: dict, y: dict) -> dict:
    out: dict = {}
    for a, c in x.items():
        for b, d in y.items():
            ab = path_mul(p, a, b)
            if ab is not None:
                _add(out, ab, c * d)
    return out


def render_path(p: Presentation, a) -> str:
    return render_monomial(p.quiver, a[1]) if a[1] else f"e{a[0]}"


def render_element(p: Presentation, x: dict) -> str:
    if not x:
        return "0"
    return " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{render_path(p, a)}"
                    for a, c in sorted(x.items(), key=lambda kv: (len(kv[0][1]), kv[0])))


def parallel_paths(p: Presentation, src: str, tgt: str, weight: int) -> list:
    """Normal paths ``src -> tgt`` of the given weight, trivial path included."""
    if weight < 0:
        return []
    if weight == 0:
        return [(src, ())] if src == tgt else []
    q = p.quiver
    return [(src, m) for m in normal_basis(p, weight)[weight - 1]
            if q.source(m) == src and q.target(m) == tgt]


# cochains ---------------------------------------------------------------------

@dataclass
class TwistedCochain:
    degree: int
    shift: int
    values: dict = field(default_factory=dict)  # Chain (or vertex in degree 0) -> element

    def __call__(self, key) -> dict:
        return self.values.get(key, {})

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def basis_vector(self) -> dict:
        return {(k, a): c for k, v in self.values.items() for a, c in v.items()}

    @classmethod
    def from_vector(cls, degree, shift, vec: dict):
        values: dict = defaultdict(dict)
        for (k, a), c in vec.items():
            if c:
                values[k][a] = c
        return cls(degree, shift, dict(values))


def _key_ends(p: Presentation, key):
    if isinstance(key, Chain):
        return p.quiver.source(key.monomial), p.quiver.target(key.monomial)
    return key, key


def _key_weight(key) -> int:
    return key.weight if isinstance(key, Chain) else 0


def validate_cochain(f: TwistedCochain, p: Presentation) -> None:
    for key, val in f.values.items():
        src, tgt = _key_ends(p, key)
        for a in val:
            if a[0] != src or path_target(p, a) != tgt:
                raise ValueError("cochain value is not parallel to its argument")
            if len(a[1]) - _key_weight(key) != f.shift:
                raise ValueError("cochain is not homogeneous in the shift")
        if isinstance(key, Chain) and key.degree != f.degree:
            raise ValueError("cochain argument has the wrong degree")


def _chains_of_degree(p: Presentation, n: int) -> list[Chain]:
    """All chains of length ``n - 1``; their weight is at most ``1 + (n-1)(L-1)``."""
    cache = _ctx(p).__dict__.setdefault("chains_by_degree", {})
    if n not in cache:
        bound = 1 + (n - 1) * max(p.max_relation_length - 1, 0)
        cache[n] = [c for (r, _), g in enumerate_chains(p, bound).items() if r == n - 1 for c in g]
    return cache[n]


# the twisting cochain ---------------------------------------------------------

def tau(c: Chain, p: Presentation, sabotage=()) -> dict:
    """The canonical twisting cochain: an arrow maps to itself, longer chains to 0."""
    if c.length == 0:
        return {word_path(p, c.monomial): 1}
    if "tau-chain" in sabotage and c.length == 1:
        return {(p.quiver.source(c.monomial), ()): 1}
    return {}


def maurer_cartan_value(c: Chain, p: Presentation, sabotage=()) -> dict:
    """``sum_n (-1)^C(n,2) mu^(n) tau^(x)n Delta_n (c)``."""
    out: dict = {}
    for n in range(2, c.weight + 1):
        for word, k in coproduct(c, n, p).items():
            lens = [g.length for g in word]
            sign = k * _sign(comb(n, 2) + sum((n - i) * (lens[i - 1] + 1) for i in range(1, n)))
            val = {(p.quiver.source(c.monomial), ()): sign}
            for g in word:
                val = element_mul(p, val, tau(g, p, sabotage))
                if not val:
                    break
            for a, v in val.items():
                _add(out, a, v)
    return out


def check_maurer_cartan(p: Presentation, max_weight: int, sabotage=()) -> Report:
    rep = Report("maurer_cartan")
    for c in all_chains(p, max_weight):
        rep.checked += 1
        val = maurer_cartan_value(c, p, sabotage)
        if val:
            rep.fail(chain=c.render(p), arity=0, term=render_element(p, val),
                     coefficient=sum(abs(v) for v in val.values()))
    return rep


# twisted differential -----------------------------------------------------------

def _d_terms(c: Chain, p: Presentation, signs: str = "binomial") -> list:
    """Terms ``(prefix, middle, suffix, sign)`` of ``b(s^-1 c)`` in which every
    factor except ``middle`` is an arrow."""
    rule = _b_rule(signs)
    cache = _ctx(p).__dict__.setdefault("d_terms", {})
    r = cache.get((c, signs))
    if r is not None:
        return r
    m = c.monomial
    w = len(m)
    n = c.length
    out = []
    for i in range(w):
        for j in range(i + 1, w + 1):
            if j - i == w:
                continue
            s = chain_splitting(m[i:j], p)
            if s is None or len(s) != n:
                continue
            lengths = [0] * (i + 1 + (w - j))
            lengths[i] = n - 1
            out.append((m[:i], _make_chain(s, p), m[j:], _sign(rule(lengths))))
    cache[(c, signs)] = out
    return out


def _sandwich(p: Presentation, pre, a, post):
    if pre:
        a = path_mul(p, word_path(p, pre), a)
        if a is None:
            return None
    if post:
        a = path_mul(p, a, word_path(p, post))
    return a


def twisted_differential(f: TwistedCochain, p: Presentation, max_weight: int | None = None,
                         signs: str = "binomial") -> TwistedCochain:
    """``d f`` on the twisted complex.

    In degree 0, ``df(x) = a x - x a`` for the element ``a`` given by ``f``.
    Otherwise ``(df)(c)`` is obtained by letting the derivation extending ``f``
    act on ``b(s^-1 c)``; only terms whose other factors are arrows survive, so
    ``(df)(c)`` is a signed sum of ``x f(c') y``.  ``max_weight`` optionally
    bounds the weight of the chains ``c`` considered; ``signs`` is the sign
    rule of ``b`` as in ``model.differential_b``.
    """
    out: dict = defaultdict(dict)
    n = f.degree
    if n == 0:
        for i, x in enumerate(p.quiver.arrows):
            key = _make_chain(((i,),), p)
            xp = (x.source, (i,))
            for a, c in f(x.source).items():
                ax = path_mul(p, a, xp)
                if ax is not None:
                    _add(out[key], ax, c)
            for a, c in f(x.target).items():
                xa = path_mul(p, xp, a)
                if xa is not None:
                    _add(out[key], xa, -c)
    else:
        for g in _chains_of_degree(p, n + 1):
            if max_weight is not None and g.weight > max_weight:
                continue
            for pre, mid, post, sign in _d_terms(g, p, signs):
                for a, c in f(mid).items():
                    b = _sandwich(p, pre, a, post)
                    if b is not None:
                        _add(out[g], b, sign * c)
    return TwistedCochain(n + 1, f.shift, {k: v for k, v in out.items() if v})


def twisted_basis(p: Presentation, n: int, s: int) -> list:
    """Basis ``(argument, path)`` of the block ``(n, s)``."""
    if n == 0:
        return [(v, a) for v in p.quiver.vertices for a in parallel_paths(p, v, v, s)]
    out = []
    q = p.quiver
    for c in _chains_of_degree(p, n):
        m = c.monomial
        out.extend((c, a) for a in parallel_paths(p, q.source(m), q.target(m), c.weight + s))
    return out


def _twisted_rows(p: Presentation, n: int, s: int, cap=None, signs: str = "binomial") -> list:
    basis = twisted_basis(p, n, s)
    check_cap(len(basis), cap, f"twisted block (degree {n}, shift {s})")
    rows = []
    for key, a in basis:
        f = TwistedCochain(n, s, {key: {a: 1}})
        rows.append(twisted_differential(f, p, signs=signs).basis_vector())
    return rows


def _dims(rows_of, max_degree, shifts):
    table = {}
    for s in shifts:
        rows = {n: rows_of(n, s) for n in range(max_degree + 1)}
        ranks = {n: rank(r) for n, r in rows.items()}
        for n in range(max_degree + 1):
            d = len(rows[n]) - ranks[n] - ranks.get(n - 1, 0)
            if d:
                table[(n, s)] = d
    return dict(sorted(table.items()))


def hh_dims(p: Presentation, max_degree: int, shifts=range(-8, 9), cap=None, signs: str = "binomial") -> dict:
    """``dim HH^{n}`` per ``(n, shift)`` from the twisted complex."""
    return _dims(lambda n, s: _twisted_rows(p, n, s, cap, signs), max_degree, shifts)


def twisted_d_squared(p: Presentation, max_degree: int, shifts=range(-8, 9), signs: str = "binomial") -> Report:
    rep = Report("twisted_d_squared")
    for s in shifts:
        for n in range(max_degree):
            for key, a in twisted_basis(p, n, s):
                rep.checked += 1
                f = TwistedCochain(n, s, {key: {a: 1}})
                dd = twisted_differential(twisted_differential(f, p, signs=signs), p, signs=signs)
                if not dd.is_zero():
                    arg = key.render(p) if isinstance(key, Chain) else f"e{key}"
                    rep.fail(chain=f"{arg} -> {render_path(p, a)}", arity=n,
                             term=f"d d nonzero on {len(dd.values)} chains", coefficient=1)
    return rep


# classical oracle ----------------------------------------------------------------

def _finite_bound(p: Presentation) -> int:
    top = max_normal_weight(p)
    if top is None:
        raise LimitError("the classical Hochschild complex needs a finite-dimensional algebra")
    return top


def classical_basis(p: Presentation, n: int, s: int) -> list:
    if n == 0:
        return twisted_basis(p, 0, s)
    top = _finite_bound(p)
    q = p.quiver
    out = []
    for w in range(n, min(n * top, top - s) + 1):
        for t in bar_terms(p, n, w):
            out.extend((t, a) for a in parallel_paths(p, q.source(t[0]), q.target(t[-1]), w + s))
    return out


def _classical_row(p: Presentation, n: int, t, a, top: int) -> dict:
    """Coboundary of the cochain sending ``t`` to ``a`` and every other term to 0."""
    q = p.quiver
    row: dict = {}
    words = [m for ms in normal_basis(p, top) for m in ms] if top else []
    if n == 0:
        v = t
        for m in words:
            mp = word_path(p, m)
            if q.target(m) == v:
                ma = path_mul(p, mp, a)
                if ma is not None:
                    _add(row, ((m,), ma), 1)
            if q.source(m) == v:
                am = path_mul(p, a, mp)
                if am is not None:
                    _add(row, ((m,), am), -1)
        return row
    src, tgt = q.source(t[0]), q.target(t[-1])
    for m in words:
        mp = word_path(p, m)
        if q.target(m) == src:
            ma = path_mul(p, mp, a)
            if ma is not None:
                _add(row, ((m,) + t, ma), 1)
        if q.source(m) == tgt:
            am = path_mul(p, a, mp)
            if am is not None:
                _add(row, (t + (m,), am), _sign(n + 1))
    for i, seg in enumerate(t):
        for k in range(1, len(seg)):
            split = t[:i] + (seg[:k], seg[k:]) + t[i + 1:]
            _add(row, (split, a), _sign(i + 1))
    return row


def _classical_rows(p: Presentation, n: int, s: int, cap=None) -> list:
    top = _finite_bound(p)
    basis = classical_basis(p, n, s)
    check_cap(len(basis), cap, f"classical block (degree {n}, shift {s})")
    return [_classical_row(p, n, t, a, top) for t, a in basis]


def classical_hh_dims(p: Presentation, max_degree: int, shifts=range(-8, 9), cap=None) -> dict:
    """``dim HH^{n}`` per ``(n, shift)`` from normalized Hochschild cochains."""
    return _dims(lambda n, s: _classical_rows(p, n, s, cap), max_degree, shifts)


# products -----------------------------------------------------------------------

def higher_product(fs, p: Presentation) -> TwistedCochain:
    """``mu_n(f_1, ..., f_n)(c) = (-1)^N mu_A (f_1 (x) ... (x) f_n) Delta_n(c)``
    with ``N = n(|f_1| + ... + |f_n| + 1)`` and the Koszul signs of evaluating a
    tensor of maps on a tensor of chains.  For ``n = 2`` the counital ``Delta_2``
    is used, so degree-0 cochains act by multiplication in ``A``."""
    fs = list(fs)
    n = len(fs)
    if n < 2:
        raise ValueError("arity must be >= 2")
    degs = [f.degree for f in fs]
    deg = sum(degs) + 2 - n
    shift = sum(f.shift for f in fs)
    outer = _sign(n * (sum(degs) + 1))
    koszul = _sign(sum(degs[i] * degs[j] for i in range(n) for j in range(i + 1, n)))
    out: dict = defaultdict(dict)
    if deg < 0:
        return TwistedCochain(deg, shift, {})
    if deg == 0:
        if n == 2:
            for v in p.quiver.vertices:
                val = element_mul(p, fs[0](v), fs[1](v))
                if val:
                    out[v] = val
        return TwistedCochain(0, shift, dict(out))
    for c in _chains_of_degree(p, deg):
        acc: dict = {}
        if n == 2:
            src, tgt = _key_ends(p, c)
            for x, y in ((fs[0](src), fs[1](c)), (fs[0](c), fs[1](tgt))):
                for a, k in element_mul(p, x, y).items():
                    _add(acc, a, outer * k)
        if c.length >= 1:
            for d in decompositions(c, n, p):
                if any(g.degree != k for g, k in zip(d.parts, degs)):
                    continue
                val = None
                for f, g in zip(fs, d.parts):
                    x = f(g)
                    val = x if val is None else element_mul(p, val, x)
                    if not val:
                        break
                if not val:
                    continue
                coef = outer * koszul * coproduct(c, n, p)[d.parts]
                for a, k in val.items():
                    _add(acc, a, coef * k)
        if acc:
            out[c] = acc
    return TwistedCochain(deg, shift, dict(out))


def cup_product(f: TwistedCochain, g: TwistedCochain, p: Presentation) -> TwistedCochain:
    return higher_product([f, g], p)


# cohomology classes ------------------------------------------------------------

def cocycle_basis(p: Presentation, n: int, s: int, cap=None) -> list[TwistedCochain]:
    basis = twisted_basis(p, n, s)
    rows = _twisted_rows(p, n, s, cap)
    return [TwistedCochain.from_vector(n, s, {basis[i]: c for i, c in v.items()})
            for v in left_kernel(rows)]


def is_coboundary(f: TwistedCochain, p: Presentation, cap=None) -> bool:
    v = f.basis_vector()
    if not v:
        return True
    if f.degree == 0:
        return False
    rows = [r for r in _twisted_rows(p, f.degree - 1, f.shift, cap) if r]
    return rank(rows + [v]) == rank(rows)


def verify_cup_descends(p: Presentation, max_degree: int, shifts, cap=None) -> Report:
    """The product of cocycles is a cocycle, and is a coboundary as soon as one
    factor is a coboundary, for all pairs of degrees summing to at most ``max_degree``."""
    rep = Report("cup_descends")
    shifts = list(shifts)
    z = {(n, s): cocycle_basis(p, n, s, cap) for n in range(max_degree + 1) for s in shifts}
    b = {(n, s): [TwistedCochain.from_vector(n, s, r) for r in _twisted_rows(p, n - 1, s, cap) if r]
         for n in range(1, max_degree + 1) for s in shifts}
    for (n1, s1), fs in z.items():
        for (n2, s2), gs in z.items():
            if n1 + n2 > max_degree:
                continue
            for f in fs:
                for g in gs:
                    rep.checked += 1
                    if not twisted_differential(cup_product(f, g, p), p).is_zero():
                        rep.fail(chain=f"({n1},{s1}) x ({n2},{s2})", arity=2, term="not a cocycle", coefficient=1)
                for g in b.get((n2, s2), []):
                    for h in (cup_product(f, g, p), cup_product(g, f, p)):
                        rep.checked += 1
                        if not is_coboundary(h, p, cap):
                            rep.fail(chain=f"({n1},{s1}) x ({n2},{s2})", arity=2,
                                     term="cocycle times coboundary is not exact", coefficient=1)
    return rep
