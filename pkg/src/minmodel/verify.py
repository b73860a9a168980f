"""Verification suites: every closed formula against an independent computation."""
from __future__ import annotations

from .bar import (
    _add, apply_linear, bar_differential, bar_terms, build_morse_graph, deconcatenation,
    homology_dims, homotopy_h, inclusion_i, is_attached, path_weights_from, projection_p,
)
from math import comb

from .chains import all_chains, betti
from .hochschild import check_maurer_cartan, classical_hh_dims, hh_dims, twisted_d_squared
from .model import (
    _chain_on, coproduct, ext_product, verify_b_squared, verify_ext_duality, verify_transfer_equivalence,
)
from .presentation import Presentation, render_bar, zero_minimally
from .report import Report


def _r(p, t) -> str:
    return render_bar(p.quiver, t)


def verify_betti_homology(p: Presentation, max_weight: int, cap=None, jobs: int = 1) -> Report:
    rep = Report("betti_vs_homology")
    a = betti(p, max_weight)
    h = homology_dims(p, max_weight, cap=cap, jobs=jobs)
    for key in sorted(set(a) | set(h)):
        rep.checked += 1
        if a[key] != h[key]:
            rep.fail(chain=f"(n={key[0]}, w={key[1]})", arity=0, term="betti - homology",
                     coefficient=a[key] - h[key])
    return rep


def _combine(*terms) -> dict:
    out: dict = {}
    for sign, x in terms:
        for t, c in x.items():
            _add(out, t, sign * c)
    return out


def verify_retract(p: Presentation, max_weight: int) -> Report:
    """``p i = 1``, ``i p - 1 = d h + h d``, ``h h = h i = p h = 0`` on all bar terms."""
    rep = Report("retract")
    d = lambda t: bar_differential(t, p)  # noqa: E731
    h = lambda t: homotopy_h(t, p)  # noqa: E731
    pr = lambda t: projection_p(t, p)  # noqa: E731
    for c in all_chains(p, max_weight):
        rep.checked += 1
        t = inclusion_i(c)
        if pr(t) != {t: 1}:
            rep.fail(chain=c.render(p), arity=0, term="p i - 1", coefficient=1)
        if h(t):
            rep.fail(chain=c.render(p), arity=0, term="h i", coefficient=1)
    for w in range(1, max_weight + 1):
        for deg in range(1, w + 1):
            for t in bar_terms(p, deg, w):
                rep.checked += 1
                ht = h(t)
                res = _combine((1, pr(t)), (-1, {t: 1}), (-1, apply_linear(d, ht)), (-1, apply_linear(h, d(t))))
                for u, v in res.items():
                    rep.fail(chain=_r(p, t), arity=0, term=f"(ip - 1 - dh - hd) -> {_r(p, u)}", coefficient=v)
                for name, val in (("h h", apply_linear(h, ht)), ("p h", apply_linear(pr, ht))):
                    for u, v in val.items():
                        rep.fail(chain=_r(p, t), arity=0, term=f"{name} -> {_r(p, u)}", coefficient=v)
    return rep


def verify_morse_oracle(p: Presentation, max_weight: int) -> Report:
    """Closed-form ``h`` and ``p`` against path sums in the explicit Morse graph."""
    rep = Report("morse_oracle")
    for w in range(1, max_weight + 1):
        for deg in range(1, w + 1):
            g = build_morse_graph(p, deg, w)
            expect_crit = {t for t in g.vertices if len(t) == deg and _fully_attached(t, p)}
            got_crit = {t for t in g.critical if len(t) == deg}
            if expect_crit != got_crit:
                rep.fail(chain=f"(deg={deg}, w={w})", arity=0, term="critical vertices", coefficient=1)
            for t in bar_terms(p, deg, w):
                rep.checked += 1
                gamma = path_weights_from(g, t)
                pt = {v: c for v, c in gamma.items() if len(v) == deg and v in g.critical}
                ht = {v: c for v, c in gamma.items() if len(v) == deg + 1}
                for name, closed, oracle in (("p", projection_p(t, p), pt), ("h", homotopy_h(t, p), ht)):
                    for u in set(closed) | set(oracle):
                        a, b = closed.get(u, 0), oracle.get(u, 0)
                        if a != b:
                            rep.fail(chain=_r(p, t), arity=0, term=f"{name} -> {_r(p, u)}", coefficient=a - b)
    return rep


def _fully_attached(t, p) -> bool:
    return len(t[0]) == 1 and all(zero_minimally(u, v, p) for u, v in zip(t, t[1:]))


def verify_exchange_rule(p: Presentation, max_weight: int) -> Report:
    """``Delta'_2 h - (h (x) 1) Delta'_2`` lands in chains (x) BA on attached terms,
    and ``(h (x) 1) Delta'_2 h`` vanishes there."""
    rep = Report("exchange_rule")

    def dec(x):
        out: dict = {}
        for t, c in x.items():
            for a, b in deconcatenation(t):
                _add(out, (a, b), c)
        return out

    def h1(x):
        out: dict = {}
        for (a, b), c in x.items():
            for u, k in homotopy_h(a, p).items():
                _add(out, (u, b), c * k)
        return out

    for w in range(1, max_weight + 1):
        for deg in range(1, w + 1):
            for t in bar_terms(p, deg, w):
                if not is_attached(t, p):
                    continue
                rep.checked += 1
                ht = homotopy_h(t, p)
                diff = _combine((1, dec(ht)), (-1, h1(dec({t: 1}))))
                for (a, b), v in diff.items():
                    if not _fully_attached(a, p):
                        rep.fail(chain=_r(p, t), arity=2, term=f"{_r(p, a)} (x) {_r(p, b)}", coefficient=v)
                for (a, b), v in h1(dec(ht)).items():
                    rep.fail(chain=_r(p, t), arity=2, term=f"(h(x)1)D h: {_r(p, a)} (x) {_r(p, b)}", coefficient=v)
    return rep


def verify_hh_oracle(p: Presentation, max_degree: int, shifts, cap=None, signs: str = "binomial") -> Report:
    rep = Report("hochschild_oracle")
    tw = hh_dims(p, max_degree, shifts, cap, signs)
    cl = classical_hh_dims(p, max_degree, shifts, cap)
    for key in sorted(set(tw) | set(cl)):
        rep.checked += 1
        if tw.get(key, 0) != cl.get(key, 0):
            rep.fail(chain=f"(degree={key[0]}, shift={key[1]})", arity=0, term="twisted - classical",
                     coefficient=tw.get(key, 0) - cl.get(key, 0))
    sq = twisted_d_squared(p, max_degree, shifts, signs)
    rep.checked += sq.checked
    rep.counterexamples += sq.counterexamples
    return rep


def verify_coalgebra_relations(p: Presentation, max_weight: int) -> Report:
    """The Stasheff identities for the coproducts.

    With ``D_n = (-1)^C(n-1, 2) Delta_n`` and ``|c| = length + 1``, every
    ``sum (-1)^(i + jk + (j-2)|x_1...x_i|) (1^i (x) D_j (x) 1^k) D_(i+1+k)``
    must vanish.
    """
    rep = Report("coalgebra_relations")

    def d(c, n):
        return {w: v * (-1) ** comb(n - 1, 2) for w, v in coproduct(c, n, p).items()}

    for c in all_chains(p, max_weight):
        for n in range(3, c.weight + 1):
            rep.checked += 1
            out: dict = {}
            for m in range(2, n):
                j = n - m + 1
                for word, a in d(c, m).items():
                    deg = 0
                    for i, g in enumerate(word):
                        k = m - 1 - i
                        for inner, b in d(g, j).items():
                            e = i + j * k + (j - 2) * deg
                            _add(out, word[:i] + inner + word[i + 1:], (-1) ** e * a * b)
                        deg += g.length + 1
            for word, v in out.items():
                rep.fail(chain=c.render(p), arity=n, term=" (x) ".join(g.render(p) for g in word), coefficient=v)
    return rep


def _factorizations(c, p):
    m = c.monomial

    def grow(start):
        if start == len(m):
            yield ()
            return
        for end in range(start + 1, len(m) + 1):
            g = _chain_on(m[start:end], p)
            if g is not None:
                for rest in grow(end):
                    yield (g,) + rest

    return grow(0)


def verify_ext_relations(p: Presentation, max_weight: int) -> Report:
    """The Stasheff identities ``sum (-1)^(i + jk + j|x_1...x_i|) mu(1^i (x) mu_j (x) 1^k) = 0``
    for the Ext products, with ``|c^v| = length + 1``, checked on every tuple of
    chains whose concatenation is a chain."""
    rep = Report("ext_relations")
    for c in all_chains(p, max_weight):
        if c.length < 1:
            continue
        for xs in _factorizations(c, p):
            n = len(xs)
            if n < 3:
                continue
            rep.checked += 1
            total = 0
            for j in range(2, n):
                for i in range(n - j + 1):
                    inner = ext_product(xs[i:i + j], p)
                    if inner is None:
                        continue
                    outer = ext_product(xs[:i] + (inner[1],) + xs[i + j:], p)
                    if outer is None or outer[1] != c:
                        continue
                    deg = sum(x.length + 1 for x in xs[:i])
                    total += (-1) ** (i + j * (n - i - j) + j * deg) * inner[0] * outer[0]
            if total:
                rep.fail(chain=c.render(p), arity=n, term=" (x) ".join(x.render(p) for x in xs), coefficient=total)
    return rep


def verify_subcoalgebra(a: Presentation, b: Presentation, max_weight: int) -> Report:
    """Chains of ``a`` stay chains of ``b``, with the same decompositions and coproducts.

    Arrows are matched by name, so the two presentations may order them differently.
    """
    rep = Report("subcoalgebra")
    names = lambda p, c: tuple(tuple(p.quiver.arrows[i].name for i in seg) for seg in c.splitting)  # noqa: E731
    b_chains = {names(b, c): c for c in all_chains(b, max_weight)}
    for c in all_chains(a, max_weight):
        rep.checked += 1
        cb = b_chains.get(names(a, c))
        if cb is None:
            rep.fail(chain=c.render(a), arity=0, term="not a chain of the larger presentation", coefficient=1)
            continue
        for n in range(2, c.weight + 1):
            ca = {tuple(names(a, g) for g in k): v for k, v in coproduct(c, n, a).items()}
            cbn = {tuple(names(b, g) for g in k): v for k, v in coproduct(cb, n, b).items()}
            if ca != cbn:
                rep.fail(chain=c.render(a), arity=n, term="coproduct differs", coefficient=1)
    return rep


def run_battery(p: Presentation, max_weight: int = 8, max_arity: int = 5, max_degree: int = 3,
                shifts=range(-8, 9), cap=None, jobs: int = 1, sabotage=(), signs: str = "binomial") -> list[Report]:
    """All suites at the given bounds except the Hochschild oracle, which
    needs a finite-dimensional algebra and is left to the caller."""
    reps = [
        verify_betti_homology(p, max_weight, cap=cap, jobs=jobs),
        verify_retract(p, min(max_weight, 8)),
        verify_morse_oracle(p, min(max_weight, 6)),
        verify_exchange_rule(p, min(max_weight, 8)),
        verify_transfer_equivalence(p, max_weight, max_arity),
        verify_b_squared(p, max_weight, sabotage, signs),
        verify_ext_duality(p, max_weight, max_arity),
        verify_coalgebra_relations(p, max_weight),
        verify_ext_relations(p, min(max_weight, 8)),
        check_maurer_cartan(p, max_weight, sabotage),
    ]
    return reps
