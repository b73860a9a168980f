"""Exact rank of sparse integer matrices."""
from __future__ import annotations

from math import gcd


class LimitError(RuntimeError):
    """A homogeneous block is larger than the configured cap."""


def check_cap(size: int, cap: int | None, what: str = "block") -> None:
    if cap is not None and size > cap:
        raise LimitError(f"{what} of dimension {size} exceeds cap {cap}")


def rank(rows) -> int:
    """Rank over the rationals of an integer matrix given as sparse rows.

    ``rows`` is an iterable of ``{column: value}`` dicts.  Elimination is
    fraction-free: a row is updated as ``p*row - a*pivot_row`` and then divided
    by the gcd of its entries, so every intermediate stays integral and small.
    Unit pivots are preferred, which keeps the usual ``{-1, 0, 1}`` matrices exact
    without any growth.
    """
    work = [dict(r) for r in rows if any(r.values())]
    for r in work:
        for k in [k for k, v in r.items() if v == 0]:
            del r[k]
    # column -> set of row ids holding a nonzero there
    cols: dict = {}
    for i, r in enumerate(work):
        for c in r:
            cols.setdefault(c, set()).add(i)
    alive = set(range(len(work)))
    rk = 0
    while alive:
        best = None
        for i in alive:
            r = work[i]
            for c, v in r.items():
                score = (abs(v) != 1, len(cols[c]), len(r))
                if best is None or score < best[0]:
                    best = (score, i, c)
            if best is not None and best[0][0] is False and best[0][1] == 1:
                break
        if best is None:
            break
        _, i, c = best
        prow = work[i]
        pv = prow[c]
        alive.discard(i)
        for k in prow:
            cols[k].discard(i)
        rk += 1
        for j in list(cols[c]):
            r = work[j]
            a = r[c]
            g = gcd(pv, a)
            mp, ma = pv // g, a // g
            if mp != 1:
                for k in r:
                    r[k] *= mp
            for k, v in prow.items():
                nv = r.get(k, 0) - ma * v
                if nv:
                    if k not in r:
                        cols[k].add(j)
                    r[k] = nv
                elif k in r:
                    del r[k]
                    cols[k].discard(j)
            if not r:
                alive.discard(j)
                continue
            cont = 0
            for v in r.values():
                cont = gcd(cont, v)
                if cont == 1:
                    break
            if cont > 1:
                for k in r:
                    r[k] //= cont
    return rk


def left_kernel(rows) -> list[dict]:
    """Integer basis of ``{x : sum_i x_i rows[i] = 0}`` as ``{i: coeff}`` dicts."""
    from fractions import Fraction

    n = len(rows)
    eqs: dict = {}
    for i, r in enumerate(rows):
        for c, v in r.items():
            if v:
                eqs.setdefault(c, {})[i] = Fraction(v)
    pivots: dict = {}  # pivot variable -> reduced equation
    for eq in eqs.values():
        for pv, prow in pivots.items():
            a = eq.get(pv)
            if a:
                for k, v in prow.items():
                    nv = eq.get(k, 0) - a * v
                    if nv:
                        eq[k] = nv
                    else:
                        eq.pop(k, None)
        if not eq:
            continue
        pv = min(eq)
        inv = 1 / eq[pv]
        eq = {k: v * inv for k, v in eq.items()}
        for prow in pivots.values():
            a = prow.get(pv)
            if a:
                for k, v in eq.items():
                    nv = prow.get(k, 0) - a * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivots[pv] = eq
    out = []
    for free in range(n):
        if free in pivots:
            continue
        vec = {free: Fraction(1)}
        for pv, prow in pivots.items():
            a = prow.get(free)
            if a:
                vec[pv] = -a
        den = 1
        for v in vec.values():
            den = den * v.denominator // gcd(den, v.denominator)
        out.append({k: int(v * den) for k, v in sorted(vec.items())})
    return out
