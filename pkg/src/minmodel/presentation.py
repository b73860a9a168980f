"""Monomial quiver algebra presentations.

A monomial is stored as a tuple of arrow indices (positions in the declared
arrow order), so comparing ``(len(m), m)`` is the degree-lexicographic order.
Paths compose left to right: in ``x y`` the target of ``x`` is the source of ``y``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

Monomial = tuple  # tuple[int, ...]


class PresentationError(ValueError):
    """Invalid presentation data (not a syntax problem)."""


class ParseError(PresentationError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex ids")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate arrow ids")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise PresentationError(f"arrow {a.name!r} uses an undeclared vertex")

    @cached_property
    def index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}

    def source(self, m: Monomial) -> str:
        return self.arrows[m[0]].source

    def target(self, m: Monomial) -> str:
        return self.arrows[m[-1]].target

    def is_composable(self, m: Iterable[int]) -> bool:
        m = tuple(m)
        return all(self.arrows[a].target == self.arrows[b].source for a, b in zip(m, m[1:]))

    def composable(self, u: Monomial, v: Monomial) -> bool:
        return self.arrows[u[-1]].target == self.arrows[v[0]].source


@dataclass(frozen=True)
class Presentation:
    quiver: Quiver
    relations: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        rels = frozenset(tuple(r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        for r in rels:
            if len(r) < 2:
                raise PresentationError(f"relation {self.render(r)!r} has weight < 2")
            if not self.quiver.is_composable(r):
                raise PresentationError(f"relation {self.render(r)!r} is not a composable path")
        for r1 in rels:
            for r2 in rels:
                if r1 != r2 and _is_subword(r1, r2):
                    raise PresentationError(
                        f"relation {self.render(r1)!r} divides relation {self.render(r2)!r}"
                    )

    @cached_property
    def _relation_lengths(self) -> tuple[int, ...]:
        return tuple(sorted({len(r) for r in self.relations}))

    @cached_property
    def max_relation_length(self) -> int:
        return max(self._relation_lengths, default=0)

    def sorted_relations(self) -> list[Monomial]:
        return sorted(self.relations, key=lambda r: (len(r), r))

    def ends_with_relation(self, m: Monomial) -> bool:
        """True if some relation is a suffix of ``m``."""
        n = len(m)
        for L in self._relation_lengths:
            if L > n:
                break
            if m[n - L:] in self.relations:
                return True
        return False

    def relation_suffix(self, m: Monomial) -> Monomial | None:
        n = len(m)
        for L in self._relation_lengths:
            if L > n:
                break
            if m[n - L:] in self.relations:
                return m[n - L:]
        return None

    def render(self, m: Iterable[int]) -> str:
        return render_monomial(self.quiver, tuple(m))

    def monomial(self, text: str) -> Monomial:
        """Parse a word such as ``"x x y"``, ``"t^3"`` or ``"xxy"`` (single-letter arrows)."""
        return _parse_word(self.quiver, text, 1, 1)


def _is_subword(u: Monomial, m: Monomial) -> bool:
    n, k = len(m), len(u)
    return any(m[i:i + k] == u for i in range(n - k + 1))


def is_normal(m: Monomial, p: Presentation) -> bool:
    """True iff no relation of ``p`` occurs as a contiguous subword of ``m``."""
    m = tuple(m)
    rels = p.relations
    for L in p._relation_lengths:
        for i in range(len(m) - L + 1):
            if m[i:i + L] in rels:
                return False
    return True


def zero_minimally(u: Monomial, v: Monomial, p: Presentation) -> bool:
    """``uv`` is reducible while ``uv'`` is normal for every proper prefix ``v'`` of ``v``.

    Both arguments must be normal; then only relations ending inside ``v`` matter.
    """
    if not p.quiver.composable(u, v):
        raise PresentationError(
            f"{p.render(u)!r} and {p.render(v)!r} are not composable"
        )
    w = u + v
    n = len(u)
    for k in range(1, len(v)):
        if p.ends_with_relation(w[:n + k]):
            return False
    return p.ends_with_relation(w)


def normal_words(p: Presentation, weight: int) -> list[Monomial]:
    """Normal monomials of exactly ``weight``, in deglex order."""
    return normal_basis(p, weight)[weight - 1] if weight >= 1 else []


def normal_basis(p: Presentation, max_weight: int) -> list[list[Monomial]]:
    """Normal monomials of weight ``1..max_weight`` grouped by weight, deglex within a group."""
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    q = p.quiver
    layer = [(i,) for i in range(len(q.arrows))]
    out = [layer]
    for _ in range(max_weight - 1):
        nxt = []
        for m in layer:
            t = q.arrows[m[-1]].target
            for j, a in enumerate(q.arrows):
                if a.source == t:
                    w = m + (j,)
                    if not p.ends_with_relation(w):
                        nxt.append(w)
        nxt.sort()
        out.append(nxt)
        layer = nxt
    return out


def composable_words(q: Quiver, weight: int) -> list[Monomial]:
    """All paths of the given length, in lexicographic order."""
    layer = [(i,) for i in range(len(q.arrows))]
    for _ in range(weight - 1):
        layer = [
            m + (j,)
            for m in layer
            for j, a in enumerate(q.arrows)
            if a.source == q.arrows[m[-1]].target
        ]
    return layer


def max_normal_weight(p: Presentation) -> int | None:
    """Largest weight of a normal monomial, or ``None`` when the algebra is infinite-dimensional."""
    L = max(p.max_relation_length, 2)
    probe = normal_basis(p, L - 1)
    # A normal word longer than (#states + L) revisits a suffix state, so it pumps.
    bound = len(probe[-1]) + L + 1
    basis = normal_basis(p, bound)
    for w in range(bound, 0, -1):
        if basis[w - 1]:
            return None if w == bound else w
    return 0


# ---------------------------------------------------------------------------
# rendering

def render_monomial(q: Quiver, m: Monomial) -> str:
    single = all(len(a.name) == 1 for a in q.arrows)
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        name = q.arrows[m[i]].name
        k = j - i
        if k == 1:
            parts.append(name)
        elif name[-1].isdigit() or not single:
            parts.append(f"{name}^{k}")
        else:
            parts.append(f"{name}{k}")
        i = j
    return ("" if single else " ").join(parts)


def render_bar(q: Quiver, segments: Iterable[Monomial]) -> str:
    return "[" + "|".join(render_monomial(q, s) for s in segments) + "]"


# ---------------------------------------------------------------------------
# parsing

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


@dataclass
class Document:
    presentation: Presentation
    directives: tuple[str, ...] = ()


def parse_presentation(text: str) -> Presentation:
    return parse_document(text).presentation


def parse_document(text: str) -> Document:
    """Parse the ``vertex ...; arrows ...; relations ...`` text format.

    Statements are separated by ``;`` or newlines and ``#`` starts a comment.
    ``arrows`` may omit ``:src->tgt`` for one-vertex algebras, and when the
    ``arrows`` statement is absent the arrows are read off the relations.
    """
    statements = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0]
        col = 0
        for chunk in code.split(";"):
            stripped = chunk.strip()
            if stripped:
                offset = col + (len(chunk) - len(chunk.lstrip())) + 1
                statements.append((stripped, lineno, offset))
            col += len(chunk) + 1

    vertices: list[str] | None = None
    arrow_specs: list[tuple[str, str | None, str | None, int, int]] | None = None
    relation_texts: list[tuple[str, int, int]] = []
    directives: list[str] = []
    seen = set()
    for stmt, line, col in statements:
        head, _, rest = stmt.partition(" ")
        key = head.lower()
        rest_col = col + len(head) + 1
        if key in seen:
            raise ParseError(f"duplicate {key!r} statement", line, col)
        if key in ("vertex", "vertices"):
            seen.add(key)
            vertices = [v.strip() for v in rest.split(",") if v.strip()]
            if not vertices:
                raise ParseError("empty vertex list", line, rest_col)
        elif key == "arrows":
            seen.add(key)
            arrow_specs = []
            for item, icol in _split_items(rest, rest_col):
                m = re.fullmatch(r"\s*([^:\s]+)\s*(?::\s*(\S+?)\s*->\s*(\S+)\s*)?", item)
                if not m or not _NAME.fullmatch(m.group(1)):
                    raise ParseError(f"bad arrow declaration {item.strip()!r}", line, icol)
                arrow_specs.append((m.group(1), m.group(2), m.group(3), line, icol))
        elif key == "relations":
            seen.add(key)
            relation_texts = [(item, line, icol) for item, icol in _split_items(rest, rest_col)]
        elif key == "sabotage":
            directives.extend(v.strip() for v in rest.split(",") if v.strip())
        else:
            raise ParseError(f"unknown statement {head!r}", line, col)

    if arrow_specs is None:
        names: list[str] = []
        for item, line, icol in relation_texts:
            for tok, tcol in _tokens(item, icol):
                name = tok.split("^")[0]
                if not _NAME.fullmatch(name):
                    raise ParseError(f"bad arrow name {name!r}", line, tcol)
                if name not in names:
                    names.append(name)
        arrow_specs = [(n, None, None, 0, 0) for n in names]

    if vertices is None:
        vertices = sorted({v for _, s, t, _, _ in arrow_specs for v in (s, t) if v}) or ["1"]
    arrows = []
    for name, s, t, line, col in arrow_specs:
        if (s is None) != (t is None):
            raise ParseError(f"arrow {name!r} needs both source and target", line, col)
        if s is None:
            if len(vertices) != 1:
                raise ParseError(f"arrow {name!r} needs source->target with several vertices", line, col)
            s = t = vertices[0]
        if s not in vertices or t not in vertices:
            raise ParseError(f"arrow {name!r} uses an undeclared vertex", line, col)
        arrows.append(Arrow(name, s, t))
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except PresentationError as exc:
        raise ParseError(str(exc), 1, 1) from None

    rels = []
    for item, line, icol in relation_texts:
        word = _parse_word(quiver, item, line, icol)
        if len(word) < 2:
            raise ParseError(f"relation {item.strip()!r} has weight < 2", line, icol)
        if not quiver.is_composable(word):
            raise ParseError(f"relation {item.strip()!r} is not a composable path", line, icol)
        rels.append((word, line, icol))
    for w1, l1, c1 in rels:
        for w2, l2, c2 in rels:
            if w1 != w2 and _is_subword(w1, w2):
                raise PresentationError(
                    "divisor violation: relation "
                    f"{render_monomial(quiver, w1)!r} (line {l1}, column {c1}) divides "
                    f"{render_monomial(quiver, w2)!r} (line {l2}, column {c2})"
                )
    return Document(Presentation(quiver, frozenset(w for w, _, _ in rels)), tuple(directives))


def _split_items(text: str, col: int):
    pos = 0
    for piece in text.split(","):
        lead = len(piece) - len(piece.lstrip())
        if piece.strip():
            yield piece, col + pos + lead
        pos += len(piece) + 1


def _tokens(text: str, col: int):
    for m in re.finditer(r"\S+", text):
        yield m.group(0), col + m.start()


def _parse_word(q: Quiver, text: str, line: int, col: int) -> Monomial:
    idx = q.index
    word: list[int] = []
    for tok, tcol in _tokens(text, col):
        name, caret, exp = tok.partition("^")
        if caret:
            if not exp.isdigit() or int(exp) < 1:
                raise ParseError(f"bad exponent in {tok!r}", line, tcol)
            reps = int(exp)
        else:
            reps = 1
        if name in idx:
            word.extend([idx[name]] * reps)
        elif not caret and all(len(a.name) == 1 for a in q.arrows) and all(c in idx for c in name):
            word.extend(idx[c] for c in name)
        else:
            m = re.fullmatch(r"([A-Za-z_])(\d+)", name)
            if not caret and m and m.group(1) in idx and all(len(a.name) == 1 for a in q.arrows):
                word.extend([idx[m.group(1)]] * int(m.group(2)))
            else:
                raise ParseError(f"unknown arrow {name!r}", line, tcol)
    if not word:
        raise ParseError("empty word", line, col)
    return tuple(word)
