from math import comb

import pytest

from conftest import P
from minmodel.chains import all_chains, chain_from_monomial
from minmodel.model import (
    b_squared, coproduct, decompositions, differential_b, exponent_b, exponent_b_parity, exponent_m, exponent_n,
    ext_from_coproduct, ext_product, koszul_shift, verify_b_squared, verify_ext_duality,
    verify_transfer_equivalence,
)
from minmodel.presentation import PresentationError

NAMES = ["t2", "t3", "t4", "x2_xy", "xyx", "a3"]


def ch(p, word, r):
    return chain_from_monomial(p.monomial(word), r, p)


def test_sign_exponent_values():
    assert exponent_n((0, 0, 0, 0)) == 16
    assert exponent_n((1, 0)) % 2 == 0 and exponent_n((0, 1)) % 2 == 0
    assert exponent_b((0, 0, 0, 0)) == 10
    assert exponent_m((0, 0)) == 3
    assert exponent_m((0, 0, 0)) == 6


def test_sign_exponents_consistent():
    for n in range(2, 7):
        for lens in [(r,) * n for r in range(3)] + [tuple(range(n)), tuple(reversed(range(n)))]:
            assert exponent_n(lens) == exponent_b(lens) + koszul_shift(lens)
            assert exponent_b(lens) == comb(n + 1, 2) + lens[0]


def test_decomposition_examples(fx):
    p = fx["t4"]
    t, t4, t5 = ch(p, "t", 0), ch(p, "t4", 1), ch(p, "t5", 2)
    assert [d.parts for d in decompositions(t4, 4, p)] == [(t, t, t, t)]
    assert {d.parts for d in decompositions(t5, 2, p)} == {(t4, t), (t, t4)}
    assert decompositions(t4, 2, p) == []
    assert decompositions(t4, 3, p) == []


def test_coproduct_examples(fx):
    p = fx["t4"]
    t, t4, t5 = ch(p, "t", 0), ch(p, "t4", 1), ch(p, "t5", 2)
    assert coproduct(t5, 2, p) == {(t, t4): 1, (t4, t): 1}
    assert coproduct(t4, 4, p) == {(t, t, t, t): 1}
    assert coproduct(t4, 3, p) == {}
    assert coproduct(t, 2, p) == {}


def test_b_examples(fx):
    p = fx["t4"]
    t, t4, t5 = ch(p, "t", 0), ch(p, "t4", 1), ch(p, "t5", 2)
    assert differential_b(t4, p) == {(t, t, t, t): 1}
    assert differential_b(t5, p) == {(t4, t): 1, (t, t4): -1}
    assert differential_b(t, p) == {}
    q = fx["a3"]
    ab = chain_from_monomial((0, 1), 1, q)
    a, b = chain_from_monomial((0,), 0, q), chain_from_monomial((1,), 0, q)
    assert differential_b(ab, q) == {(a, b): -1}


def test_ext_examples(fx):
    p = fx["x2_xy"]
    x, y = ch(p, "x", 0), ch(p, "y", 0)
    sign, g = ext_product((x, x), p)
    assert (sign, g.render(p)) == (-1, "[x|x]")
    assert ext_product((y, x), p) is None
    q = fx["t3"]
    t = ch(q, "t", 0)
    sign, g = ext_product((t, t, t), q)
    assert (sign, g.render(q)) == (1, "[t|t2]")


def test_ext_rejects_non_composable(fx):
    q = fx["a3"]
    a, b = chain_from_monomial((0,), 0, q), chain_from_monomial((1,), 0, q)
    with pytest.raises(PresentationError):
        ext_product((b, a), q)


@pytest.mark.parametrize("name", NAMES)
def test_transfer_equivalence(fx, name):
    p = fx[name]
    rep = verify_transfer_equivalence(p, 9 if len(p.quiver.arrows) == 1 else 8, 5)
    assert rep.passed, rep.counterexamples[:3]


@pytest.mark.parametrize("name", NAMES)
def test_b_squared(fx, name):
    rep = verify_b_squared(fx[name], 11)
    assert rep.passed, rep.counterexamples[:3]


def test_b_squared_by_hand(fx):
    p = fx["t4"]
    assert b_squared(ch(p, "t5", 2), p) == {}


def test_sabotaged_sign_is_caught(fx):
    p = fx["t4"]
    rep = verify_b_squared(p, 8, sabotage=("b-sign",))
    assert not rep.passed
    first = rep.counterexamples[0]
    assert first["chain"] == "[t|t3|t]" and first["coefficient"] == -2


@pytest.mark.parametrize("name", NAMES)
def test_ext_duality(fx, name):
    rep = verify_ext_duality(fx[name], 8, 6)
    assert rep.passed and rep.checked >= 1


@pytest.mark.parametrize("name", NAMES)
def test_structural_invariants(fx, name):
    p = fx[name]
    chains = {c.splitting for c in all_chains(p, 9)}
    for c in all_chains(p, 9):
        for n in range(2, c.weight + 1):
            for word, k in coproduct(c, n, p).items():
                assert abs(k) == 1
                assert all(g.splitting in chains for g in word)
                assert sum(g.weight for g in word) == c.weight
                # degree n - 2 with |g| = length + 1
                assert sum(g.length + 1 for g in word) == c.length + 1 + n - 2
        for word in differential_b(c, p):
            assert sum(g.length for g in word) == c.length - 1


@pytest.mark.parametrize("name", ["t2", "x2_xy"])
def test_quadratic_has_no_higher_structure(fx, name):
    p = fx[name]
    for c in all_chains(p, 9):
        for n in range(3, 7):
            assert coproduct(c, n, p) == {}
        for d in decompositions(c, 2, p):
            sign, g = ext_product(d.parts, p)
            # concatenation rule: the product is the concatenated chain
            assert g.monomial == d.parts[0].monomial + d.parts[1].monomial
            assert sign == (-1) ** exponent_m(d.lengths)


def test_t3_products(fx):
    p = fx["t3"]
    arities = set()
    for c in all_chains(p, 12):
        for n in range(2, 8):
            if coproduct(c, n, p):
                arities.add(n)
    assert arities == {2, 3}


def test_ext_from_coproduct_agrees_on_example(fx):
    q = fx["t3"]
    t = ch(q, "t", 0)
    assert ext_from_coproduct((t, t, t), q) == ext_product((t, t, t), q)


def test_monomial_with_two_bar_structures():
    # t^3 in k<t>/(t^2) has a single chain structure of each possible length
    p = P("arrows t; relations t t")
    c = ch(p, "t3", 2)
    assert c.render(p) == "[t|t|t]"
    assert ch(p, "t3", 1) is None


SUB_BASES = ["", "x x", "y y", "x x, y y"]


def _with_relations(rels):
    return P("arrows x, y" + (f"; relations {rels}" if rels else ""))


@pytest.mark.parametrize("rels", SUB_BASES)
def test_adding_xyx_restricts_coproducts(rels):
    from minmodel.verify import verify_subcoalgebra
    a = _with_relations(rels)
    b = _with_relations(", ".join(filter(None, [rels, "x y x"])))
    rep = verify_subcoalgebra(a, b, 8)
    assert rep.passed and rep.checked > 0


def test_subcoalgebra_needs_the_new_relation_to_fit():
    # adding yxy to (xyx): the old chain [x|yx|yx] is not a chain of the larger algebra
    from minmodel.verify import verify_subcoalgebra
    a = _with_relations("x y x")
    b = _with_relations("x y x, y x y")
    rep = verify_subcoalgebra(a, b, 8)
    assert not rep.passed


MIXED = "arrows x, y; relations x x x x, x x y"


def test_parity_rule(fx):
    assert [exponent_b_parity(L) % 2 for L in [(0, 0), (1, 0), (0, 0, 1), (0, 0, 0, 0)]] == [0, 1, 1, 0]
    for L in [(0, 0), (1, 0, 2), (0, 0, 0, 0), (2, 1, 0, 3, 1)]:
        assert (exponent_b(L) - exponent_b_parity(L) - comb(len(L), 2)) % 2 == 0
    for name in NAMES:
        assert verify_b_squared(fx[name], 11, signs="parity").passed
    assert verify_b_squared(P(MIXED), 11, signs="parity").passed
    with pytest.raises(ValueError):
        differential_b(ch(fx["t4"], "t4", 1), fx["t4"], signs="other")


def test_mixed_arities_meet_in_b_squared():
    # [x|x3] (x) [y] and [x] (x) [x] (x) [x|xy] both expand to [x]^4 (x) [y]
    p = P(MIXED)
    c = ch(p, "xxxxy", 2)
    x, y = ch(p, "x", 0), ch(p, "y", 0)
    assert set(differential_b(c, p)) == {(ch(p, "xxxx", 1), y), (x, x, ch(p, "xxy", 1))}
    assert set(b_squared(c, p)) <= {(x, x, x, x, y)}
    assert b_squared(c, p, signs="parity") == {}


@pytest.mark.parametrize("name", NAMES + ["mixed"])
def test_stasheff_relations(fx, name):
    from minmodel.verify import verify_coalgebra_relations, verify_ext_relations
    p = P(MIXED) if name == "mixed" else fx[name]
    assert verify_coalgebra_relations(p, 9).passed
    assert verify_ext_relations(p, 8).passed
