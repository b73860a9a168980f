"""Random monomial presentations: every closed formula against its oracle."""
import itertools

from hypothesis import HealthCheck, given, settings, strategies as st

from minmodel.bar import homology_dims
from minmodel.chains import all_chains, betti, chain_from_monomial, chain_from_splitting
from minmodel.hochschild import check_maurer_cartan, classical_hh_dims, hh_dims, twisted_d_squared
from minmodel.model import verify_b_squared, verify_ext_duality, verify_transfer_equivalence
from minmodel.presentation import (
    Arrow, Presentation, Quiver, is_normal, max_normal_weight, normal_basis, zero_minimally,
)
from minmodel.verify import (
    verify_coalgebra_relations, verify_ext_relations, verify_morse_oracle, verify_retract,
)

SETTINGS = settings(max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])


def _antichain(words):
    words = sorted(set(words), key=len)
    out = []
    for w in words:
        if not any(any(w[i:i + len(u)] == u for i in range(len(w) - len(u) + 1)) for u in out):
            out.append(w)
    return out


@st.composite
def one_vertex(draw):
    n = draw(st.integers(1, 2))
    words = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=2, max_size=4).map(tuple),
                          min_size=1, max_size=3))
    q = Quiver(("1",), tuple(Arrow("xyz"[i], "1", "1") for i in range(n)))
    return Presentation(q, frozenset(_antichain(words)))


@st.composite
def small_quiver(draw):
    # arrows between two or three vertices; relations drawn from composable paths
    nv = draw(st.integers(2, 3))
    verts = tuple(str(i + 1) for i in range(nv))
    edges = draw(st.lists(st.tuples(st.sampled_from(verts), st.sampled_from(verts)),
                          min_size=1, max_size=3, unique=True))
    q = Quiver(verts, tuple(Arrow(f"a{i}", s, t) for i, (s, t) in enumerate(edges)))
    paths = [w for k in (2, 3) for w in itertools.product(range(len(edges)), repeat=k)
             if q.is_composable(w)]
    rels = draw(st.lists(st.sampled_from(paths), max_size=3)) if paths else []
    return Presentation(q, frozenset(_antichain(rels)))


presentations = st.one_of(one_vertex(), small_quiver())


@SETTINGS
@given(presentations)
def test_betti_equals_homology(p):
    assert betti(p, 6) == homology_dims(p, 6)


@SETTINGS
@given(presentations)
def test_retract_and_morse(p):
    assert verify_retract(p, 5).passed
    assert verify_morse_oracle(p, 4).passed


@SETTINGS
@given(presentations)
def test_transfer_equals_closed_form(p):
    rep = verify_transfer_equivalence(p, 7, 4)
    assert rep.passed, rep.counterexamples[:2]


@SETTINGS
@given(presentations)
def test_b_squared(p):
    rep = verify_b_squared(p, 8)
    assert rep.passed, rep.counterexamples[:2]


@SETTINGS
@given(presentations)
def test_b_squared_parity_rule(p):
    assert verify_b_squared(p, 8, signs="parity").passed


@SETTINGS
@given(presentations)
def test_model_identities(p):
    assert verify_ext_duality(p, 7, 4).passed
    assert check_maurer_cartan(p, 8).passed
    assert verify_coalgebra_relations(p, 8).passed
    assert verify_ext_relations(p, 7).passed


@SETTINGS
@given(presentations)
def test_chain_invariants(p):
    for c in all_chains(p, 7):
        seg = c.splitting
        assert sum(seg, ()) == c.monomial
        assert len(seg[0]) == 1
        assert chain_from_splitting(seg, p) == c
        assert chain_from_monomial(c.monomial, c.length, p) == c
        for u, v in zip(seg, seg[1:]):
            assert is_normal(u, p) and zero_minimally(u, v, p)


@SETTINGS
@given(presentations)
def test_normal_basis_is_relation_free(p):
    for k, words in enumerate(normal_basis(p, 5), start=1):
        for w in words:
            assert len(w) == k and p.quiver.is_composable(w)
            assert not any(w[i:i + len(r)] == r for r in p.relations for i in range(len(w)))
        assert len(set(words)) == len(words)
    assert all(not any(r != s and any(s[i:i + len(r)] == r for i in range(len(s)))
                       for s in p.relations) for r in p.relations)


@settings(max_examples=30, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
@given(presentations)
def test_twisted_d_squared(p):
    rep = twisted_d_squared(p, 3, range(-4, 5))
    assert rep.passed, rep.counterexamples[:2]


@settings(max_examples=30, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
@given(presentations)
def test_twisted_complex_parity_rule(p):
    shifts = range(-4, 5)
    assert twisted_d_squared(p, 3, shifts, signs="parity").passed
    top = max_normal_weight(p)
    if top is not None and top <= 4:
        expected = classical_hh_dims(p, 2, shifts)
        assert hh_dims(p, 2, shifts) == expected
        assert hh_dims(p, 2, shifts, signs="parity") == expected
