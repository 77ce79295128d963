import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cuberes.braid_model import (BraidWord, ResolutionAssignment, build_decorated_diagram, graph_from_events,
                                 resolve)
from cuberes.gallery import GALLERY, displayed_identity_check
from cuberes.groebner import gb_of
from cuberes.ideal_gen import linear_ideal, quadratic_ideal
from cuberes.sym_identity import (check_theorem2, comp_hom, cube_identity_certificate, elem_sym,
                                  lemma_identity_report, nonlocal_membership_certificate)

from conftest import to_sympy


def test_elem_and_complete_match_sympy():
    syms = sympy.symbols("y0:4")
    ys = [0, 1, 1, 3]
    for k in range(6):
        e = elem_sym(ys, k, 4)
        h = comp_hom(ys, k, 4)
        vals = [syms[i] for i in ys]
        e_ref = sum((sympy.Mul(*c) for c in combinations(vals, k)), sympy.Integer(0)) if k <= 4 else 0
        h_ref = sympy.Poly(sympy.series(sympy.Mul(*[1 / (1 - v * sympy.Symbol("t")) for v in vals]),
                                        sympy.Symbol("t"), 0, k + 1).removeO(), sympy.Symbol("t")).coeff_monomial(
            sympy.Symbol("t") ** k)
        assert sympy.expand(to_sympy(e, syms) - e_ref) == 0
        assert sympy.expand(to_sympy(h, syms) - h_ref) == 0
    assert comp_hom([], 0, 1).degree() == 0
    assert elem_sym([0], -1, 1).is_zero()


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("n", range(1, 7))
def test_alternating_identities(m, n):
    rep = lemma_identity_report(m, n)
    assert rep["one"] and rep["two"]


def test_displayed_decomposition():
    rep = displayed_identity_check()
    assert rep["verifies"] and rep["matches_certificate"]
    assert rep["printed_sign_verifies"] is False


def test_figure5_cube_certificate():
    S = GALLERY["figure5"]()
    cert = cube_identity_certificate(S)
    assert cert.identity_holds and cert.verified
    assert [t.kind for t in cert.terms].count("L") == 4


def _random_graph(rng: random.Random):
    if rng.random() < 0.7:
        s = rng.randint(2, 4)
        letters = list(range(1, s)) + [rng.randint(1, s - 1) for _ in range(rng.randint(0, 3))]
        rng.shuffle(letters)
        w = BraidWord(s, tuple(x * rng.choice([1, -1]) for x in letters))
        d = build_decorated_diagram(w)
        I = ResolutionAssignment(tuple(rng.randint(0, 1) for _ in range(d.n)))
        return f"{w}|{I}", resolve(d, I)
    P = rng.randint(2, 4)
    k = rng.randint(0, P - 1)
    ev = [(rng.choice("XV"), 0, j) for j in range(rng.randint(1, 5))]
    ev = [("X", rng.randint(1, P - 1), j) if t == "X" else ("V", rng.randint(1, P), j) for t, _, j in ev]
    return f"events{P},{k},{ev}", graph_from_events(P, k, ev)


def test_certificates_on_random_graphs():
    rng = random.Random(11)
    checked = 0
    for _ in range(100):
        label, S = _random_graph(rng)
        if not S.vertices:
            continue
        gb = gb_of(linear_ideal(S) + quadratic_ideal(S))
        for size in range(1, min(3, len(S.vertices)) + 1):
            for W in combinations(range(len(S.vertices)), size):
                cert = nonlocal_membership_certificate(S, W)
                assert cert.identity_holds, (label, W)
                if not cert.uses_special:
                    assert gb.contains(cert.target), (label, W)
        checked += 1
    assert checked >= 90


def test_disconnected_subset_telescopes():
    S = GALLERY["figure5"]()
    # pick two vertices with no common edge if there is such a pair
    pairs = [W for W in combinations(range(len(S.vertices)), 2)
             if not set(S.vertices[W[0]].out + S.vertices[W[0]].inn) & set(S.vertices[W[1]].out + S.vertices[W[1]].inn)]
    for W in pairs:
        cert = nonlocal_membership_certificate(S, W)
        assert cert.identity_holds and any("components" in n for n in cert.notes)


def test_empty_subset_rejected():
    with pytest.raises(ValueError):
        nonlocal_membership_certificate(GALLERY["kink"](), [])


@pytest.mark.parametrize("name", ["figure5", "figure4", "kink"])
def test_theorem2_gallery(name):
    rep = check_theorem2(GALLERY[name]())
    assert rep.holds and rep.verified + rep.skipped_special == rep.certificates


def test_certificate_doc():
    doc = cube_identity_certificate(GALLERY["kink"]()).to_doc()
    assert doc["verified"] in (True, False) and "terms" in doc


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_whole_graph_certificate_property(seed):
    _, S = _random_graph(random.Random(seed))
    if not S.vertices:
        return
    cert = nonlocal_membership_certificate(S, range(len(S.vertices)))
    assert cert.identity_holds
