import pytest

from cuberes.braid_model import build_decorated_diagram, parse_braid_word
from cuberes.gallery import GALLERY
from cuberes.groebner import gb_of
from cuberes.ideal_gen import (SubsetExplosion, edge_ring_relations, in_out, linear_basis, linear_ideal,
                               linear_rank, nonlocal_ideal, quadratic_ideal)
from cuberes.poly_kernel import Polynomial

from conftest import resolution_graphs


def test_generator_counts():
    S = GALLERY["figure5"]()
    assert len(linear_ideal(S)) == len(S.four_valent())
    assert len(quadratic_ideal(S)) == len(S.vertices) - len(S.special)
    assert len(nonlocal_ideal(S)) == 2 ** len(S.vertices) - 1


def test_single_vertex_subsets_are_quadratic():
    S = GALLERY["figure5"]()
    N = nonlocal_ideal(S, cap=1)
    Q = quadratic_ideal(S)
    assert not N.complete
    assert {g for g in N.generators} >= set(Q.generators)


def test_subset_guard():
    S = GALLERY["figure5"]()
    with pytest.raises(SubsetExplosion):
        nonlocal_ideal(S, limit=2)
    assert nonlocal_ideal(S, cap=2, limit=2).complete is False


def test_linear_forms_homogeneous_degree_one():
    for _, S in resolution_graphs(3, 3):
        for g in linear_ideal(S).generators:
            assert g.degree() == 1 and sum(g.evaluate([1] * S.nedges) for _ in [0]) == 0


def test_in_out_of_whole_graph_is_loose_ends():
    for _, S in resolution_graphs(3, 3):
        In, Out = in_out(S, range(len(S.vertices)))
        assert In == sorted(S.loose_in) and Out == sorted(S.loose_out)


def test_linear_basis_rref():
    x = [Polynomial.var(i, 3) for i in range(3)]
    forms = [x[0] - x[1], x[1] - x[2], x[0] - x[2]]
    assert linear_rank(forms) == 2
    basis = linear_basis(forms)
    assert all(b[min(b)] == 1 for b in basis)
    with pytest.raises(ValueError):
        linear_basis([x[0] * x[1]])


def test_edge_ring_relations_match_fully_singular_linear_ideal():
    from cuberes.braid_model import fully_singular, resolve
    d = build_decorated_diagram(parse_braid_word("1 -2 1 -2"))
    E = edge_ring_relations(d)
    L = linear_ideal(resolve(d, fully_singular(d)))
    assert gb_of(E) == gb_of(L)


def test_full_subset_generator_lies_in_L_plus_Q():
    for _, S in resolution_graphs(2, 3, connected_only=True):
        if not S.vertices:
            continue
        gb = gb_of((linear_ideal(S) + quadratic_ideal(S)).nonzero())
        top = nonlocal_ideal(S).generators[-1]
        assert gb.contains(top)
