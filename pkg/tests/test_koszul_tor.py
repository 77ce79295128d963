import random

import pytest

from cuberes.braid_model import graph_from_events, insert_two_valent
from cuberes.gallery import GALLERY
from cuberes.groebner import gb_of
from cuberes.ideal_gen import linear_basis, linear_ideal, nonlocal_ideal, quadratic_ideal
from cuberes.koszul_tor import (KoszulComplex, check_graded_conjecture, check_regular_sequence,
                                check_vanishing, chain_euler_identity, compare_conjecture,
                                natural_map_ranks, sparse_nullspace, sparse_rank, tor_dims)
from cuberes.poly_kernel import QQ, FieldConfig, Polynomial, series_from_rational

from conftest import brute_tor_dims, resolution_graphs, small_graphs


def _forms(S):
    L = linear_ideal(S)
    return [Polynomial.from_linear(b, S.nedges, QQ, S.edge_names) for b in linear_basis(L.generators)] \
        if L.generators else []


def test_sparse_rank_and_nullspace():
    cols = [{0: QQ.coerce(1), 1: QQ.coerce(2)}, {0: QQ.coerce(2), 1: QQ.coerce(4)}, {2: QQ.coerce(1)}]
    assert sparse_rank(cols, QQ) == 2
    null = sparse_nullspace(cols, 0, QQ)
    assert len(null) == 1


def d2_instances():
    out = []
    for label, S in list(resolution_graphs(3, 4, connected_only=True)):
        if 2 <= len(_forms(S)) <= 4:
            out.append((label, S))
        if len(out) >= 12:
            break
    return out + [("figure5", GALLERY["figure5"]())]


@pytest.mark.parametrize("label,S", d2_instances())
def test_koszul_d_squared_zero(label, S):
    forms = _forms(S)
    assert len(forms) <= 4
    for J in (quadratic_ideal(S), nonlocal_ideal(S)):
        K = KoszulComplex(forms, gb_of(J.nonzero()))
        assert K.d_squared_zero(6)


@pytest.mark.parametrize("label,S", small_graphs(6))
def test_tor_matches_dense_oracle(label, S):
    for J, ideal in (("N", nonlocal_ideal(S)), ("Q", quadratic_ideal(S))):
        T = tor_dims(S, J, 5)
        dense = brute_tor_dims(linear_ideal(S).generators, ideal.generators, S.nedges, 5)
        assert all(T.dim(i, d) == v for (i, d), v in dense.items()), (label, J)


@pytest.mark.parametrize("label,S", small_graphs(6)[::3])
def test_peeling_does_not_change_dims(label, S):
    for J in "NQ":
        a = tor_dims(S, J, 6, peel=True)
        b = tor_dims(S, J, 6, peel=False)
        assert a.table_equal(b)


def test_chain_euler_identity_everywhere():
    for label, S in list(resolution_graphs(3, 3, connected_only=True))[:25] + [("figure5", GALLERY["figure5"]())]:
        for J in "NQ":
            T = tor_dims(S, J, 10)
            assert chain_euler_identity(T, S), (label, J)
            R = tor_dims(S, J, 10, reduced=True)
            assert chain_euler_identity(R, S), (label, J, "reduced")


def test_golden_figure5():
    S = GALLERY["figure5"]()
    n, q = tor_dims(S, "N", 12), tor_dims(S, "Q", 12)
    g0 = series_from_rational([1, 3, 2, -2], 4, 12)
    assert n.series[0].coeffs == q.series[0].coeffs == g0.coeffs
    assert (q.series[0].num, q.series[0].denom_power) == ([1, 3, 2, -2], 4)
    assert (q.series[1].num, q.series[1].denom_power) == ([0, 0, 0, 0, 3, 1], 4)
    assert q.series[1].coeffs == n.series[1].shifted(1).coeffs
    assert q.series[2].is_zero() and n.series[2].is_zero()


def test_figure4_values_and_conjecture():
    S = GALLERY["figure4"]()
    v = check_graded_conjecture(S, 10, total=True)
    n, q = v.tables
    assert (n.series[1].num, n.series[1].denom_power) == ([0, 0, 1], 3)
    assert (q.series[1].num, q.series[1].denom_power) == ([0, 0, 0, 1], 3)
    assert v.holds


def test_total_graph_counterexample():
    S = GALLERY["total"]()
    v = check_graded_conjecture(S, 10, total=True)
    n, q = v.tables
    assert (n.series[1].num, n.series[1].denom_power) == ([0, 1], 3)
    assert (q.series[1].num, q.series[1].denom_power) == ([0, 0, 2, -1], 3)
    assert v.status == "fails" and v.first_failure[:2] == (1, 2)


def test_unconnected_graph_is_unstable():
    S = GALLERY["total"]()
    assert check_graded_conjecture(S, 6).status == "unstable"


def test_compare_conjecture_detects_shift():
    S = GALLERY["kink"]()
    n = tor_dims(S, "N", 8)
    assert compare_conjecture(n, n).status == "fails"
    assert compare_conjecture(n, tor_dims(S, "Q", 8)).holds


def test_vanishing_closures_and_open_graphs():
    for label, S in list(resolution_graphs(3, 3, connected_only=True))[:15]:
        assert check_vanishing(S, 8).ok, label
    rng = random.Random(3)
    for _ in range(8):
        P = rng.randint(2, 4)
        ev = [("X", rng.randint(1, P - 1), j) for j in range(rng.randint(1, 4))]
        S = graph_from_events(P, 0, ev)
        rep = check_vanishing(S, 8)
        assert rep.open_graph and rep.ok


def test_two_valent_invariance():
    for label, S in list(resolution_graphs(3, 3, connected_only=True))[:6] + [("figure5", GALLERY["figure5"]())]:
        e = random.Random(label).randrange(S.nedges)
        T = insert_two_valent(S, e)
        for J in "NQ":
            assert tor_dims(S, J, 8).table_equal(tor_dims(T, J, 8)), (label, e, J)


def test_prime_field_agrees_on_total_graph():
    S = GALLERY["total"]()
    for J in "NQ":
        assert tor_dims(S, J, 8).table_equal(tor_dims(S, J, 8, field=FieldConfig("fp", 101)))


def test_regular_sequence_check():
    x = [Polynomial.var(i, 3) for i in range(3)]
    assert check_regular_sequence([x[0], x[1] * x[1], x[2]], 6)
    assert not check_regular_sequence([x[0] * x[1], x[0] * x[2]], 6)


def test_natural_map_ranks_shape():
    S = GALLERY["kink"]()
    ranks = natural_map_ranks(S, 4)
    n = tor_dims(S, "N", 4)
    # H_0 maps onto H_0 since R/Q -> R/N is surjective
    for d in range(5):
        assert ranks[(0, d)] == n.dim(0, d)


def test_bad_side_rejected():
    with pytest.raises(ValueError):
        tor_dims(GALLERY["kink"](), "X", 4)
