import itertools

import pytest
from hypothesis import given, strategies as st

from cfpzest.abgroup import (FinAbGroup, Hom, abelian_groups_of_order, all_subgroups,
                             canonical_factors, dual_pairing, find_isomorphisms, generate_subgroup,
                             hom_kernel, quotient, smith, solve_mod, span_order, subgroup_quotient)
from cfpzest.errors import CapacityError, ValidationError

groups = st.lists(st.integers(2, 6), min_size=0, max_size=3).map(lambda f: FinAbGroup(tuple(f)))


@st.composite
def group_and_elements(draw, k=2):
    G = draw(groups)
    els = [tuple(draw(st.integers(0, n - 1)) for n in G.factors) for _ in range(k)]
    return G, els


def test_elements_are_lexicographic():
    G = FinAbGroup((2, 3))
    assert G.elements == tuple(sorted(G.elements))
    assert G.elements[0] == G.zero and len(G.elements) == 6


def test_factor_below_two_rejected():
    with pytest.raises(ValidationError):
        FinAbGroup((1,))


def test_element_order_and_exponent():
    G = FinAbGroup((4, 6))
    assert G.element_order((2, 3)) == 2
    assert G.element_order((1, 1)) == 12
    assert G.exponent == 12


def test_canonical_factors():
    assert canonical_factors([2, 3]) == (6,)
    assert canonical_factors([4, 6]) == (2, 12)
    assert canonical_factors([]) == ()


@pytest.mark.parametrize("n,count", [(1, 1), (8, 3), (16, 5), (36, 4), (64, 11), (12, 2)])
def test_abelian_groups_of_order(n, count):
    gs = abelian_groups_of_order(n)
    assert len(gs) == count
    assert len({canonical_factors(G.factors) for G in gs}) == count
    assert all(G.order == n for G in gs)


def test_dual_pairing_is_bilinear_and_perfect():
    G = FinAbGroup((2, 4))
    for a in G.elements:
        if a != G.zero:
            assert any(dual_pairing(G, a, chi) != 0 for chi in G.elements)
        for b, chi in itertools.product(G.elements, G.elements):
            assert dual_pairing(G, G.add(a, b), chi) == (dual_pairing(G, a, chi) + dual_pairing(G, b, chi)) % 1


@pytest.mark.parametrize("factors,count", [((2, 2), 5), ((2, 2, 2), 16), ((4, 2), 8), ((6,), 4)])
def test_subgroup_counts(factors, count):
    assert len(all_subgroups(FinAbGroup(factors))) == count


def test_quotient_z4xz4_by_diagonal_two():
    G = FinAbGroup((4, 4))
    Q = subgroup_quotient(G, [(2, 2)])
    assert Q.group.order == 8
    assert canonical_factors(Q.group.factors) == (2, 4)
    assert Q.section(Q.group.zero) == G.zero


@pytest.mark.parametrize("factors,count", [((2, 2), 6), ((4,), 2), ((2, 4), 8), ((3,), 2), ((3, 3), 48)])
def test_automorphism_counts(factors, count):
    G = FinAbGroup(factors)
    assert len(find_isomorphisms(G, G)) == count


def test_no_isomorphism_between_z4_and_klein():
    assert find_isomorphisms(FinAbGroup((4,)), FinAbGroup((2, 2))) == []
    assert find_isomorphisms(FinAbGroup((6,)), FinAbGroup((2, 3)), first=True)


def test_isomorphism_search_respects_bound():
    G = FinAbGroup((2, 2, 2))
    with pytest.raises(CapacityError):
        find_isomorphisms(G, G, bound=4)


def test_hom_rejects_image_of_wrong_order():
    with pytest.raises(ValidationError):
        Hom(FinAbGroup((2,)), FinAbGroup((4,)), ((1,),))


def test_hom_matrix_round_trip():
    f = Hom(FinAbGroup((2, 2)), FinAbGroup((4, 2)), ((2, 0), (0, 1)))
    assert Hom.from_matrix(f.source, f.target, f.matrix) == f
    assert f.is_injective() and not f.is_bijective()


@given(group_and_elements(k=3))
def test_quotient_projection_is_onto_homomorphism_with_kernel_H(data):
    G, els = data
    H = generate_subgroup(G, els[:1])
    Q = quotient(G, G.generators, H.gens)
    assert G.order == H.order * Q.group.order
    for x in G.elements:
        for y in els:
            assert Q.project(G.add(x, y)) == Q.group.add(Q.project(x), Q.project(y))
    kernel = {x for x in G.elements if Q.project(x) == Q.group.zero}
    assert kernel == set(H.elements)
    for y in Q.group.elements:
        s = Q.section(y)
        assert Q.project(s) == y
        assert s == min(Q.coset(y))


@given(group_and_elements(k=3))
def test_subquotient_orders(data):
    G, els = data
    H = generate_subgroup(G, els[:1])
    K = generate_subgroup(G, els)
    Q = quotient(G, K.gens, H.gens)
    assert Q.group.order * H.order == generate_subgroup(G, list(K.gens) + list(H.gens)).order


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3))
def test_smith_decomposition(rows):
    diag, S, T = smith(rows, 3)
    A = rows
    SAT = [[sum(S[i][k] * A[k][l] * T[l][j] for k in range(len(A)) for l in range(3))
            for j in range(3)] for i in range(len(A))]
    for i in range(len(A)):
        for j in range(3):
            assert SAT[i][j] == (diag[i] if i == j else 0)
    nz = [abs(d) for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2), min_size=1, max_size=2),
       st.sampled_from([2, 3, 4]))
def test_hom_kernel_and_span_order_match_enumeration(rows, m):
    src = [m, m]
    ker = hom_kernel(rows, src, [m] * len(rows))
    brute = {x for x in itertools.product(range(m), repeat=2)
             if all(sum(a * b for a, b in zip(r, x)) % m == 0 for r in rows)}
    assert span_order(ker, src) == len(brute)
    for v in ker:
        assert tuple(v) in brute


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=3),
       st.lists(st.integers(0, 5), min_size=3, max_size=3), st.sampled_from([2, 4, 6]))
def test_solve_mod_matches_enumeration(rows, rhs, m):
    rhs = [v % m for v in rhs[:len(rows)]]
    x = solve_mod(rows, rhs, 2, m)
    exists = any(all((sum(a * b for a, b in zip(r, v)) - t) % m == 0 for r, t in zip(rows, rhs))
                 for v in itertools.product(range(m), repeat=2))
    assert (x is not None) == exists
