import cmath
import functools
import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfpzest.abgroup import FinAbGroup, Hom, abelian_groups_of_order, all_subgroups, generate_subgroup
from cfpzest.errors import NotCondensable, ValidationError
from cfpzest.metric import (PreMetricGroup, all_quadratic_forms, canonical_grading, central_charge,
                            condensation, count_quadratic_forms, deligne_product, format_phase,
                            gauss_sum, is_nondegenerate, orthogonal_complement, parse_phase,
                            premetric_isomorphic, radical, validate_premetric)
from cfpzest.pointed import modular_data_pointed

from oracles import count_quadratic_tables, milgram_sweep

Z2, Z3, Z4 = FinAbGroup((2,)), FinAbGroup((3,)), FinAbGroup((4,))
SEM = PreMetricGroup(Z2, (F(0), F(1, 4)), "Sem")
P4 = PreMetricGroup(Z4, (F(0), F(1, 8), F(1, 2), F(1, 8)), "P4")


def small_forms(max_order):
    for n in range(1, max_order + 1):
        for E in abelian_groups_of_order(n):
            yield from all_quadratic_forms(E)


def test_phase_round_trip():
    for s in ["0", "1/8", "7/8", "1/2"]:
        assert format_phase(parse_phase(s)) == s
    assert parse_phase("-1/8") == F(7, 8)
    assert format_phase(F(5, 4)) == "1/4"
    with pytest.raises(ValidationError):
        parse_phase("x")
    with pytest.raises(ValidationError):
        parse_phase(0.5)


def test_validate_rejects_non_even():
    with pytest.raises(ValidationError, match=r"q\(-x\)"):
        validate_premetric(Z4, [0, F(1, 8), F(1, 2), F(3, 8)])


def test_validate_rejects_nonzero_at_identity():
    with pytest.raises(ValidationError, match=r"q\(0\)"):
        validate_premetric(Z2, [F(1, 2), 0])


def test_validate_rejects_non_bilinear_polarization():
    with pytest.raises(ValidationError, match="bilinear"):
        validate_premetric(Z3, [0, F(1, 2), F(1, 2)])


def test_validate_rejects_wrong_length():
    with pytest.raises(ValidationError):
        validate_premetric(Z4, [0, 0])


@pytest.mark.parametrize("factors", [(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 2, 2)])
def test_generator_parametrization_matches_exhaustive_tables(factors):
    E = FinAbGroup(factors)
    forms = list(all_quadratic_forms(E))
    assert len(forms) == count_quadratic_forms(E) == count_quadratic_tables(factors)
    assert len({P.q for P in forms}) == len(forms)


def test_every_enumerated_form_passes_validation():
    for P in small_forms(8):
        validate_premetric(P.group, P.q)


def test_polarization_bilinear_by_full_enumeration():
    # all forms with |E| <= 16: b(x + y, z) = b(x, z) + b(y, z) for every triple
    for n in range(1, 17):
        for E in abelian_groups_of_order(n):
            add = np.array([[E.index(E.add(x, y)) for y in E.elements] for x in E.elements])
            for P in all_quadratic_forms(E):
                L = math.lcm(*(v.denominator for v in P.q))
                q = np.array([int(v * L) for v in P.q])
                b = (q[add] - q[:, None] - q[None, :]) % L
                lhs = b[add]                                 # b(x + y, z) as [x, y, z]
                rhs = b[:, None, :] + b[None, :, :]
                assert ((lhs - rhs) % L == 0).all()
                assert (b == b.T).all()


def test_radical_and_nondegeneracy():
    assert is_nondegenerate(SEM)
    assert is_nondegenerate(P4)
    T = PreMetricGroup(Z2, (F(0), F(1, 2)))
    assert not is_nondegenerate(T)
    assert radical(T).order == 2


def test_is_nondegenerate_agrees_with_radical_on_small_forms():
    for P in small_forms(12):
        assert is_nondegenerate(P) == (radical(P).order == 1)


@pytest.mark.parametrize("P,sigma", [
    (SEM, 1),
    (P4, 1),
    (PreMetricGroup(Z2, (F(0), F(3, 4))), 7),
    (PreMetricGroup(Z3, (F(0), F(1, 3), F(1, 3))), 2),
    (PreMetricGroup(Z3, (F(0), F(2, 3), F(2, 3))), 6),
])
def test_central_charge_examples(P, sigma):
    assert central_charge(P) == sigma


def test_central_charge_of_toric_code_and_double_semion():
    toric = PreMetricGroup(FinAbGroup((2, 2)), (F(0), F(0), F(0), F(1, 2)))
    ds = deligne_product(SEM, PreMetricGroup(Z2, (F(0), F(3, 4))))
    assert central_charge(toric) == 0
    assert central_charge(ds) == 0


def test_central_charge_requires_nondegenerate():
    with pytest.raises(ValidationError):
        central_charge(PreMetricGroup(Z2, (F(0), F(1, 2))))


def test_central_charge_additive_under_deligne_product():
    forms = [P for P in small_forms(6) if is_nondegenerate(P)]
    rng = random.Random(7)
    for P, Q in rng.sample(list(itertools.product(forms, forms)), 60):
        assert central_charge(deligne_product(P, Q)) == (central_charge(P) + central_charge(Q)) % 8


def test_library_central_charge_matches_numpy_gauss_sum():
    rng = random.Random(3)
    forms = [P for P in small_forms(16) if is_nondegenerate(P)]
    for P in rng.sample(forms, 200):
        g = sum(np.exp(2j * np.pi * float(v)) for v in P.q) / math.sqrt(P.order)
        assert abs(g - cmath.exp(2j * math.pi * central_charge(P) / 8)) < 1e-9


def test_p4_grading_is_parity():
    iota = Hom(Z2, Z4, ((2,),))
    deg = canonical_grading(P4, iota, (1,))
    assert [deg[x] for x in Z4.elements] == [(0,), (1,), (0,), (1,)]


def test_grading_rejects_embedding_with_wrong_form():
    with pytest.raises(ValidationError):
        canonical_grading(P4, Hom(Z2, Z4, ((2,),)), (0,))


def test_condense_toric_code_boson():
    toric = PreMetricGroup(FinAbGroup((2, 2)), (F(0), F(0), F(0), F(1, 2)))
    cond = condensation(toric, [(0, 1)])
    assert cond.result.order == 1
    with pytest.raises(NotCondensable):
        condensation(toric, [(1, 1)])


def test_condensation_bookkeeping_exhaustive():
    # every non-degenerate form with |E| <= 9 and every isotropic subgroup
    checked = 0
    for n in range(1, 10):
        for E in abelian_groups_of_order(n):
            subs = all_subgroups(E)
            for P in all_quadratic_forms(E):
                if not is_nondegenerate(P):
                    continue
                for H in subs:
                    if any(P(h) != 0 for h in H.elements):
                        continue
                    cond = condensation(P, H)
                    assert cond.result.order * H.order ** 2 == E.order
                    assert cond.perp.order * H.order == E.order
                    assert is_nondegenerate(cond.result)
                    assert central_charge(cond.result) == central_charge(P)
                    checked += 1
    assert checked > 50


@functools.lru_cache(maxsize=None)
def forms_on(E):
    return tuple(all_quadratic_forms(E))


@st.composite
def form_and_isotropic(draw):
    E = draw(st.sampled_from([G for n in (12, 16) for G in abelian_groups_of_order(n)]))
    forms = forms_on(E)
    P = draw(st.sampled_from(forms))
    iso = [x for x in E.elements if P(x) == 0]
    gens = draw(st.lists(st.sampled_from(iso), max_size=2))
    return P, gens


@given(form_and_isotropic())
def test_condensation_bookkeeping_sampled_at_order_16(data):
    P, gens = data
    E = P.group
    H = generate_subgroup(E, gens)
    if any(P(h) != 0 for h in H.elements):
        with pytest.raises(NotCondensable):
            condensation(P, H)
        return
    cond = condensation(P, H)
    rad = radical(P).order
    assert cond.perp.order * H.order == E.order * len(set(radical(P).elements) & set(H.elements))
    if rad == 1:
        assert cond.result.order * H.order ** 2 == E.order
        assert central_charge(cond.result) == central_charge(P)


def test_orthogonal_complement_of_everything_is_radical():
    P = deligne_product(P4, PreMetricGroup(Z2, (F(0), F(1, 2))))
    assert orthogonal_complement(P, P.group.generators) == radical(P)


def test_premetric_isomorphism():
    conj = PreMetricGroup(Z4, (F(0), F(7, 8), F(1, 2), F(7, 8)))
    assert premetric_isomorphic(P4, P4) is not None
    assert premetric_isomorphic(P4, conj) is None
    swapped = PreMetricGroup(FinAbGroup((2, 2)), (F(0), F(1, 2), F(0), F(0)))
    toric = PreMetricGroup(FinAbGroup((2, 2)), (F(0), F(0), F(0), F(1, 2)))
    f = premetric_isomorphic(swapped, toric)
    assert f is not None
    assert all(toric(f(x)) == swapped(x) for x in swapped.group.elements)


def test_modular_data_relations_and_sign_convention():
    for P, sigma in [(SEM, 1), (P4, 1), (PreMetricGroup(Z3, (F(0), F(1, 3), F(1, 3))), 2)]:
        c = modular_data_pointed(P).check_relations()
        assert abs(c - cmath.exp(2j * math.pi * sigma / 8)) < 1e-9


def test_gauss_sum_magnitude_small_milgram_sweep():
    out = milgram_sweep((2, 4))
    assert out["nondeg"] > 0
    assert out["mag_err"] < 1e-9 and out["root_err"] < 1e-6 and out["degen_err"] < 1e-9
    lib = [P for P in all_quadratic_forms(FinAbGroup((2, 4))) if is_nondegenerate(P)]
    assert len(lib) == out["nondeg"]
    for P in lib:
        assert abs(abs(gauss_sum(P)) - math.sqrt(8)) < 1e-9
