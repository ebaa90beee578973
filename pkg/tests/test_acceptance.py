"""Acceptance criteria 1-8, one pass/fail line each in the terminal summary."""
import cmath
import itertools
import math
import time
from fractions import Fraction as F

import numpy as np

from cfpzest.abgroup import FinAbGroup, abelian_groups_of_order, all_subgroups
from cfpzest.errors import NotCondensable
from cfpzest.fusion import (cfp_ring, deequivariantize_ring, element_label, fiber_product_ring,
                            find_ring_isomorphisms, fp_dimension, group_ring, ring_of_premetric)
from cfpzest.metric import (PreMetricGroup, all_quadratic_forms, central_charge, condensation, gauss_sum,
                            is_nondegenerate, premetric_isomorphic)
from cfpzest.pointed import (center_of_Bz, condensed_fiber_product, embeddings, enumerate_pointed_mme,
                             pointed_isomorphic)
from cfpzest.verification import is_cyclic_z4_ring, make_p4, semion_squared, su2_4, vec_z2_rep_z2, vec_z4
from cfpzest.zest import (cochain_from_function, extract_lambda_from_pointed, solve_cocycles, solve_nu,
                          verify_cfp_equals_zesting, zest_fusion_ring, zested_twists_via_cfp)

from oracles import (brute_force_cohomology, gauss_sum_of_table, milgram_sweep, random_form_table)

Z2 = FinAbGroup((2,))


def finish(acceptance, label, ok, elapsed, limit, detail):
    passed = ok and (limit is None or elapsed < limit)
    bound = f" (limit {limit:g} s)" if limit is not None else ""
    acceptance(label, passed, f"{detail}; {elapsed:.2f} s{bound}")
    assert ok, detail
    assert limit is None or elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"


def test_criterion_1_p4_squared(acceptance):
    t = time.perf_counter()
    K = condensed_fiber_product(make_p4(), make_p4())
    sigma = central_charge(K.pmg)
    iso = premetric_isomorphic(K.pmg, semion_squared())
    chi = gauss_sum(K.pmg) / 2
    ok = (sorted(K.group.factors) == [2, 2] and K.pmg.twist_multiset() == (0, F(1, 4), F(1, 4), F(1, 2))
          and iso is not None and sigma == 2 and abs(chi - 1j) < 1e-9)
    finish(acceptance, "1. CFP(P4, P4) = Sem x Sem, sigma 2", ok, time.perf_counter() - t, 1.0,
           f"group {K.group.factors}, twists {[str(v) for v in K.pmg.twist_multiset()]}, sigma {sigma}")


def test_criterion_2_su24_with_vec_z4(acceptance):
    t = time.perf_counter()
    fp = fiber_product_ring(su2_4(), vec_z4())
    K = cfp_ring(su2_4(), vec_z4())
    prod = K.multiply("[X1,g]", "[X1,g]")
    dual = K.dual_of("[X1,g]")
    ok = fp.rank == 10 and K.rank == 5 and prod == {"[Y,1]": 1, "[z,1]": 1} and dual == "[X-1,g]"
    finish(acceptance, "2. SU(2)_4 fiber Vec_Z4: 10 -> 5, products and duals", ok, time.perf_counter() - t, 1.0,
           f"ranks {fp.rank}/{K.rank}, [X1,g]^2 = {sorted(prod)}, dual {dual}")


def test_criterion_3_twist_sequence(acceptance):
    t = time.perf_counter()
    p4 = make_p4()
    Z = center_of_Bz(Z2, (1,))
    first = zested_twists_via_cfp(Z, p4)
    middle = condensed_fiber_product(Z, p4)
    second = zested_twists_via_cfp(middle, p4)
    seq = [Z.pmg.twist_multiset(), first.multiset, second.multiset]
    ok = (seq == [(0, 0, 0, F(1, 2)), (0, F(1, 8), F(1, 8), F(1, 2)), (0, F(1, 4), F(1, 4), F(1, 2))]
          and first.exact_path and second.exact_path)
    finish(acceptance, "3. twist sequence 0,1/2,0,0 -> 1/8 -> 1/4", ok, time.perf_counter() - t, 1.0,
           " -> ".join("{" + ", ".join(map(str, s)) + "}" for s in seq))


def test_criterion_4_zesting_examples(acceptance):
    t = time.perf_counter()
    lam = cochain_from_function(Z2, Z2, 2, lambda g, h: (g[0] * h[0],))
    cyclic = is_cyclic_z4_ring(zest_fusion_ring(vec_z2_rep_z2(), lam))
    rep = verify_cfp_equals_zesting(su2_4(), vec_z4())
    ok = cyclic and rep.isomorphic
    finish(acceptance, "4. Vec_Z2 x Rep(Z2) zests to Z/4; CFP(SU(2)_4, Vec_Z4) is a zesting", ok,
           time.perf_counter() - t, 1.0, f"Z/4 fusion {cyclic}, witness {rep.witness}")


def test_criterion_5_svec_extensions_reached(acceptance):
    t = time.perf_counter()
    classes = enumerate_pointed_mme(Z2, (1,))
    Z = center_of_Bz(Z2, (1,))
    Zr = ring_of_premetric(Z)
    by_cfp = by_datum = 0
    for R in classes:
        if any(pointed_isomorphic(condensed_fiber_product(Z, P), R) is not None for P in classes):
            by_cfp += 1
        lam, _ = extract_lambda_from_pointed(R)
        solve_nu(Z2, Z2, (1,), lam)
        if find_ring_isomorphisms(zest_fusion_ring(Zr, lam), ring_of_premetric(R)):
            by_datum += 1
    ok = len(classes) == 8 and by_cfp == 8 and by_datum == 8
    finish(acceptance, "5. sVec has 8 pointed MMEs, all reached from Z(sVec)", ok, time.perf_counter() - t, 30.0,
           f"{len(classes)} classes, {by_cfp} via CFP, {by_datum} via solved datum")


def _all_pairs():
    for B, z in ((Z2, (1,)), (Z2, (0,))):
        classes = enumerate_pointed_mme(B, z)
        for C, D in itertools.product(classes, repeat=2):
            yield B, z, C, D


def test_criterion_6_closure(acceptance):
    t = time.perf_counter()
    n = bad = 0
    for B, z, C, D in _all_pairs():
        K = condensed_fiber_product(C, D)
        n += 1
        good = (is_nondegenerate(K.pmg) and K.group.order == B.order ** 2 and K.trivial_component_is_Bz()
                and any(f == K.iota for f in embeddings(K.pmg, B, z)))
        bad += not good
    finish(acceptance, "6. CFP of pointed MMEs of sVec and Rep(Z2) is an MME", bad == 0,
           time.perf_counter() - t, 30.0, f"{n} ordered pairs, {bad} failures")


def test_criterion_7_central_charge_additive(acceptance):
    t = time.perf_counter()
    n = bad = 0
    for _, _, C, D in _all_pairs():
        n += 1
        bad += central_charge(condensed_fiber_product(C, D).pmg) != (central_charge(C.pmg) + central_charge(D.pmg)) % 8
    finish(acceptance, "7. sigma(CFP(C, P)) = sigma(C) + sigma(P) mod 8", bad == 0, time.perf_counter() - t, None,
           f"{n} ordered pairs, {bad} failures")


# ---------------------------------------------------------------------------
# criterion 8: oracle-backed property suites

def _milgram():
    rng = np.random.default_rng(8)
    groups = [G for n in range(1, 65) for G in abelian_groups_of_order(n)]
    forms = nondeg = 0
    worst = [0.0, 0.0, 0.0]
    for G in groups:
        out = milgram_sweep(G.factors, chunk=256)
        forms += out["forms"]
        nondeg += out["nondeg"]
        worst = [max(worst[0], out["mag_err"]), max(worst[1], out["root_err"]), max(worst[2], out["degen_err"])]
    sweep_ok = worst[0] < 1e-9 and worst[1] < 1e-6 and worst[2] < 1e-9
    # library central charge against the numpy Gauss sum on random forms of every group
    lib_bad = checked = 0
    for G in groups:
        for _ in range(12):
            L, num = random_form_table(G.factors, rng)
            P = PreMetricGroup(G, tuple(F(int(v), L) for v in num))
            if not is_nondegenerate(P):
                continue
            g = gauss_sum_of_table(L, num) / math.sqrt(G.order)
            checked += 1
            lib_bad += abs(g - cmath.exp(2j * math.pi * central_charge(P) / 8)) > 1e-9
    return sweep_ok and lib_bad == 0 and checked > 0, (
        f"Milgram: {forms} forms over {len(groups)} groups, {nondeg} non-degenerate, "
        f"max errors {worst[0]:.1e}/{worst[1]:.1e}/{worst[2]:.1e}; library sigma {checked - lib_bad}/{checked}")


def _condensation():
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
                    c = condensation(P, H)
                    if (c.result.order * H.order ** 2 != E.order or not is_nondegenerate(c.result)
                            or central_charge(c.result) != central_charge(P)):
                        return False, f"bookkeeping fails for {P.q} / {H.gens}"
                    checked += 1
    try:
        condensation(PreMetricGroup(Z2, (F(0), F(1, 2))), [(1,)])
        return False, "fermion condensed"
    except NotCondensable:
        pass
    return True, f"condensation: {checked} (form, isotropic subgroup) pairs"


def _polarization():
    forms = 0
    for n in range(1, 17):
        for E in abelian_groups_of_order(n):
            add = np.array([[E.index(E.add(x, y)) for y in E.elements] for x in E.elements])
            for P in all_quadratic_forms(E):
                L = math.lcm(*(v.denominator for v in P.q))
                q = np.array([int(v * L) for v in P.q])
                b = (q[add] - q[:, None] - q[None, :]) % L
                if ((b[add] - b[:, None, :] - b[None, :, :]) % L).any():
                    return False, f"b not bilinear for {P.q}"
                forms += 1
    return True, f"polarization: {forms} forms with |E| <= 16"


def _cocycles():
    small = [(2,), (3,), (4,), (2, 2)]
    cases = [(G, M, d) for G in small for M in small for d in (1, 2)]
    cases += [(G, M, 3) for G in [(2,), (3,)] for M in small]
    for G, M, d in cases:
        s = solve_cocycles(FinAbGroup(G), FinAbGroup(M), d)
        if (s.cocycle_order, s.coboundary_order) != brute_force_cohomology(G, M, d):
            return False, f"cocycle mismatch at G={G} M={M} degree {d}"
    return True, f"cocycles: {len(cases)} (G, M, degree) cases match brute force"


def _deequivariantization():
    n = 0
    for order in range(1, 17):
        for G in abelian_groups_of_order(order):
            R = group_ring(G)
            for H in all_subgroups(G):
                Q = deequivariantize_ring(R, [element_label(h) for h in H.elements])
                if Q.rank * H.order != R.rank or abs(fp_dimension(Q) - G.order / H.order) > 1e-9:
                    return False, f"bookkeeping fails for {G.factors} / {H.gens}"
                n += 1
    for _, _, C, D in _all_pairs():
        fp = fiber_product_ring(ring_of_premetric(C), ring_of_premetric(D))
        if cfp_ring(ring_of_premetric(C), ring_of_premetric(D)).rank * C.B.order != fp.rank:
            return False, f"rank bookkeeping fails for {C.name}, {D.name}"
        n += 1
    return True, f"de-equivariantization: {n} cases"


def _cfp_laws():
    n = 0
    for B, z in ((Z2, (1,)), (Z2, (0,))):
        classes = enumerate_pointed_mme(B, z)
        Z = center_of_Bz(B, z)
        for C in classes:
            n += 1
            if pointed_isomorphic(condensed_fiber_product(Z, C), C) is None:
                return False, f"unit law fails for {C.name}"
        for C, D in itertools.product(classes, repeat=2):
            n += 1
            if pointed_isomorphic(condensed_fiber_product(C, D), condensed_fiber_product(D, C)) is None:
                return False, f"commutativity fails for {C.name}, {D.name}"
        for C, D, E in itertools.product(classes, repeat=3):
            n += 1
            left = condensed_fiber_product(condensed_fiber_product(C, D), E)
            right = condensed_fiber_product(C, condensed_fiber_product(D, E))
            if pointed_isomorphic(left, right) is None:
                return False, f"associativity fails for {C.name}, {D.name}, {E.name}"
    return True, f"CFP laws: {n} instances"


def test_criterion_8_property_suites(acceptance):
    t = time.perf_counter()
    results = [suite() for suite in (_milgram, _condensation, _polarization, _cocycles,
                                     _deequivariantization, _cfp_laws)]
    ok = all(r[0] for r in results)
    finish(acceptance, "8. oracle-backed property suites", ok, time.perf_counter() - t, 300.0,
           "; ".join(r[1] for r in results))
