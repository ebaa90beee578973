"""Named reproduction checks behind ``cfpzest verify-paper``.

Each check returns ``(passed, detail)``; exceptions are caught and turned
into failures so one broken check never hides the others.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Callable, Sequence

from .abgroup import FinAbGroup, Hom
from .fusion import (GradedFusionRing, _rebuild, cfp_ring, fiber_product_ring, find_ring_isomorphisms,
                     group_ring, ring_of_premetric)
from .metric import PreMetricGroup, central_charge, format_phase, validate_premetric
from .pointed import (PointedCategory, center_of_Bz, condensed_fiber_product, enumerate_pointed_mme,
                      pointed_isomorphic)
from .serialization import load_builtin
from .zest import (cochain_from_function, extract_lambda_from_pointed, solve_cocycles, solve_nu,
                   verify_cfp_equals_zesting, zest_fusion_ring, zested_twists_via_cfp)

Z2 = FinAbGroup((2,))
Z4 = FinAbGroup((4,))
Z22 = FinAbGroup((2, 2))
P4_Q = (F(0), F(1, 8), F(1, 2), F(1, 8))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def make_p4(q: Sequence[F] = P4_Q) -> PointedCategory:
    """``C(Z/4, a^2/8)`` containing sVec as the even part."""
    P = validate_premetric(Z4, list(q), "P4")
    return PointedCategory(P, Z2, (1,), Hom(Z2, Z4, ((2,),)), "P4")


def semion_squared() -> PreMetricGroup:
    sem = [F(0), F(1, 4)]
    return PreMetricGroup(Z22, tuple(sem[a] + sem[b] for a, b in Z22.elements), "Sem*Sem")


def su2_4() -> GradedFusionRing:
    return load_builtin("su2_4.json").value


def vec_z4() -> GradedFusionRing:
    R = group_ring(Z4, grading=lambda x: (x[0] % 2,), grading_group=Z2, name="Vec_Z4",
                   labels=["1", "g", "g2", "g3"])
    return _rebuild(R, bz_group=Z2, bz=["1", "g2"])


def vec_z2_rep_z2() -> GradedFusionRing:
    R = group_ring(Z22, grading=lambda x: (x[0],), grading_group=Z2, name="Vec_Z2*Rep_Z2")
    return _rebuild(R, bz_group=Z2, bz=["(0,0)", "(0,1)"])


def is_cyclic_z4_ring(R: GradedFusionRing) -> bool:
    return bool(find_ring_isomorphisms(R, group_ring(Z4), grade_preserving=False))


def _ms(ts) -> str:
    return "{" + ", ".join(format_phase(t) for t in sorted(ts)) + "}"


def build_checks(p4_q: Sequence[F] = P4_Q) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    def p4():
        return make_p4(p4_q)

    checks = []

    def check(name):
        def deco(fn):
            checks.append((name, fn))
            return fn
        return deco

    @check("P4 has central charge index 1")
    def _():
        s = central_charge(p4().pmg)
        return s == 1, f"sigma = {s}"

    @check("CFP(P4, P4) lives on Z/2 x Z/2 with twists {0, 1/4, 1/4, 1/2}")
    def _():
        K = condensed_fiber_product(p4(), p4())
        ok = sorted(K.group.factors) == [2, 2] and K.pmg.twist_multiset() == (0, F(1, 4), F(1, 4), F(1, 2))
        return ok, f"group {K.group.factors}, twists {_ms(K.pmg.q)}"

    @check("CFP(P4, P4) is braided equivalent to Sem x Sem")
    def _():
        K = condensed_fiber_product(p4(), p4())
        f = pointed_isomorphic(K, PointedCategory(semion_squared(), Z2, (1,), Hom(Z2, Z22, ((1, 1),))),
                               respect_embedding=False)
        return f is not None, "isometry found" if f is not None else "no isometry"

    @check("CFP(P4, P4) has central charge index 2")
    def _():
        s = central_charge(condensed_fiber_product(p4(), p4()).pmg)
        return s == 2, f"sigma = {s}"

    @check("SU(2)_4 fiber Vec_Z4 has 10 basis elements")
    def _():
        r = fiber_product_ring(su2_4(), vec_z4()).rank
        return r == 10, f"rank {r}"

    @check("CFP(SU(2)_4, Vec_Z4) has 5 basis elements")
    def _():
        K = cfp_ring(su2_4(), vec_z4())
        return K.rank == 5, f"rank {K.rank}: {', '.join(K.labels)}"

    @check("[X₁,g]⊗[X₁,g] = [Y,1]⊕[z,1]")
    def _():
        K = cfp_ring(su2_4(), vec_z4())
        m = K.multiply("[X1,g]", "[X1,g]")
        return m == {"[Y,1]": 1, "[z,1]": 1}, " + ".join(f"{v}*{k}" for k, v in sorted(m.items()))

    @check("dual([X₁,g]) = [X₋₁,g]")
    def _():
        d = cfp_ring(su2_4(), vec_z4()).dual_of("[X1,g]")
        return d == "[X-1,g]", d

    @check("lambda extracted from P4 is the fermion")
    def _():
        lam, _ = extract_lambda_from_pointed(p4())
        return lam((1,), (1,)) == (1,), f"lambda(1,1) = {lam((1,), (1,))}"

    @check("nu(1,1,1) for the fermion datum lies in {1/4, 3/4}")
    def _():
        lam = cochain_from_function(Z2, Z2, 2, lambda g, h: (g[0] * h[0],))
        vals = solve_nu(Z2, Z2, (1,), lam).values_at(((1,), (1,), (1,)))
        return vals == [F(1, 4), F(3, 4)], _ms(vals)

    @check("Rep(Z/2) datum lambda(1,1) = phi admits nu = 0")
    def _():
        lam = cochain_from_function(Z2, Z2, 2, lambda g, h: (g[0] * h[0],))
        vals = solve_nu(Z2, Z2, (0,), lam).values_at(((1,), (1,), (1,)))
        return F(0) in vals, _ms(vals)

    @check("|H^2(Z/2, Z/2)| = 2 and |H^2(Z/2 x Z/2, Z/2)| = 8")
    def _():
        a = solve_cocycles(Z2, Z2, 2).H_order
        b = solve_cocycles(Z22, Z2, 2).H_order
        return (a, b) == (2, 8), f"{a}, {b}"

    @check("zesting Z(sVec) by P4 gives twists {0, 1/8, 1/8, 1/2}")
    def _():
        rep = zested_twists_via_cfp(center_of_Bz(Z2, (1,)), p4())
        return rep.multiset == (0, F(1, 8), F(1, 8), F(1, 2)), _ms(rep.twists)

    @check("zesting P4 by P4 gives twists {0, 1/4, 1/4, 1/2}")
    def _():
        rep = zested_twists_via_cfp(p4(), p4())
        return rep.multiset == (0, F(1, 4), F(1, 4), F(1, 2)), _ms(rep.twists)

    @check("zesting Vec_Z2 x Rep(Z/2) by lambda(1,1) = phi gives Z/4 fusion")
    def _():
        lam = cochain_from_function(Z2, Z2, 2, lambda g, h: (g[0] * h[0],))
        Zd = zest_fusion_ring(vec_z2_rep_z2(), lam)
        return is_cyclic_z4_ring(Zd), "Z/4" if is_cyclic_z4_ring(Zd) else "not Z/4"

    @check("zesting Z(sVec) by the fermion datum gives Z/4, twice gives Z/2 x Z/2")
    def _():
        R = ring_of_premetric(center_of_Bz(Z2, (1,)))
        lam = cochain_from_function(Z2, Z2, 2, lambda g, h: (g[0] * h[0],))
        once = zest_fusion_ring(R, lam)
        twice = zest_fusion_ring(once, lam)
        ok = is_cyclic_z4_ring(once) and not is_cyclic_z4_ring(twice)
        return ok, f"once Z/4: {is_cyclic_z4_ring(once)}, twice Z/4: {is_cyclic_z4_ring(twice)}"

    @check("CFP(SU(2)_4, Vec_Z4) equals the zesting of SU(2)_4")
    def _():
        rep = verify_cfp_equals_zesting(su2_4(), vec_z4())
        return rep.isomorphic, ", ".join(f"{a}->{b}" for a, b in (rep.witness or {}).items()) or rep.reason

    @check("sVec has 8 pointed minimal modular extensions, all reached by CFP with Z(sVec)")
    def _():
        classes = enumerate_pointed_mme(Z2, (1,))
        C = center_of_Bz(Z2, (1,))
        reached = [any(pointed_isomorphic(condensed_fiber_product(C, P), R) is not None for P in classes)
                   for R in classes]
        sig = sorted(central_charge(R.pmg) for R in classes)
        return len(classes) == 8 and all(reached), f"{len(classes)} classes, sigma {sig}"

    @check("CFP of pointed MMEs is an MME with additive central charge")
    def _():
        bad = []
        n = 0
        for B, z in ((Z2, (1,)), (Z2, (0,))):
            classes = enumerate_pointed_mme(B, z)
            sig = {id(C): central_charge(C.pmg) for C in classes}
            for C, D in itertools.product(classes, repeat=2):
                K = condensed_fiber_product(C, D)
                n += 1
                if not K.is_mme or central_charge(K.pmg) != (sig[id(C)] + sig[id(D)]) % 8:
                    bad.append((C.name, D.name))
        return not bad, f"{n} pairs, {len(bad)} failures"

    return checks


def verify_paper_suite(p4_q: Sequence[F] = P4_Q) -> list[CheckResult]:
    out = []
    for name, fn in build_checks(p4_q):
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as e:  # a crashing check is a failed check
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t))
    return out
