"""Pointed members of T(B, B_z): B_z, its center, fiber products and the condensed fiber product.

A :class:`PointedCategory` is a pre-metric group together with an embedding
``iota`` of the dual group of B (represented with B's own factors, paired by
:func:`~cfpzest.abgroup.dual_pairing`) whose restricted form is
``q_z(phi) = <phi, z>``.  The B-grading is the canonical one read off from
the double braiding with ``iota``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .abgroup import (DEFAULT_ISO_BOUND, Element, FinAbGroup, Hom, Subgroup,
                      direct_product, dual_pairing,
                      generate_subgroup, identity_hom, subgroup_from_elements)
from .errors import CapacityError, InvariantViolation, ValidationError
from .metric import (Condensation, PreMetricGroup, canonical_grading, central_charge, condensation,
                     deligne_product, is_nondegenerate, metric_group_classes, premetric_isomorphic)


def q_z(B: FinAbGroup, z: Element, phi: Element) -> Fraction:
    return dual_pairing(B, phi, z)


def _check_z(B: FinAbGroup, z) -> Element:
    z = B.reduce(z)
    if B.mul(2, z) != B.zero:
        raise ValidationError(f"z = {z} does not satisfy 2z = 0")
    return z


@dataclass(frozen=True)
class PointedCategory:
    pmg: PreMetricGroup
    B: FinAbGroup
    z: Element
    iota: Hom
    name: str = ""
    origin: Condensation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "z", _check_z(self.B, self.z))
        if self.iota.source.factors != self.B.factors:
            raise ValidationError("embedding source must be the dual group of B")
        if self.iota.target != self.pmg.group:
            raise ValidationError("embedding target must be the underlying group")
        # validates injectivity and q o iota = q_z
        object.__setattr__(self, "_grading", canonical_grading(self.pmg, self.iota, self.z))

    @property
    def group(self) -> FinAbGroup:
        return self.pmg.group

    @property
    def dual_group(self) -> FinAbGroup:
        return self.iota.source

    def q(self, x: Element) -> Fraction:
        return self.pmg(x)

    def deg(self, x: Element) -> Element:
        return self._grading[x]

    @property
    def grading(self) -> dict:
        return dict(self._grading)

    def component(self, g: Element) -> tuple[Element, ...]:
        return tuple(x for x in self.group.elements if self._grading[x] == g)

    @cached_property
    def nondegenerate(self) -> bool:
        return is_nondegenerate(self.pmg)

    @property
    def is_mme(self) -> bool:
        """Minimal modular extension of B_z: non-degenerate of order |B|^2."""
        return self.nondegenerate and self.group.order == self.B.order ** 2

    @cached_property
    def embedded(self) -> frozenset:
        return frozenset(self.iota.table.values())

    def trivial_component_is_Bz(self) -> bool:
        return set(self.component(self.B.zero)) == self.embedded


def make_Bz(B: FinAbGroup, z) -> PointedCategory:
    """The symmetric pointed category ``C(B^, q_z)``; degenerate unless B is trivial."""
    z = _check_z(B, z)
    table = [q_z(B, z, phi) for phi in B.elements]
    pmg = PreMetricGroup(B, tuple(table), f"B_{z}")
    return PointedCategory(pmg, B, z, identity_hom(B), pmg.name)


def center_of_Bz(B: FinAbGroup, z) -> PointedCategory:
    """``Z(B_z) = C(B^ x B, Q_z)`` with ``Q_z(phi, b) = phi(b z)`` and B_z as ``B^ x 0``."""
    z = _check_z(B, z)
    E = direct_product(B, B)
    k = B.rank
    table = [dual_pairing(B, x[:k], B.add(x[k:], z)) for x in E.elements]
    pmg = PreMetricGroup(E, tuple(table), f"Z(B_{z})")
    iota = Hom(B, E, tuple(g + B.zero for g in B.generators))
    return PointedCategory(pmg, B, z, iota, pmg.name)


def _same_base(C: PointedCategory, D: PointedCategory):
    if C.B.factors != D.B.factors or C.z != D.z:
        raise ValidationError(
            f"categories are over different (B, z): {C.B.factors},{C.z} vs {D.B.factors},{D.z}")


@dataclass(frozen=True)
class FiberProduct:
    """``C (x)^B D`` as a subgroup of the Deligne product, graded diagonally."""
    left: PointedCategory
    right: PointedCategory
    ambient: PreMetricGroup
    subgroup: Subgroup

    def split(self, x: Element) -> tuple[Element, Element]:
        k = self.left.group.rank
        return x[:k], x[k:]

    def deg(self, x: Element) -> Element:
        return self.left.deg(self.split(x)[0])

    def component(self, g: Element) -> tuple[Element, ...]:
        return tuple(x for x in self.subgroup.elements if self.deg(x) == g)

    def embed_left(self, phi: Element) -> Element:
        return self.left.iota(phi) + self.right.group.zero

    def embed_right(self, phi: Element) -> Element:
        return self.left.group.zero + self.right.iota(phi)


def fiber_product_pointed(C: PointedCategory, D: PointedCategory) -> FiberProduct:
    _same_base(C, D)
    amb = deligne_product(C.pmg, D.pmg, f"{C.name}*{D.name}")
    elems = [x + y for x in C.group.elements for y in D.group.elements if C.deg(x) == D.deg(y)]
    F = subgroup_from_elements(amb.group, elems)
    return FiberProduct(C, D, amb, F)


def nabla(C: PointedCategory, D: PointedCategory) -> Subgroup:
    """The diagonal Tannakian subgroup ``{(iota_C(phi), iota_D(-phi))}``."""
    _same_base(C, D)
    E = direct_product(C.group, D.group)
    Bh = C.dual_group
    gens = [C.iota(phi) + D.iota(Bh.neg(phi)) for phi in Bh.generators]
    H = generate_subgroup(E, gens)
    q = lambda x: C.q(x[:C.group.rank]) + D.q(x[C.group.rank:])
    if any(q(h) % 1 != 0 for h in H.elements):
        raise InvariantViolation("diagonal subgroup is not isotropic; embeddings are invalid")
    return H


def condensed_fiber_product(C: PointedCategory, D: PointedCategory, name: str = "") -> PointedCategory:
    """Condense the diagonal ``nabla`` inside ``C (x) D``; its complement is the fiber product."""
    fp = fiber_product_pointed(C, D)
    H = nabla(C, D)
    cond = condensation(fp.ambient, H, name or f"[{C.name}*{D.name}]")
    if cond.perp != fp.subgroup:
        raise InvariantViolation("complement of the diagonal differs from the fiber product")
    Bh = C.dual_group
    images = tuple(cond.project(fp.embed_left(phi)) for phi in Bh.generators)
    iota = Hom(Bh, cond.result.group, images)
    out = PointedCategory(cond.result, C.B, C.z, iota, cond.result.name, origin=cond)
    if out.group.order * C.B.order ** 2 != C.group.order * D.group.order:
        raise InvariantViolation("dimension bookkeeping |E_C||E_D| = |E||B|^2 failed")
    if C.nondegenerate and D.nondegenerate and not out.nondegenerate:
        raise InvariantViolation("condensed fiber product of non-degenerate inputs is degenerate")
    return out


# ---------------------------------------------------------------------------
# equivalence and enumeration

def pointed_isomorphic(C: PointedCategory, D: PointedCategory, respect_embedding: bool = True,
                       bound: int = DEFAULT_ISO_BOUND) -> Hom | None:
    """Braided equivalence; by default it must carry ``iota_C(B^)`` onto ``iota_D(B^)``.

    Mapping the embedded copy onto the embedded copy is the same as
    ``f o iota_C = iota_D o a`` for an automorphism ``a`` of B^ fixing ``q_z``.
    """
    if respect_embedding:
        _same_base(C, D)
        pred = lambda f: {f(x) for x in C.embedded} == D.embedded
    else:
        pred = None
    return premetric_isomorphic(C.pmg, D.pmg, pred, bound)


def embeddings(P: PreMetricGroup, B: FinAbGroup, z) -> list[Hom]:
    """All injective ``iota: B^ -> E`` with ``q o iota = q_z``."""
    z = _check_z(B, z)
    E = P.group
    cands = []
    for g, n in zip(B.generators, B.factors):
        target = q_z(B, z, g)
        cands.append([y for y in E.elements if E.mul(n, y) == E.zero and P(y) == target])
    out = []
    for imgs in itertools.product(*cands):
        f = Hom(B, E, imgs)
        if f.is_injective() and all(P(f(phi)) == q_z(B, z, phi) for phi in B.elements):
            out.append(f)
    return out


def enumerate_pointed_mme(B: FinAbGroup, z, max_B: int = 4,
                          respect_embedding: bool = True) -> list[PointedCategory]:
    """Pointed minimal modular extensions of B_z up to (embedding-compatible) braided equivalence."""
    z = _check_z(B, z)
    if B.order > max_B:
        raise CapacityError(f"|B| = {B.order} exceeds the enumeration bound {max_B}")
    classes: list[PointedCategory] = []
    # every (E, q, iota) is isometric to one with (E, q) a class representative
    for P in metric_group_classes(B.order ** 2):
        bucket: list[PointedCategory] = []
        for iota in embeddings(P, B, z):
            C = PointedCategory(P, B, z, iota)
            if not respect_embedding and bucket:
                break
            if any(pointed_isomorphic(C, R, respect_embedding) is not None for R in bucket):
                continue
            sigma = central_charge(P)
            C = PointedCategory(P, B, z, iota, f"mme[{P.group.factors};sigma={sigma};#{len(classes)}]")
            bucket.append(C)
            classes.append(C)
    return classes


# ---------------------------------------------------------------------------
# modular data

@dataclass(frozen=True)
class PointedModularData:
    """Exponents of exact modular data: ``S = exp(2 pi i S_exp) / sqrt(|E|)``, ``T = exp(2 pi i T_exp)``."""
    labels: tuple[Element, ...]
    S_exp: tuple[tuple[Fraction, ...], ...]
    T_exp: tuple[Fraction, ...]
    normalization: str

    def matrices(self):
        n = len(self.labels)
        S = np.exp(2j * np.pi * np.array([[float(v) for v in r] for r in self.S_exp])) / np.sqrt(n)
        T = np.diag(np.exp(2j * np.pi * np.array([float(v) for v in self.T_exp])))
        return S, T

    def check_relations(self, tol: float = 1e-9) -> complex:
        """Verify S unitary and ``(S^-1 T)^3 = c S^-2``; returns the scalar c."""
        S, T = self.matrices()
        n = S.shape[0]
        if not np.allclose(S @ S.conj().T, np.eye(n), atol=tol):
            raise InvariantViolation("S is not unitary")
        Si = S.conj().T
        lhs = np.linalg.matrix_power(Si @ T, 3)
        rhs = Si @ Si
        c = lhs[0, 0] / rhs[0, 0]
        if not np.allclose(lhs, c * rhs, atol=tol):
            raise InvariantViolation("(S^-1 T)^3 is not proportional to S^-2")
        return complex(c)


def modular_data_pointed(C: PointedCategory | PreMetricGroup) -> PointedModularData:
    P = C.pmg if isinstance(C, PointedCategory) else C
    if not is_nondegenerate(P):
        raise ValidationError("modular data requires a non-degenerate category")
    els = P.group.elements
    S = tuple(tuple(P.b(x, y) for y in els) for x in els)
    return PointedModularData(els, S, P.q, f"1/sqrt({P.order})")
