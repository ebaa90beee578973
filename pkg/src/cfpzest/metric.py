"""Pre-metric groups: pointed braided fusion categories up to braided equivalence.

A pre-metric group is a finite abelian group ``E`` with a quadratic form
``q: E -> Q/Z``.  Twists are ``theta(x) = exp(2 pi i q(x))`` and the double
braiding of ``x`` and ``y`` is ``exp(2 pi i b(x, y))`` with
``b(x, y) = q(x+y) - q(x) - q(y)``.  Phases are ``Fraction`` values reduced
into ``[0, 1)``.
"""
from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .abgroup import (DEFAULT_ISO_BOUND, Element, FinAbGroup, Hom, Quotient, Subgroup, abelian_groups_of_order,
                      canonical_factors, direct_product, dual_pairing, generate_subgroup, quotient,
                      subgroup_from_elements)
from .errors import CapacityError, InvariantViolation, NotCondensable, ValidationError

MILGRAM_TOL = 1e-9
SNAP_TOL = 1e-6


def phase(x) -> Fraction:
    return Fraction(x) % 1


def format_phase(x: Fraction) -> str:
    x = phase(x)
    return "0" if x == 0 else f"{x.numerator}/{x.denominator}"


def parse_phase(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValidationError(f"phase must be a fraction string, got {s!r}")
    try:
        return phase(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"malformed phase {s!r}") from None


@dataclass(frozen=True)
class PreMetricGroup:
    group: FinAbGroup
    q: tuple[Fraction, ...]
    name: str = ""
    origin: Quotient | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(phase(v) for v in self.q))
        if len(self.q) != self.group.order:
            raise ValidationError(
                f"q table has {len(self.q)} entries, group has order {self.group.order}")

    def __call__(self, x: Element) -> Fraction:
        return self.q[self.group.index(x)]

    @property
    def order(self) -> int:
        return self.group.order

    def b(self, x: Element, y: Element) -> Fraction:
        G = self.group
        return (self(G.add(x, y)) - self(x) - self(y)) % 1

    def twist_multiset(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.q))


def validate_premetric(E: FinAbGroup, table: Sequence, name: str = "") -> PreMetricGroup:
    """Check the quadratic-form axioms by exhaustive enumeration."""
    if len(table) != E.order:
        raise ValidationError(f"q table has {len(table)} entries, group has order {E.order}")
    P = PreMetricGroup(E, tuple(phase(v) for v in table), name)
    if P(E.zero) != 0:
        raise ValidationError(f"q(0) = {format_phase(P(E.zero))}, must be 0")
    for x in E.elements:
        if P(E.neg(x)) != P(x):
            raise ValidationError(f"q(-x) != q(x) at x={x}")
    # b(., z) additive for every z; checking x -> x + e_i suffices
    for z in E.elements:
        bz = {x: P.b(x, z) for x in E.elements}
        for x in E.elements:
            for g in E.generators:
                y = E.add(x, g)
                if bz[y] != (bz[x] + bz[g]) % 1:
                    raise ValidationError(f"b not bilinear at pair ({x}, {g}) against {z}")
    return P


def bilinear_form(P: PreMetricGroup, x: Element, y: Element) -> Fraction:
    return P.b(x, y)


def deligne_product(P: PreMetricGroup, Q: PreMetricGroup, name: str = "") -> PreMetricGroup:
    E = direct_product(P.group, Q.group)
    k = P.group.rank
    table = [P(x[:k]) + Q(x[k:]) for x in E.elements]
    return PreMetricGroup(E, tuple(table), name or f"{P.name}*{Q.name}")


def orthogonal_complement(P: PreMetricGroup, H: Subgroup | Iterable[Element]) -> Subgroup:
    gens = H.gens if isinstance(H, Subgroup) else tuple(H)
    E = P.group
    perp = [x for x in E.elements if all(P.b(x, h) == 0 for h in gens)]
    return subgroup_from_elements(E, perp)


def radical(P: PreMetricGroup) -> Subgroup:
    return orthogonal_complement(P, P.group.generators)


def is_nondegenerate(P: PreMetricGroup) -> bool:
    # integer numerators over a common denominator; same test as radical(P).order == 1
    E = P.group
    L = math.lcm(*(v.denominator for v in P.q))
    q = [v.numerator * (L // v.denominator) for v in P.q]
    gens = [E.index(g) for g in E.generators]
    for i, x in enumerate(E.elements[1:], start=1):
        if all((q[E.index(E.add(x, E.elements[g]))] - q[i] - q[g]) % L == 0 for g in gens):
            return False
    return True


@dataclass(frozen=True)
class Condensation:
    """Result of ``H^perp / H`` together with the coset bookkeeping."""
    source: PreMetricGroup
    H: Subgroup
    perp: Subgroup
    quotient: Quotient
    result: PreMetricGroup

    def project(self, x: Element) -> Element:
        return self.quotient.project(x)

    def section(self, y: Element) -> Element:
        return self.quotient.section(y)


def condensation(P: PreMetricGroup, H: Subgroup | Iterable[Element], name: str = "") -> Condensation:
    E = P.group
    if not isinstance(H, Subgroup):
        H = generate_subgroup(E, H)
    bad = [h for h in H.elements if P(h) != 0]
    if bad:
        raise NotCondensable(f"not condensable: q({bad[0]}) = {format_phase(P(bad[0]))} != 0")
    perp = orthogonal_complement(P, H)
    if not all(h in perp for h in H.gens):
        # isotropic implies H <= H^perp; unreachable for valid forms
        raise InvariantViolation("isotropic subgroup not contained in its complement")
    Qt = quotient(E, perp.gens, H.gens)
    table = []
    for y in Qt.group.elements:
        coset = Qt.coset(y)
        vals = {P(x) for x in coset}
        if len(vals) != 1:
            raise InvariantViolation(f"q not constant on coset of {y}")
        table.append(vals.pop())
    result = PreMetricGroup(Qt.group, tuple(table), name or f"{P.name}//H", origin=Qt)
    return Condensation(P, H, perp, Qt, result)


def condense(P: PreMetricGroup, H: Subgroup | Iterable[Element], name: str = "") -> PreMetricGroup:
    """Condense the Tannakian (isotropic) subgroup H: returns ``H^perp / H`` with the induced form."""
    return condensation(P, H, name).result


def gauss_sum(P: PreMetricGroup) -> complex:
    return sum(cmath.exp(2j * math.pi * float(v)) for v in P.q)


def central_charge(P: PreMetricGroup) -> int:
    """Index ``sigma`` in Z/8 with normalized Gauss sum ``exp(2 pi i sigma / 8)``."""
    if not is_nondegenerate(P):
        raise ValidationError("central charge requires a non-degenerate form")
    s = gauss_sum(P)
    if abs(abs(s) - math.sqrt(P.order)) > MILGRAM_TOL:
        raise InvariantViolation(f"|Gauss sum| = {abs(s):.12f}, expected sqrt({P.order})")
    u = s / abs(s)
    sigma = round(cmath.phase(u) / (2 * math.pi) * 8) % 8
    if abs(u - cmath.exp(2j * math.pi * sigma / 8)) > SNAP_TOL:
        raise InvariantViolation(f"normalized Gauss sum {u} is not an 8th root of unity")
    return sigma


def canonical_grading(P: PreMetricGroup, iota: Hom, z: Element | None = None) -> dict:
    """Degree map ``x -> b`` characterized by ``b(x, iota(phi)) = <phi, b>`` for all phi.

    ``iota`` goes from the dual group (same factors as B) into ``P.group``.
    When ``z`` is given the embedding is also checked against ``q_z``.
    """
    B = iota.source
    if iota.target != P.group:
        raise ValidationError("embedding target is not the pre-metric group")
    if not iota.is_injective():
        raise ValidationError("embedding of the dual group is not injective")
    if z is not None:
        for phi in B.elements:
            if P(iota(phi)) != dual_pairing(B, phi, z):
                raise ValidationError(f"q(iota({phi})) != q_z({phi}): not a valid B_z embedding")
    deg = {}
    for x in P.group.elements:
        coeffs = []
        for i, n in enumerate(B.factors):
            c = P.b(x, iota.images[i]) * n
            if c.denominator != 1:
                raise InvariantViolation(f"b(x, iota(e_{i})) has order not dividing {n}")
            coeffs.append(int(c) % n)
        deg[x] = tuple(coeffs)
    return deg


def premetric_isomorphic(P: PreMetricGroup, Q: PreMetricGroup,
                         predicate: Callable[[Hom], bool] | None = None,
                         bound: int = DEFAULT_ISO_BOUND) -> Hom | None:
    """An isometry ``f: P -> Q`` (``q_Q o f = q_P``) satisfying ``predicate``, or None."""
    if P.order != Q.order or P.twist_multiset() != Q.twist_multiset():
        return None
    G, H = P.group, Q.group
    if P.order > bound:
        raise CapacityError(f"isometry search on order {P.order} exceeds bound {bound}")
    if canonical_factors(G.factors) != canonical_factors(H.factors):
        return None
    for f in isometries(P, Q):
        if predicate is None or predicate(f):
            return f
    return None


def isometries(P: PreMetricGroup, Q: PreMetricGroup) -> Iterator[Hom]:
    """Every isometry ``P -> Q``, by backtracking over generator images.

    A quadratic form is fixed by ``q`` on generators and ``b`` on pairs of
    generators, so images are pruned on exactly those values.
    """
    G, H = P.group, Q.group
    gens = G.generators
    cands = [[y for y in H.elements if H.element_order(y) == n and Q(y) == P(g)]
             for g, n in zip(gens, G.factors)]
    imgs: list = []

    def rec(i):
        if i == len(gens):
            f = Hom(G, H, tuple(imgs))
            if f.is_bijective() and all(Q(f(x)) == P(x) for x in G.elements):
                yield f
            return
        for y in cands[i]:
            if all(Q.b(y, imgs[j]) == P.b(gens[i], gens[j]) for j in range(i)):
                imgs.append(y)
                yield from rec(i + 1)
                imgs.pop()

    yield from rec(0)


@functools.lru_cache(maxsize=None)
def metric_group_classes(n: int) -> tuple[PreMetricGroup, ...]:
    """One representative per isometry class of non-degenerate forms of order n."""
    reps: list[PreMetricGroup] = []
    buckets: dict = {}
    for E in abelian_groups_of_order(n):
        for P in all_quadratic_forms(E):
            if not is_nondegenerate(P):
                continue
            key = (E.factors, tuple(sorted((E.element_order(x), P(x)) for x in E.elements)))
            bucket = buckets.setdefault(key, [])
            if any(premetric_isomorphic(P, R) is not None for R in bucket):
                continue
            bucket.append(P)
            reps.append(P)
    return tuple(reps)


def _form_steps(E: FinAbGroup):
    """Denominator L and the lattices of admissible generator data.

    ``q(e_i)`` lives in ``(1/(n_i * gcd(n_i, 2))) Z / Z`` and ``b(e_i, e_j)`` in
    ``(1/gcd(n_i, n_j)) Z / Z``; every quadratic form arises exactly once.
    """
    L = 2 * E.exponent
    n = E.factors
    q_steps = [L // (m * math.gcd(m, 2)) for m in n]
    pairs = list(itertools.combinations(range(E.rank), 2))
    b_steps = [L // math.gcd(n[i], n[j]) for i, j in pairs]
    return L, q_steps, pairs, b_steps


def count_quadratic_forms(E: FinAbGroup) -> int:
    L, q_steps, _, b_steps = _form_steps(E)
    return math.prod(L // s for s in q_steps) * math.prod(L // s for s in b_steps)


def all_quadratic_forms(E: FinAbGroup) -> Iterable[PreMetricGroup]:
    """Every quadratic form on E, built from its values on generators."""
    L, q_steps, pairs, b_steps = _form_steps(E)
    elems = E.elements
    for qs in itertools.product(*(range(0, L, s) for s in q_steps)):
        diag = [sum(x[i] * x[i] * qs[i] for i in range(E.rank)) for x in elems]
        for bs in itertools.product(*(range(0, L, s) for s in b_steps)):
            table = [(d + sum(x[i] * x[j] * c for (i, j), c in zip(pairs, bs))) % L
                     for d, x in zip(diag, elems)]
            yield PreMetricGroup(E, tuple(Fraction(v, L) for v in table))
