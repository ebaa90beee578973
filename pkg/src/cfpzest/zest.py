"""Zesting data for a grading by B with transparent invertibles B_z.

Cochains on G with values in a finite abelian group M (trivial action) are
stored as full tables over ``G^n`` in lexicographic order.  Phase-valued
cochains use ``M = Z/N`` read as ``(1/N) Z / Z``.

The differential is the standard one for trivial coefficients::

    (df)(g_1..g_{n+1}) = f(g_2..g_{n+1})
                         + sum_i (-1)^i f(.., g_i + g_{i+1}, ..)
                         + (-1)^{n+1} f(g_1..g_n)

Cohomology is computed on normalized cochains, one cyclic coefficient
component at a time, with integer Smith normal forms.
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

import numpy as np
import sympy

from .abgroup import (Element, FinAbGroup, hom_kernel, integer_kernel, smith, solve_mod,
                      span_order)
from .errors import CapacityError, InvariantViolation, Obstructed, ValidationError
from .fusion import (GradedFusionRing, _rebuild, cfp_ring, element_label, orbit_containing,
                     ring_of_premetric)
from .pointed import PointedCategory, condensed_fiber_product, q_z

MAX_TABLE = 10 ** 6
MAX_CELLS = 800
MAX_ENUM = 1 << 16


# ---------------------------------------------------------------------------
# cochains

def _table_size(G: FinAbGroup, n: int) -> int:
    size = G.order ** n
    if size > MAX_TABLE:
        raise CapacityError(f"cochain table |G|^{n} = {size} exceeds {MAX_TABLE}")
    return size


def normalized_cells(G: FinAbGroup, n: int) -> list[tuple[Element, ...]]:
    """Arguments of a normalized n-cochain that are not forced to vanish."""
    _table_size(G, n)
    nz = [g for g in G.elements if g != G.zero]
    return list(itertools.product(nz, repeat=n))


@dataclass(frozen=True)
class Cochain:
    degree: int
    G: FinAbGroup
    M: FinAbGroup
    values: tuple[Element, ...] = field(repr=False)
    phase: bool = False

    def __post_init__(self):
        if len(self.values) != self.G.order ** self.degree:
            raise ValidationError(
                f"cochain table has {len(self.values)} entries, expected {self.G.order ** self.degree}")
        if self.phase and self.M.rank != 1:
            raise ValidationError("phase cochains take values in a single cyclic lattice")
        object.__setattr__(self, "values", tuple(self.M.reduce(v) for v in self.values))

    def _pos(self, args: Sequence[Element]) -> int:
        if len(args) != self.degree:
            raise ValidationError(f"expected {self.degree} arguments, got {len(args)}")
        i = 0
        for g in args:
            i = i * self.G.order + self.G.index(g)
        return i

    def __call__(self, *args: Element) -> Element:
        return self.values[self._pos(args)]

    def phase_of(self, *args: Element) -> Fraction:
        if not self.phase:
            raise ValidationError("not a phase-valued cochain")
        return Fraction(self(*args)[0], self.M.factors[0])

    @property
    def denominator(self) -> int:
        return self.M.factors[0] if self.phase else 0

    def items(self):
        return zip(itertools.product(self.G.elements, repeat=self.degree), self.values)

    def is_normalized(self) -> bool:
        zero = self.G.zero
        return all(v == self.M.zero for args, v in self.items() if zero in args)

    def is_zero(self) -> bool:
        return all(v == self.M.zero for v in self.values)

    def coboundary(self) -> "Cochain":
        G, M, n = self.G, self.M, self.degree
        _table_size(G, n + 1)
        out = []
        for args in itertools.product(G.elements, repeat=n + 1):
            acc = self(*args[1:])
            for i in range(n):
                merged = args[:i] + (G.add(args[i], args[i + 1]),) + args[i + 2:]
                term = self(*merged)
                acc = M.add(acc, term) if (i + 1) % 2 == 0 else M.sub(acc, term)
            last = self(*args[:n])
            acc = M.add(acc, last) if (n + 1) % 2 == 0 else M.sub(acc, last)
            out.append(acc)
        return Cochain(n + 1, G, M, tuple(out), self.phase)

    def is_cocycle(self) -> bool:
        return self.coboundary().is_zero()

    def add(self, other: "Cochain") -> "Cochain":
        self._same_shape(other)
        return Cochain(self.degree, self.G, self.M,
                       tuple(self.M.add(a, b) for a, b in zip(self.values, other.values)), self.phase)

    def sub(self, other: "Cochain") -> "Cochain":
        self._same_shape(other)
        return Cochain(self.degree, self.G, self.M,
                       tuple(self.M.sub(a, b) for a, b in zip(self.values, other.values)), self.phase)

    def _same_shape(self, other: "Cochain"):
        if (self.degree, self.G, self.M, self.phase) != (other.degree, other.G, other.M, other.phase):
            raise ValidationError("cochains of different shape")

    def rescale(self, N: int) -> "Cochain":
        """Re-express a phase cochain in the lattice ``(1/N) Z / Z``."""
        if not self.phase or N % self.denominator:
            raise ValidationError(f"cannot move a 1/{self.denominator} lattice into 1/{N}")
        k = N // self.denominator
        return Cochain(self.degree, self.G, FinAbGroup((N,)), tuple((v[0] * k,) for v in self.values), True)


def zero_cochain(G: FinAbGroup, M: FinAbGroup, n: int, phase: bool = False) -> Cochain:
    return Cochain(n, G, M, (M.zero,) * _table_size(G, n), phase)


def cochain_from_function(G: FinAbGroup, M: FinAbGroup, n: int, f, phase: bool = False) -> Cochain:
    _table_size(G, n)
    return Cochain(n, G, M, tuple(f(*args) for args in itertools.product(G.elements, repeat=n)), phase)


def phase_lattice(N: int) -> FinAbGroup:
    return FinAbGroup((N,)) if N > 1 else FinAbGroup(())


def _from_cells(G, M, n, cells, vectors, phase=False) -> Cochain:
    """Full table from per-component vectors over the normalized cells."""
    pos = {c: i for i, c in enumerate(cells)}
    vals = []
    for args in itertools.product(G.elements, repeat=n):
        i = pos.get(args)
        vals.append(M.zero if i is None else tuple(v[i] for v in vectors))
    return Cochain(n, G, M, tuple(vals), phase)


def _to_cells(f: Cochain, cells) -> list[list[int]]:
    return [[f(*c)[j] for c in cells] for j in range(f.M.rank)]


def differential_matrix(G: FinAbGroup, n: int) -> tuple[list, list, list[list[int]]]:
    """Integer matrix of d on normalized cochains, rows indexed by normalized (n+1)-cells."""
    src = normalized_cells(G, n)
    dst = normalized_cells(G, n + 1)
    if len(src) > MAX_CELLS or len(dst) > MAX_CELLS * 8:
        raise CapacityError(f"normalized cochain spaces of size {len(src)}/{len(dst)} are too large")
    pos = {c: i for i, c in enumerate(src)}
    rows = []
    for args in dst:
        row = [0] * len(src)
        terms = [(args[1:], 1)]
        for i in range(n):
            terms.append((args[:i] + (G.add(args[i], args[i + 1]),) + args[i + 2:], (-1) ** (i + 1)))
        terms.append((args[:n], (-1) ** (n + 1)))
        for t, s in terms:
            j = pos.get(t)
            if j is not None:
                row[j] += s
        rows.append(row)
    return src, dst, rows


# ---------------------------------------------------------------------------
# cohomology

def _span_elements(gens: list[list[int]], moduli: list[int], limit: int) -> list[tuple]:
    zero = tuple(0 for _ in moduli)
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple((a + b) % m for a, b, m in zip(x, g, moduli))
            if y not in seen:
                if len(seen) >= limit:
                    raise CapacityError(f"more than {limit} cochains to enumerate")
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _homology_generators(Zg, Bg, m: int, c: int):
    """Invariant factors of ``Z / B`` inside ``(Z/m)^c`` and lifts of its generators."""
    k = len(Zg)
    if k == 0:
        return [], []
    rows = [[z[i] for z in Zg] + [-b[i] for b in Bg] + [-m if t == i else 0 for t in range(c)]
            for i in range(c)]
    rel = [v[:k] for v in integer_kernel(rows, k + len(Bg) + c)]
    R = [[v[i] for v in rel] for i in range(k)]
    diag, S, _ = smith(R, len(rel))
    diag = [abs(d) for d in diag] + [0] * (k - len(diag))
    if any(d == 0 for d in diag):
        raise InvariantViolation("cohomology of a finite complex came out infinite")
    Sinv = sympy.Matrix(S).inv()
    factors, lifts = [], []
    for i, d in enumerate(diag):
        if d > 1:
            col = [int(Sinv[j, i]) for j in range(k)]
            factors.append(d)
            lifts.append([sum(col[j] * Zg[j][t] for j in range(k)) % m for t in range(c)])
    return factors, lifts


@dataclass(frozen=True)
class CocycleSpace:
    """Normalized n-cocycles, coboundaries and a basis of ``H^n`` for trivial coefficients."""
    G: FinAbGroup
    M: FinAbGroup
    degree: int
    cells: tuple = field(repr=False)
    cocycle_gens: tuple = field(repr=False)      # per component: list of cell vectors
    coboundary_gens: tuple = field(repr=False)
    cocycle_order: int
    coboundary_order: int
    H_factors: tuple[int, ...]
    H_gens: tuple = field(repr=False)            # Cochains, one per factor
    phase: bool = False

    @property
    def H_order(self) -> int:
        return self.cocycle_order // self.coboundary_order

    def representatives(self, limit: int = MAX_ENUM) -> list[Cochain]:
        """One normalized cocycle per cohomology class, as combinations of ``H_gens``."""
        if self.H_order > limit:
            raise CapacityError(f"|H^{self.degree}| = {self.H_order} exceeds {limit}")
        out = []
        for coeffs in itertools.product(*(range(d) for d in self.H_factors)):
            f = zero_cochain(self.G, self.M, self.degree, self.phase)
            for k, g in zip(coeffs, self.H_gens):
                for _ in range(k):
                    f = f.add(g)
            out.append(f)
        return out

    def cocycles(self, limit: int = MAX_ENUM) -> list[Cochain]:
        if self.cocycle_order > limit:
            raise CapacityError(f"|Z^{self.degree}| = {self.cocycle_order} exceeds {limit}")
        return self._enumerate(self.cocycle_gens, limit)

    def coboundaries(self, limit: int = MAX_ENUM) -> list[Cochain]:
        if self.coboundary_order > limit:
            raise CapacityError(f"|B^{self.degree}| = {self.coboundary_order} exceeds {limit}")
        return self._enumerate(self.coboundary_gens, limit)

    def _enumerate(self, gens_per_comp, limit):
        c = len(self.cells)
        per = [_span_elements(g, [m] * c, limit) for g, m in zip(gens_per_comp, self.M.factors)]
        return [_from_cells(self.G, self.M, self.degree, self.cells, vecs, self.phase)
                for vecs in itertools.product(*per)]

    def contains(self, f: Cochain) -> bool:
        return f.is_normalized() and f.is_cocycle()

    def is_coboundary(self, f: Cochain) -> bool:
        """Membership of a normalized cocycle in ``B^n`` by a modular linear solve."""
        if self.degree == 0 or not self.contains(f):
            return False
        src, _, D = differential_matrix(self.G, self.degree - 1) if self.degree > 1 else (None, None, None)
        if D is None:
            return f.is_zero()
        target = _to_cells(f, self.cells)
        return all(solve_mod(D, t, len(src), m) is not None for t, m in zip(target, self.M.factors))


@functools.lru_cache(maxsize=64)
def solve_cocycles(G: FinAbGroup, M: FinAbGroup, degree: int, phase: bool = False) -> CocycleSpace:
    if degree not in (1, 2, 3):
        raise ValidationError(f"degree must be 1, 2 or 3, got {degree}")
    cells, _, D = differential_matrix(G, degree)
    c = len(cells)
    if degree > 1:
        prev, _, Dp = differential_matrix(G, degree - 1)
    else:
        prev, Dp = [], []
    zg, bg, zord, bord, hf, hg = [], [], 1, 1, [], []
    for j, m in enumerate(M.factors):
        Z = hom_kernel(D, [m] * c, [m] * len(D)) if D else \
            [[int(i == t) for t in range(c)] for i in range(c)]
        Bv = [[Dp[r][s] % m for r in range(c)] for s in range(len(prev))] if prev else []
        Bv = [v for v in Bv if any(v)]
        zg.append(Z)
        bg.append(Bv)
        zo = span_order(Z, [m] * c)
        bo = span_order(Bv, [m] * c)
        zord *= zo
        bord *= bo
        factors, lifts = _homology_generators(Z, Bv, m, c)
        for d, v in zip(factors, lifts):
            vecs = [v if t == j else [0] * c for t in range(M.rank)]
            hf.append(d)
            hg.append(_from_cells(G, M, degree, cells, vecs, phase))
    space = CocycleSpace(G, M, degree, tuple(cells), tuple(zg), tuple(bg), zord, bord,
                         tuple(hf), tuple(hg), phase)
    if prod(hf) != space.H_order:
        raise InvariantViolation("homology generators disagree with |Z|/|B|")
    for g in hg:
        if not g.is_cocycle():
            raise InvariantViolation("homology generator is not a cocycle")
    return space


def cohomology_order(G: FinAbGroup, M: FinAbGroup, degree: int) -> int:
    return solve_cocycles(G, M, degree).H_order


# ---------------------------------------------------------------------------
# nu

def beta(B: FinAbGroup, z: Element, phi: Element, psi: Element) -> Fraction:
    """Scalar braiding of transparent invertibles: 1/2 exactly when both are fermions."""
    h = Fraction(1, 2)
    return h if q_z(B, z, phi) == h and q_z(B, z, psi) == h else Fraction(0)


def nu_obstruction(G: FinAbGroup, B: FinAbGroup, z: Element, lam: Cochain) -> dict:
    """The right-hand side ``(g1..g4) -> beta(lam(g1,g2), lam(g3,g4))`` as a phase table."""
    _table_size(G, 4)
    return {args: beta(B, z, lam(args[0], args[1]), lam(args[2], args[3]))
            for args in itertools.product(G.elements, repeat=4)}


def _check_lambda(G: FinAbGroup, B: FinAbGroup, lam: Cochain):
    if lam.degree != 2 or lam.G != G or lam.M.factors != B.factors or lam.phase:
        raise ValidationError("lambda must be a 2-cochain on G valued in the dual of B")
    if not lam.is_normalized():
        raise ValidationError("lambda is not normalized")
    if not lam.is_cocycle():
        raise ValidationError("lambda is not a 2-cocycle")


@dataclass(frozen=True)
class NuSolutions:
    """All normalized solutions: ``particular + Z^3(G, (1/N) Z / Z)``."""
    G: FinAbGroup
    B: FinAbGroup
    z: Element
    lam: Cochain
    particular: Cochain
    homogeneous: CocycleSpace

    @property
    def denominator(self) -> int:
        return self.particular.denominator

    @property
    def count(self) -> int:
        return self.homogeneous.cocycle_order

    def all(self, limit: int = MAX_ENUM) -> list[Cochain]:
        return [self.particular.add(h) for h in self.homogeneous.cocycles(limit)]

    def values_at(self, args: tuple, limit: int = MAX_ENUM) -> list[Fraction]:
        return sorted({nu.phase_of(*args) for nu in self.all(limit)})


def check_nu(G: FinAbGroup, B: FinAbGroup, z: Element, lam: Cochain, nu: Cochain) -> bool:
    """``d nu`` reproduces ``beta(lam, lam)`` exactly and ``nu`` is normalized."""
    if not nu.phase or nu.degree != 3 or not nu.is_normalized():
        return False
    dnu = nu.coboundary()
    rhs = nu_obstruction(G, B, z, lam)
    N = nu.denominator
    return all(Fraction(v[0], N) == rhs[args] for args, v in dnu.items())


def solve_nu(G: FinAbGroup, B: FinAbGroup, z, lam: Cochain) -> NuSolutions:
    """Normalized ``nu`` with ``d nu = beta(lam, lam)`` in ``(1/(2|G|)) Z / Z``.

    The lattice is doubled once on inconsistency; after that the datum is
    reported as obstructed.
    """
    z = B.reduce(z)
    _check_lambda(G, B, lam)
    rhs = nu_obstruction(G, B, z, lam)
    src, dst, D = differential_matrix(G, 3)
    for N in (2 * G.order, 4 * G.order):
        target = []
        for args in dst:
            v = rhs[args] * N
            if v.denominator != 1:
                raise InvariantViolation("obstruction has a denominator outside the lattice")
            target.append(int(v) % N)
        x = solve_mod(D, target, len(src), N) if D else ([] if not any(target) else None)
        if x is None:
            continue
        M = phase_lattice(N)
        nu = _from_cells(G, M, 3, src, [x], phase=True)
        if not check_nu(G, B, z, lam, nu):
            raise InvariantViolation("solved nu fails the defining equation")
        return NuSolutions(G, B, z, lam, nu, solve_cocycles(G, M, 3, phase=True))
    raise Obstructed("obstructed: d nu = beta(lambda, lambda) has no solution in (1/(4|G|))Z/Z")


# ---------------------------------------------------------------------------
# extraction from pointed extensions

def _section(P: PointedCategory, section: Mapping | None) -> dict:
    G = P.B
    Z = {}
    for g in G.elements:
        comp = P.component(g)
        if not comp:
            raise ValidationError(f"grade {g} is empty; the grading is not onto")
        Z[g] = comp[0]
    if section:
        for g, x in section.items():
            g = G.reduce(g)
            if P.deg(x) != g:
                raise ValidationError(f"section value {x} does not have grade {g}")
            Z[g] = x
    if Z[G.zero] != P.group.zero:
        raise ValidationError("section must send the identity grade to 0")
    return Z


def extract_lambda_from_pointed(P: PointedCategory, section: Mapping | None = None):
    """``alpha(g, h) = Z_g + Z_h - Z_{g+h}`` pulled back to the dual of B."""
    if not P.trivial_component_is_Bz():
        raise ValidationError("extension is not of pointed-fiber type")
    G, E = P.B, P.group
    Z = _section(P, section)
    inv = {y: phi for phi, y in P.iota.table.items()}
    Bh = P.dual_group
    vals = []
    for g, h in itertools.product(G.elements, repeat=2):
        a = E.sub(E.add(Z[g], Z[h]), Z[G.add(g, h)])
        if a not in inv:
            raise InvariantViolation("section defect left the trivial component")
        vals.append(inv[a])
    lam = Cochain(2, G, Bh, tuple(vals))
    _check_lambda(G, Bh, lam)
    return lam, Z


def _ring_section(R: GradedFusionRing, section: Mapping | None) -> dict:
    G = R.grading_group
    Z = {}
    for g in G.elements:
        comp = R.component(g)
        if not comp:
            raise ValidationError(f"grade {g} is empty; the grading is not onto")
        Z[g] = R.index(comp[0])
    for g, l in (section or {}).items():
        g = G.reduce(g)
        if R.grade_of(l) != g:
            raise ValidationError(f"section value {l!r} does not have grade {g}")
        Z[g] = R.index(l)
    if Z[G.zero] != R.unit:
        raise ValidationError("section must send the identity grade to the unit")
    return Z


def extract_lambda_from_ring(R: GradedFusionRing, section: Mapping | None = None):
    """Same construction for a pointed ring carrying its distinguished invertibles."""
    if R.bz is None:
        raise ValidationError("ring has no distinguished invertibles")
    if not all(R.is_invertible(a) for a in range(R.rank)):
        raise ValidationError("extension is not pointed")
    if set(R.component(R.grading_group.zero)) != {R.labels[i] for i in R.bz}:
        raise ValidationError("extension is not of pointed-fiber type")
    G, Bh = R.grading_group, R.bz_group
    if G.factors != Bh.factors:
        raise ValidationError("grading group and distinguished invertibles do not match")
    Z = _ring_section(R, section)
    pos = {a: phi for phi, a in zip(Bh.elements, R.bz)}
    vals = []
    for g, h in itertools.product(G.elements, repeat=2):
        prod_gh = R.act(Z[g], Z[h])
        # alpha with Z_g Z_h = Z_{g+h} alpha
        hits = [a for a in R.bz if R.act(Z[G.add(g, h)], a) == prod_gh]
        if len(hits) != 1:
            raise InvariantViolation("section defect is not a unique distinguished invertible")
        vals.append(pos[hits[0]])
    lam = Cochain(2, G, Bh, tuple(vals))
    _check_lambda(G, Bh, lam)
    return lam, {g: R.labels[a] for g, a in Z.items()}


@dataclass(frozen=True)
class ZestingDatum:
    G: FinAbGroup
    B: FinAbGroup
    z: Element
    lam: Cochain
    nu: Cochain
    t: Cochain | None = None

    def __post_init__(self):
        object.__setattr__(self, "z", self.B.reduce(self.z))
        if self.B.mul(2, self.z) != self.B.zero:
            raise ValidationError(f"z = {self.z} does not satisfy 2z = 0")
        _check_lambda(self.G, self.B, self.lam)
        if self.nu.G != self.G or not check_nu(self.G, self.B, self.z, self.lam, self.nu):
            raise ValidationError("nu does not satisfy d nu = beta(lambda, lambda)")
        if self.t is not None and (self.t.degree != 2 or not self.t.phase or self.t.G != self.G):
            raise ValidationError("t must be a phase-valued 2-cochain on G")


def zesting_datum(G: FinAbGroup, B: FinAbGroup, z, lam: Cochain) -> ZestingDatum:
    sols = solve_nu(G, B, z, lam)
    return ZestingDatum(G, B, z, lam, sols.particular)


# ---------------------------------------------------------------------------
# zested rings and twists

def _as_ring(X) -> GradedFusionRing:
    return ring_of_premetric(X) if isinstance(X, PointedCategory) else X


def zest_fusion_ring(R: GradedFusionRing, lam: Cochain) -> GradedFusionRing:
    """``N'(a, b, c) = N(a, b, c (x) lam(|a|, |b|)^-1)`` on the same graded basis."""
    if R.bz is None:
        raise ValidationError("ring has no distinguished invertibles to zest with")
    G = R.grading_group
    if lam.G != G or lam.degree != 2 or lam.M.factors != R.bz_group.factors:
        raise ValidationError("lambda does not match the ring's grading and invertibles")
    Bh = R.bz_group
    r = R.rank
    T = np.zeros_like(R.N)
    for a in range(r):
        for b in range(r):
            phi = lam(R.grade[a], R.grade[b])
            inv = R.bz[Bh.index(Bh.neg(phi))]
            for c in range(r):
                row = R.N[c, inv]
                d = int(np.flatnonzero(row)[0])
                T[a, b, c] = R.N[a, b, d]
    try:
        return _rebuild(R, N=T, twists=None, name=f"{R.name}^lambda", meta={})
    except ValidationError as e:
        raise ValidationError(f"zested ring is invalid (lambda not a cocycle?): {e}") from None


def _labelled_twists(C: PointedCategory, P: PointedCategory, Z: dict) -> dict:
    return {x: (C.q(x) + P.q(Z[C.deg(x)])) % 1 for x in C.group.elements}


def all_sections(P: PointedCategory) -> list[dict]:
    G = P.B
    grades = [g for g in G.elements if g != G.zero]
    choices = [P.component(g) for g in grades]
    out = []
    for pick in itertools.product(*choices):
        Z = {G.zero: P.group.zero}
        Z.update(zip(grades, pick))
        out.append(Z)
    return out


@dataclass(frozen=True)
class TwistReport:
    labels: tuple[str, ...]
    twists: tuple[Fraction, ...]
    exact_path: bool
    sections_checked: int
    table_invariant: bool
    multiset_invariant: bool

    @property
    def multiset(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.twists))


def zested_twists_via_cfp(C, P: PointedCategory, section: Mapping | None = None) -> TwistReport:
    """Twists after zesting C by the datum extracted from P.

    Exact path (C pointed): ``theta([x, Z_g]) = q`` of the condensed fiber
    product.  Grade-level path: ``theta'(X_g) = theta(X_g) + q_P(Z_g)``.  The
    two must agree; every other section of P is also tried and the labelled
    table and its multiset are reported as invariant or not.
    """
    _, Z = extract_lambda_from_pointed(P, section)
    if isinstance(C, PointedCategory):
        K = condensed_fiber_product(C, P)
        cond = K.origin
        exact = {}
        for x in C.group.elements:
            y = cond.project(x + Z[C.deg(x)])
            exact[x] = K.q(y)
        grade_level = _labelled_twists(C, P, Z)
        if exact != grade_level:
            raise InvariantViolation("grade-level twist formula disagrees with condensation")
        labels = tuple(element_label(x) for x in C.group.elements)
        tw = tuple(exact[x] for x in C.group.elements)
        if sorted(tw) != sorted(K.pmg.q):
            raise InvariantViolation("labelled twists are not the twists of the condensed product")
        tables = [_labelled_twists(C, P, W) for W in all_sections(P)]
        table_inv = all(t == grade_level for t in tables)
        ms_inv = all(sorted(t.values()) == sorted(tw) for t in tables)
        if not ms_inv:
            raise InvariantViolation("twist multiset depends on the section")
        return TwistReport(labels, tw, True, len(tables), table_inv, ms_inv)
    R = C
    if R.twists is None:
        raise ValidationError("ring has no twists")
    tw = tuple(t + P.q(Z[g]) for t, g in zip(R.twists, R.grade))
    tw = tuple(v % 1 for v in tw)
    tables = []
    for W in all_sections(P):
        tables.append(tuple((t + P.q(W[g])) % 1 for t, g in zip(R.twists, R.grade)))
    table_inv = all(t == tw for t in tables)
    ms_inv = all(sorted(t) == sorted(tw) for t in tables)
    return TwistReport(R.labels, tw, False, len(tables), table_inv, ms_inv)


@dataclass(frozen=True)
class ZestingReport:
    isomorphic: bool
    witness: dict | None
    cfp: GradedFusionRing = field(repr=False)
    zested: GradedFusionRing = field(repr=False)
    lam: Cochain = field(repr=False)
    section: dict = field(repr=False)
    twists_match: bool | None = None
    reason: str = ""


def verify_cfp_equals_zesting(C, P, section: Mapping | None = None) -> ZestingReport:
    """Check that ``X_g -> [X_g, Z_g]`` is a graded ring isomorphism from the zesting to the CFP."""
    Cr = _as_ring(C)
    if isinstance(P, PointedCategory):
        lam, Zel = extract_lambda_from_pointed(P, section)
        Pr = ring_of_premetric(P)
        Zlab = {g: element_label(x) for g, x in Zel.items()}
    else:
        Pr = P
        lam, Zlab = extract_lambda_from_ring(P, section)
    K = cfp_ring(Cr, Pr)
    Zd = zest_fusion_ring(Cr, lam)
    witness = {}
    try:
        for a, g in zip(Cr.labels, Cr.grade):
            witness[a] = orbit_containing(K, f"({a},{Zlab[g]})")
    except ValidationError as e:
        return ZestingReport(False, None, K, Zd, lam, Zlab, reason=str(e))
    perm = [K.index(witness[a]) for a in Zd.labels]
    ok = len(set(perm)) == K.rank == Zd.rank
    reason = "" if ok else "map is not a bijection"
    if ok and any(Zd.grade[i] != K.grade[perm[i]] for i in range(Zd.rank)):
        ok, reason = False, "map does not preserve grades"
    if ok and not np.array_equal(Zd.N, K.N[np.ix_(perm, perm, perm)]):
        ok, reason = False, "structure constants differ"
    twists_match = None
    if ok and isinstance(C, PointedCategory) and isinstance(P, PointedCategory):
        rep = zested_twists_via_cfp(C, P, section)
        Kp = condensed_fiber_product(C, P)
        twists_match = rep.multiset == Kp.pmg.twist_multiset()
        if K.twists is not None:
            lab = dict(zip(rep.labels, rep.twists))
            twists_match = twists_match and all(
                K.twists[K.index(witness[a])] == lab[a] for a in Cr.labels)
        if not twists_match:
            ok, reason = False, "twists differ"
    return ZestingReport(ok, witness if ok else None, K, Zd, lam, Zlab, twists_match, reason)
