"""Graded fusion rings: validation, fiber products and de-equivariantization.

Structure constants are kept as a dense read-only ``numpy`` array
``N[a, b, c]`` (multiplicity of ``c`` in ``a (x) b``), indexed by basis
position.  The basis order is the fixed total order on labels used for
every "minimal representative" choice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .abgroup import Element, FinAbGroup
from .errors import InvariantViolation, ValidationError
from .metric import PreMetricGroup
from .pointed import PointedCategory

TRIVIAL = FinAbGroup(())


def element_label(x: Element) -> str:
    if len(x) == 0:
        return "0"
    if len(x) == 1:
        return str(x[0])
    return "(" + ",".join(map(str, x)) + ")"


@dataclass(frozen=True, eq=False)
class GradedFusionRing:
    labels: tuple[str, ...]
    grading_group: FinAbGroup
    grade: tuple[Element, ...]
    unit: int
    dual: tuple[int, ...]
    N: np.ndarray = field(repr=False)
    bz_group: FinAbGroup | None = None
    bz: tuple[int, ...] | None = None
    twists: tuple[Fraction, ...] | None = None
    name: str = ""
    meta: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown basis label {label!r}") from None

    def grade_of(self, label: str) -> Element:
        return self.grade[self.index(label)]

    def dual_of(self, label: str) -> str:
        return self.labels[self.dual[self.index(label)]]

    def multiply(self, a: str, b: str) -> dict[str, int]:
        row = self.N[self.index(a), self.index(b)]
        return {self.labels[c]: int(m) for c, m in enumerate(row) if m}

    def act(self, g: int, a: int) -> int:
        """``g (x) a`` for an invertible basis element g."""
        row = self.N[g, a]
        nz = np.flatnonzero(row)
        if len(nz) != 1 or row[nz[0]] != 1:
            raise ValidationError(f"{self.labels[g]} does not act invertibly on {self.labels[a]}")
        return int(nz[0])

    def is_invertible(self, a: int) -> bool:
        row = self.N[a, self.dual[a]]
        return int(row.sum()) == 1 and row[self.unit] == 1

    def component(self, g: Element) -> tuple[str, ...]:
        return tuple(l for l, h in zip(self.labels, self.grade) if h == g)

    def bz_label(self, phi: Element) -> str:
        return self.labels[self.bz[self.bz_group.index(phi)]]

    def sparse(self) -> list[tuple[str, str, str, int]]:
        a, b, c = np.nonzero(self.N)
        return [(self.labels[i], self.labels[j], self.labels[k], int(self.N[i, j, k]))
                for i, j, k in zip(a, b, c)]

    def same_as(self, other: "GradedFusionRing") -> bool:
        return (self.labels == other.labels and self.grade == other.grade
                and self.grading_group.factors == other.grading_group.factors
                and self.unit == other.unit and self.dual == other.dual
                and np.array_equal(self.N, other.N))


def validate_fusion_ring(labels: Sequence[str], grading_group: FinAbGroup,
                         grade: Mapping[str, Sequence[int]], unit: str,
                         N: Iterable[tuple[str, str, str, int]] | np.ndarray,
                         dual: Mapping[str, str] | None = None,
                         bz_group: FinAbGroup | None = None,
                         bz: Sequence[str] | None = None,
                         twists: Mapping[str, Fraction] | None = None,
                         name: str = "", meta: dict | None = None) -> GradedFusionRing:
    """Build a ring and verify unit, associativity, duality and grading exhaustively."""
    labels = tuple(labels)
    r = len(labels)
    if len(set(labels)) != r:
        raise ValidationError("basis labels must be distinct")
    idx = {l: i for i, l in enumerate(labels)}

    def at(l, what):
        if l not in idx:
            raise ValidationError(f"{what}: unknown basis label {l!r}")
        return idx[l]

    u = at(unit, "unit")
    if isinstance(N, np.ndarray):
        T = np.array(N, dtype=np.int64)
        if T.shape != (r, r, r):
            raise ValidationError(f"structure constants must have shape {(r, r, r)}")
    else:
        T = np.zeros((r, r, r), dtype=np.int64)
        for a, b, c, m in N:
            T[at(a, "N"), at(b, "N"), at(c, "N")] += int(m)
    if (T < 0).any():
        raise ValidationError("structure constants must be non-negative")

    gr = []
    for l in labels:
        if l not in grade:
            raise ValidationError(f"missing grade for {l!r}")
        gr.append(grading_group.reduce(grade[l]))
    gr = tuple(gr)

    eye = np.eye(r, dtype=np.int64)
    if not (np.array_equal(T[:, u, :], eye) and np.array_equal(T[u, :, :], eye)):
        raise ValidationError("unit axiom N(a,1,c) = N(1,a,c) = delta(a,c) fails")
    lhs = np.einsum("abe,ecd->abcd", T, T)
    rhs = np.einsum("bcf,afd->abcd", T, T)
    if not np.array_equal(lhs, rhs):
        a, b, c, d = map(int, np.argwhere(lhs != rhs)[0])
        raise ValidationError(
            f"associativity fails at ({labels[a]}, {labels[b]}, {labels[c]}; {labels[d]})")

    du = []
    for a in range(r):
        col = T[a, :, u]
        hits = np.flatnonzero(col)
        if len(hits) != 1 or col[hits[0]] != 1:
            raise ValidationError(f"{labels[a]} has no unique dual (N(a,b,1) must be a delta)")
        du.append(int(hits[0]))
    du = tuple(du)
    if any(du[du[a]] != a for a in range(r)):
        raise ValidationError("duality is not an involution")
    if dual is not None:
        for l, d in dual.items():
            if du[at(l, "dual")] != at(d, "dual"):
                raise ValidationError(
                    f"declared dual({l}) = {d} but N(a,b,1) forces dual({l}) = {labels[du[idx[l]]]}")

    G = grading_group
    if gr[u] != G.zero:
        raise ValidationError("unit must have trivial grade")
    for a in range(r):
        if gr[du[a]] != G.neg(gr[a]):
            raise ValidationError(f"grade(dual {labels[a]}) != -grade({labels[a]})")
    for a, b, c in zip(*np.nonzero(T)):
        if gr[c] != G.add(gr[a], gr[b]):
            raise ValidationError(
                f"grading violated: {labels[c]} appears in {labels[a]} (x) {labels[b]}")

    bz_idx = None
    if bz is not None:
        if bz_group is None or len(bz) != bz_group.order:
            raise ValidationError("bz must list one label per element of the dual group")
        bz_idx = tuple(at(l, "bz") for l in bz)
        if len(set(bz_idx)) != len(bz_idx) or bz_idx[0] != u:
            raise ValidationError("bz labels must be distinct and start with the unit")
        for phi in bz_group.elements:
            a = bz_idx[bz_group.index(phi)]
            if gr[a] != G.zero:
                raise ValidationError(f"bz label {labels[a]} is not in the trivial component")
            for psi in bz_group.elements:
                b = bz_idx[bz_group.index(psi)]
                c = bz_idx[bz_group.index(bz_group.add(phi, psi))]
                row = T[a, b]
                if row[c] != 1 or row.sum() != 1:
                    raise ValidationError("bz labels do not multiply like the dual group")

    tw = None
    if twists is not None:
        tw = tuple(Fraction(twists[l]) % 1 for l in labels)

    T.setflags(write=False)
    return GradedFusionRing(labels, G, gr, u, du, T, bz_group, bz_idx, tw, name, dict(meta or {}))


def _rebuild(R: GradedFusionRing, **changes) -> GradedFusionRing:
    """Re-validate a ring after changing some of its pieces."""
    args = dict(labels=R.labels, grading_group=R.grading_group,
                grade=dict(zip(R.labels, R.grade)), unit=R.labels[R.unit], N=R.N,
                bz_group=R.bz_group,
                bz=None if R.bz is None else [R.labels[i] for i in R.bz],
                twists=None if R.twists is None else dict(zip(R.labels, R.twists)),
                name=R.name, meta=R.meta)
    args.update(changes)
    return validate_fusion_ring(**args)


def group_ring(G: FinAbGroup, grading=None, grading_group: FinAbGroup = TRIVIAL,
               name: str = "", labels=None) -> GradedFusionRing:
    """Fusion ring of a finite abelian group, optionally graded by a homomorphism."""
    labels = list(labels or [element_label(x) for x in G.elements])
    lab = dict(zip(G.elements, labels))
    grade = {lab[x]: (grading(x) if grading else grading_group.zero) for x in G.elements}
    N = [(lab[x], lab[y], lab[G.add(x, y)], 1) for x in G.elements for y in G.elements]
    return validate_fusion_ring(labels, grading_group, grade, lab[G.zero], N, name=name)


def ring_of_premetric(P: PreMetricGroup | PointedCategory) -> GradedFusionRing:
    """Group ring of the underlying group; graded canonically when an embedding is known."""
    if isinstance(P, PointedCategory):
        C, pmg = P, P.pmg
    else:
        C, pmg = None, P
    E = pmg.group
    labels = [element_label(x) for x in E.elements]
    lab = dict(zip(E.elements, labels))
    N = [(lab[x], lab[y], lab[E.add(x, y)], 1) for x in E.elements for y in E.elements]
    twists = {lab[x]: pmg(x) for x in E.elements}
    meta = {"elements": {lab[x]: x for x in E.elements}}
    if C is None:
        grade = {l: () for l in labels}
        return validate_fusion_ring(labels, TRIVIAL, grade, lab[E.zero], N, twists=twists,
                                    name=pmg.name, meta=meta)
    grade = {lab[x]: C.deg(x) for x in E.elements}
    bz = [lab[C.iota(phi)] for phi in C.dual_group.elements]
    return validate_fusion_ring(labels, C.B, grade, lab[E.zero], N, bz_group=C.dual_group,
                                bz=bz, twists=twists, name=C.name, meta=meta)


def fiber_product_ring(C: GradedFusionRing, D: GradedFusionRing) -> GradedFusionRing:
    """``sum_g C_g (x) D_g``.  Basis ordered right-major so orbit minima read ``(X, Z_g)``."""
    if C.grading_group.factors != D.grading_group.factors:
        raise ValidationError("fiber product needs a common grading group")
    pairs = [(a, b) for b in range(D.rank) for a in range(C.rank) if C.grade[a] == D.grade[b]]
    labels = [f"({C.labels[a]},{D.labels[b]})" for a, b in pairs]
    sel_a = [a for a, _ in pairs]
    sel_b = [b for _, b in pairs]
    T = C.N[np.ix_(sel_a, sel_a, sel_a)] * D.N[np.ix_(sel_b, sel_b, sel_b)]
    grade = {l: C.grade[a] for l, (a, _) in zip(labels, pairs)}
    unit = labels[pairs.index((C.unit, D.unit))]
    bz = bz_group = None
    if C.bz is not None and D.bz is not None and C.bz_group.factors == D.bz_group.factors:
        bz_group = C.bz_group
        bz = [labels[pairs.index((C.bz[i], D.unit))] for i in range(bz_group.order)]
    twists = None
    if C.twists is not None and D.twists is not None:
        twists = {l: C.twists[a] + D.twists[b] for l, (a, b) in zip(labels, pairs)}
    meta = {"pairs": {l: (C.labels[a], D.labels[b]) for l, (a, b) in zip(labels, pairs)}}
    return validate_fusion_ring(labels, C.grading_group, grade, unit, T, bz_group=bz_group,
                                bz=bz, twists=twists, name=f"{C.name}*{D.name}", meta=meta)


def _orbit_label(rep: str) -> str:
    if rep.startswith("(") and rep.endswith(")"):
        return "[" + rep[1:-1] + "]"
    return f"[{rep}]"


def deequivariantize_ring(R: GradedFusionRing, gamma: Iterable[str]) -> GradedFusionRing:
    """Quotient by a group of invertible grade-0 objects acting freely by left multiplication."""
    gidx = sorted({R.index(l) for l in gamma} | {R.unit})
    gset = set(gidx)
    for g in gidx:
        if not R.is_invertible(g):
            raise ValidationError(f"{R.labels[g]} is not invertible")
        if R.grade[g] != R.grading_group.zero:
            raise ValidationError(f"{R.labels[g]} is not in the trivial component")
        for h in gidx:
            if R.act(g, h) not in gset:
                raise ValidationError("the acting labels are not closed under fusion")
    orbit_of = {}
    orbits = []
    for a in range(R.rank):
        if a in orbit_of:
            continue
        members = sorted({R.act(g, a) for g in gidx})
        if len(members) != len(gidx):
            raise ValidationError("de-equivariantization requires fixed-point-free action")
        for m in members:
            orbit_of[m] = len(orbits)
        orbits.append(members)
    reps = [o[0] for o in orbits]
    labels = [_orbit_label(R.labels[a]) for a in reps]
    n = len(reps)
    T = np.zeros((n, n, n), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            for k, c in enumerate(reps):
                T[i, j, k] = sum(int(R.N[a, b, R.act(g, c)]) for g in gidx)
    grade = {l: R.grade[a] for l, a in zip(labels, reps)}
    bz = None
    if R.bz is not None:
        imgs = [orbit_of[a] for a in R.bz]
        if len(set(imgs)) == len(imgs):
            bz = [labels[i] for i in imgs]
    twists = None
    if R.twists is not None and all(len({R.twists[m] for m in o}) == 1 for o in orbits):
        twists = {l: R.twists[a] for l, a in zip(labels, reps)}
    meta = {"orbits": {l: tuple(R.labels[m] for m in o) for l, o in zip(labels, orbits)}}
    if "pairs" in R.meta:
        meta["pairs"] = R.meta["pairs"]
    out = validate_fusion_ring(labels, R.grading_group, grade, labels[orbit_of[R.unit]], T,
                               bz_group=R.bz_group if bz else None, bz=bz, twists=twists,
                               name=f"[{R.name}]", meta=meta)
    if out.rank * len(gidx) != R.rank:
        raise InvariantViolation("orbit bookkeeping rank * |Gamma| = rank failed")
    return out


def orbit_containing(R: GradedFusionRing, member: str) -> str:
    for l, members in R.meta.get("orbits", {}).items():
        if member in members:
            return l
    raise ValidationError(f"{member!r} is not in any recorded orbit")


def nabla_labels(C: GradedFusionRing, D: GradedFusionRing) -> list[str]:
    if C.bz is None or D.bz is None:
        raise ValidationError("both rings need distinguished invertibles realizing B_z")
    if C.bz_group.factors != D.bz_group.factors:
        raise ValidationError("distinguished invertibles come from different dual groups")
    Bh = C.bz_group
    return [f"({C.bz_label(phi)},{D.bz_label(Bh.neg(phi))})" for phi in Bh.elements]


def cfp_ring(C: GradedFusionRing, D: GradedFusionRing) -> GradedFusionRing:
    """Ring-level condensed fiber product: fiber product modulo the diagonal ``(phi, -phi)``."""
    fp = fiber_product_ring(C, D)
    return deequivariantize_ring(fp, nabla_labels(C, D))


def fp_dims(R: GradedFusionRing) -> np.ndarray:
    """Frobenius-Perron dimensions from the Perron eigenvector of the regular element."""
    M = R.N.sum(axis=0).T.astype(float)  # M[c, b] = sum_a N(a, b, c)
    vals, vecs = np.linalg.eig(M)
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    return v / v[R.unit]


def fp_dimension(R: GradedFusionRing) -> float:
    return float((fp_dims(R) ** 2).sum())


def find_ring_isomorphisms(R: GradedFusionRing, S: GradedFusionRing, first: bool = True,
                           grade_preserving: bool = True) -> list[dict[str, str]]:
    """Basis bijections preserving unit, structure constants (and grades)."""
    if R.rank != S.rank:
        return []
    order = sorted(range(R.rank), key=lambda a: (a != R.unit, R.labels[a]))
    cands = {}
    for a in range(R.rank):
        sig = (int(R.N[a, a, a]), int(R.N[a].sum()), R.is_invertible(a))
        cands[a] = [b for b in range(S.rank)
                    if (int(S.N[b, b, b]), int(S.N[b].sum()), S.is_invertible(b)) == sig
                    and (not grade_preserving or R.grade[a] == S.grade[b])
                    and ((a == R.unit) == (b == S.unit))]
    found = []
    perm: dict[int, int] = {}

    def consistent(a):
        for x in perm:
            for y in perm:
                if R.N[x, y, a] != S.N[perm[x], perm[y], perm[a]] or \
                   R.N[x, a, y] != S.N[perm[x], perm[a], perm[y]] or \
                   R.N[a, x, y] != S.N[perm[a], perm[x], perm[y]]:
                    return False
        return True

    def search(i):
        if i == len(order):
            found.append({R.labels[a]: S.labels[b] for a, b in perm.items()})
            return first
        a = order[i]
        used = set(perm.values())
        for b in cands[a]:
            if b in used:
                continue
            perm[a] = b
            if consistent(a) and search(i + 1):
                return True
            del perm[a]
        return False

    search(0)
    return found
