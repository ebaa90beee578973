"""Finite abelian groups in additive notation.

Groups are presented by a list of cyclic factors ``Z/n_1 x ... x Z/n_k``.
Elements are plain tuples of coefficients ``0 <= c_i < n_i`` and the
enumeration order is lexicographic in those tuples, so Python's tuple
ordering *is* the enumeration order.  Every file format and every
"minimal representative" choice relies on that.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, prod
from typing import Callable, Iterable, Sequence

from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp
from sympy.utilities.iterables import partitions

from .errors import CapacityError, InvariantViolation, ValidationError

Element = tuple

DEFAULT_ISO_BOUND = 256


# ---------------------------------------------------------------------------
# integer linear algebra

def smith(rows: Sequence[Sequence[int]], ncols: int):
    """Smith normal form ``D = S @ A @ T`` of an integer matrix.

    Returns ``(diag, S, T)`` with ``diag`` of length ``min(nrows, ncols)`` and
    ``S``/``T`` unimodular, all as nested lists of Python ints.
    """
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        S = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
        T = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        return [], S, T
    A = DomainMatrix([[ZZ(int(v)) for v in r] for r in rows], (nrows, ncols), ZZ)
    D, S, T = smith_normal_decomp(A)
    D, S, T = (m.to_dense().to_list() for m in (D, S, T))
    diag = [int(D[i][i]) for i in range(min(nrows, ncols))]
    S = [[int(v) for v in r] for r in S]
    T = [[int(v) for v in r] for r in T]
    return diag, S, T


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A Z-basis of ``{x in Z^ncols : A x = 0}``."""
    diag, _, T = smith(rows, ncols)
    rank = sum(1 for d in diag if d != 0)
    return [[T[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def _matvec(M: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def canonical_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors (``d_1 | d_2 | ...``, all > 1) of ``prod Z/n_i``."""
    factors = list(factors)
    k = len(factors)
    diag, _, _ = smith([[factors[i] if i == j else 0 for j in range(k)] for i in range(k)], k)
    return tuple(sorted(abs(d) for d in diag if abs(d) > 1))


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class FinAbGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        for n in self.factors:
            if n < 2:
                raise ValidationError(f"cyclic factor must be >= 2, got {n}")

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.factors)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        return self._index[x]

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @property
    def generators(self) -> tuple[Element, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def exponent(self) -> int:
        e = 1
        for n in self.factors:
            e = e * n // gcd(e, n)
        return e

    def __contains__(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == self.rank
                and all(isinstance(c, int) and 0 <= c < n for c, n in zip(x, self.factors)))

    def reduce(self, vec: Iterable[int]) -> Element:
        vec = tuple(vec)
        if len(vec) != self.rank:
            raise ValidationError(f"expected {self.rank} coefficients, got {len(vec)}")
        return tuple(int(c) % n for c, n in zip(vec, self.factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % n for a, n in zip(x, self.factors))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.factors))

    def mul(self, k: int, x: Element) -> Element:
        return tuple(k * a % n for a, n in zip(x, self.factors))

    def element_order(self, x: Element) -> int:
        o = 1
        for a, n in zip(x, self.factors):
            c = n // gcd(a, n)
            o = o * c // gcd(o, c)
        return o

    def __repr__(self):
        if not self.factors:
            return "FinAbGroup(trivial)"
        return "FinAbGroup(" + " x ".join(f"Z/{n}" for n in self.factors) + ")"


def make_group(factors: Iterable[int]) -> FinAbGroup:
    return FinAbGroup(tuple(factors))


def direct_product(G: FinAbGroup, H: FinAbGroup) -> FinAbGroup:
    return FinAbGroup(G.factors + H.factors)


def abelian_groups_of_order(n: int) -> list[FinAbGroup]:
    """One representative per isomorphism class, via partitions of prime exponents."""
    if n == 1:
        return [FinAbGroup(())]
    per_prime = []
    for p, e in sorted(factorint(n).items()):
        options = []
        for part in partitions(e):
            options.append(sorted(p ** k for k, m in part.items() for _ in range(m)))
        per_prime.append(options)
    out = []
    for combo in itertools.product(*per_prime):
        out.append(FinAbGroup(tuple(sorted(itertools.chain(*combo)))))
    return out


def dual_pairing(G: FinAbGroup, a: Element, chi: Element) -> Fraction:
    """``<a, chi> = sum a_i chi_i / n_i  (mod 1)``; the fixed identification of G with its dual."""
    if len(a) != G.rank or len(chi) != G.rank:
        raise ValidationError("dual_pairing: shape mismatch")
    return sum((Fraction(x * c, n) for x, c, n in zip(a, chi, G.factors)), Fraction(0)) % 1


# ---------------------------------------------------------------------------
# subgroups and quotients

@dataclass(frozen=True)
class Subgroup:
    parent: FinAbGroup
    gens: tuple[Element, ...]
    elements: tuple[Element, ...]

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.element_set

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.element_set == other.element_set

    def __hash__(self):
        return hash((self.parent, self.element_set))


def generate_subgroup(G: FinAbGroup, gens: Iterable[Element]) -> Subgroup:
    gens = tuple(G.reduce(g) for g in gens)
    seen = {G.zero}
    queue = deque([G.zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.add(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Subgroup(G, gens, tuple(sorted(seen)))


def subgroup_from_elements(G: FinAbGroup, elements: Iterable[Element]) -> Subgroup:
    """Wrap an element set already known to be a subgroup, with a small generating set."""
    elements = sorted(set(elements))
    gens: list[Element] = []
    span = {G.zero}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = set(generate_subgroup(G, gens).elements)
    if span != set(elements):
        raise InvariantViolation("element set is not closed under addition")
    return Subgroup(G, tuple(gens), tuple(elements))


def all_subgroups(G: FinAbGroup) -> list[Subgroup]:
    """Every subgroup of G, smallest first.  Desk-scale only."""
    trivial = Subgroup(G, (), (G.zero,))
    found = {trivial.element_set: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for S in frontier:
            for x in G.elements:
                if x in S:
                    continue
                T = generate_subgroup(G, S.gens + (x,))
                if T.element_set not in found:
                    found[T.element_set] = T
                    nxt.append(T)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.elements))


@dataclass(frozen=True)
class Quotient:
    """``K / H`` for subgroups ``H <= K <= G``, presented by invariant factors.

    ``project`` is defined on elements of K; ``section`` maps a quotient
    element to its minimal coset representative (so ``section(0) == 0``).
    """
    ambient: Subgroup
    subgroup: Subgroup
    group: FinAbGroup
    _projection: dict = field(repr=False)
    _section: tuple = field(repr=False)

    def project(self, x: Element) -> Element:
        try:
            return self._projection[x]
        except KeyError:
            raise ValidationError(f"{x} is not in the ambient subgroup") from None

    def section(self, y: Element) -> Element:
        return self._section[self.group.index(y)]

    def coset(self, y: Element) -> tuple[Element, ...]:
        return tuple(x for x in self.ambient.elements if self._projection[x] == y)


def quotient(G: FinAbGroup, K_gens: Iterable[Element], H_gens: Iterable[Element] = ()) -> Quotient:
    """Present ``<K_gens, H_gens> / <H_gens>`` via Smith normal form of its relation lattice."""
    H_gens = [G.reduce(h) for h in H_gens]
    K = generate_subgroup(G, [G.reduce(k) for k in K_gens] + H_gens)
    H = generate_subgroup(G, H_gens)
    kg = list(K.gens)
    m, r, k = len(kg), len(H_gens), G.rank
    # relations: c in Z^m with sum c_j kg_j in H + diag(n) Z^k
    rows = []
    for i in range(k):
        row = [kg[j][i] for j in range(m)] + [-H_gens[j][i] for j in range(r)]
        row += [-G.factors[i] if t == i else 0 for t in range(k)]
        rows.append(row)
    rel = [v[:m] for v in integer_kernel(rows, m + r + k)]
    R = [[v[i] for v in rel] for i in range(m)]
    diag, S, _ = smith(R, len(rel))
    diag = [abs(d) for d in diag] + [0] * (m - len(diag))
    if any(d == 0 for d in diag):
        raise InvariantViolation("quotient of a finite group came out infinite")
    keep = [i for i, d in enumerate(diag) if d > 1]
    Q = FinAbGroup(tuple(diag[i] for i in keep))

    # coordinates of every element of K in terms of kg, by breadth-first search
    coords = {G.zero: (0,) * m}
    queue = deque([G.zero])
    while queue:
        x = queue.popleft()
        for j, g in enumerate(kg):
            y = G.add(x, g)
            if y not in coords:
                c = list(coords[x])
                c[j] += 1
                coords[y] = tuple(c)
                queue.append(y)
    projection = {}
    for x, c in coords.items():
        sc = _matvec(S, c)
        projection[x] = tuple(sc[i] % diag[i] for i in keep)
    section: list = [None] * Q.order
    for x in K.elements:
        i = Q.index(projection[x])
        if section[i] is None:
            section[i] = x
    if any(s is None for s in section) or len(K) != len(H) * Q.order:
        raise InvariantViolation("quotient projection is not onto")
    return Quotient(K, H, Q, projection, tuple(section))


def subgroup_quotient(G: FinAbGroup, gens: Iterable[Element]) -> Quotient:
    """``G / <gens>``; the result carries the subgroup, the quotient group and the section."""
    return quotient(G, G.generators, list(gens))


# ---------------------------------------------------------------------------
# homomorphisms

@dataclass(frozen=True)
class Hom:
    """Homomorphism given by the images of the source's standard generators."""
    source: FinAbGroup
    target: FinAbGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        imgs = tuple(self.target.reduce(y) for y in self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.source.rank:
            raise ValidationError("one image per source generator required")
        for n, y in zip(self.source.factors, imgs):
            if self.target.mul(n, y) != self.target.zero:
                raise ValidationError(f"image {y} does not respect generator order {n}")

    @classmethod
    def from_matrix(cls, source, target, rows):
        """Build from an integer matrix whose columns are generator images."""
        rows = [list(r) for r in rows]
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ValidationError(
                f"embedding matrix must be {target.rank}x{source.rank}")
        return cls(source, target, tuple(tuple(rows[i][j] for i in range(target.rank))
                                          for j in range(source.rank)))

    @property
    def matrix(self) -> list[list[int]]:
        return [[self.images[j][i] for j in range(self.source.rank)]
                for i in range(self.target.rank)]

    def __call__(self, x: Element) -> Element:
        out = self.target.zero
        for c, y in zip(x, self.images):
            out = self.target.add(out, self.target.mul(c, y))
        return out

    @cached_property
    def table(self) -> dict:
        return {x: self(x) for x in self.source.elements}

    def image(self) -> Subgroup:
        return generate_subgroup(self.target, self.images)

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == self.source.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def compose(self, other: "Hom") -> "Hom":
        """``self o other``."""
        return Hom(other.source, self.target, tuple(self(y) for y in other.images))


def identity_hom(G: FinAbGroup) -> Hom:
    return Hom(G, G, G.generators)


def find_isomorphisms(G: FinAbGroup, H: FinAbGroup,
                      predicate: Callable[[Hom], bool] | None = None,
                      first: bool = False,
                      bound: int = DEFAULT_ISO_BOUND,
                      generator_filter: Callable[[int, Element], bool] | None = None) -> list[Hom]:
    """Brute-force search over generator images for isomorphisms G -> H.

    ``generator_filter(i, y)`` prunes candidate images of the i-th generator
    before the (more expensive) bijectivity and predicate checks.
    """
    if G.order != H.order:
        return []
    if G.order > bound:
        raise CapacityError(f"isomorphism search on order {G.order} exceeds bound {bound}")
    if canonical_factors(G.factors) != canonical_factors(H.factors):
        return []
    cands = []
    for i, n in enumerate(G.factors):
        ci = [y for y in H.elements
              if H.mul(n, y) == H.zero and (generator_filter is None or generator_filter(i, y))]
        cands.append(ci)
    found: list[Hom] = []
    for imgs in itertools.product(*cands):
        f = Hom(G, H, imgs)
        if not f.is_bijective():
            continue
        if predicate is not None and not predicate(f):
            continue
        found.append(f)
        if first:
            break
    return found


def hom_kernel(rows: Sequence[Sequence[int]], source: Sequence[int],
               target: Sequence[int]) -> list[list[int]]:
    """Generators of the kernel of ``x -> A x`` from ``prod Z/source`` to ``prod Z/target``."""
    m = len(source)
    aug = [list(r) + [-target[i] if t == i else 0 for t in range(len(target))]
           for i, r in enumerate(rows)]
    if not aug:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    gens = []
    for v in integer_kernel(aug, m + len(target)):
        x = [c % s for c, s in zip(v[:m], source)]
        if any(x):
            gens.append(x)
    return gens


def span_order(vectors: Sequence[Sequence[int]], moduli: Sequence[int]) -> int:
    """Order of the subgroup of ``prod Z/moduli`` generated by ``vectors``."""
    k = len(moduli)
    if k == 0:
        return 1
    rows = [[v[i] for v in vectors] + [moduli[i] if t == i else 0 for t in range(k)]
            for i in range(k)]
    diag, _, _ = smith(rows, len(vectors) + k)
    return prod(moduli) // prod(abs(d) for d in diag)


def solve_mod(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int,
              modulus: int) -> list[int] | None:
    """One solution of ``A x = rhs (mod modulus)``, or None when inconsistent."""
    diag, S, T = smith(rows, ncols)
    Sr = _matvec(S, rhs)
    y = [0] * ncols
    for i, s in enumerate(Sr):
        d = diag[i] if i < len(diag) else 0
        g = gcd(d, modulus)
        if s % g:
            return None
        if i < ncols and d:
            y[i] = (s // g) * pow(d // g, -1, modulus // g) % (modulus // g) if modulus // g > 1 else 0
    x = [v % modulus for v in _matvec(T, y)]
    if any((a - b) % modulus for a, b in zip(_matvec(rows, x), rhs)):
        raise InvariantViolation("modular solve produced a non-solution")
    return x
