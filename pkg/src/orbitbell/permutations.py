"""Finite permutation groups as explicit element tables.

Conventions used throughout the package:

* permutations act on ``{0, ..., n-1}`` and are stored in one-line image
  notation; cycle notation in user-facing I/O is 1-based,
* composition ``a * b`` means "apply ``b`` first, then ``a``",
* group elements are indexed by the lexicographic order of their image
  tuples, which puts the identity at index 0.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_SYMMETRIC_DEGREE = 8


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0..n-1} in one-line image notation."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build from 0-based disjoint cycles; unmentioned points are fixed."""
        images = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                if not (0 <= a < n):
                    raise ValueError(f"cycle entry {a} out of range 0..{n - 1}")
                if a in seen:
                    raise ValueError(f"cycles are not disjoint at point {a}")
                seen.add(a)
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def from_cycle_string(cls, text: str, n: int) -> "Permutation":
        """Parse 1-based cycle notation, e.g. ``"(1 2 3)(4 5)"``; ``"e"``,
        ``"()"`` and ``""`` all denote the identity."""
        stripped = text.strip()
        if stripped in ("", "e", "()", "id"):
            return cls.identity(n)
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", stripped):
            raise ValueError(f"cannot parse cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", stripped):
            points = [int(tok) - 1 for tok in re.split(r"[\s,]+", body.strip())]
            if any(p < 0 or p >= n for p in points):
                raise ValueError(f"cycle {body!r} has points outside 1..{n}")
            cycles.append(points)
        return cls.from_cycles(cycles, n)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: apply ``other`` first, then ``self``."""
        if other.degree != self.degree:
            raise ValueError("degree mismatch in composition")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        images = [0] * self.degree
        for i, j in enumerate(self.images):
            images[j] = i
        return Permutation(tuple(images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its minimal point, sorted by it."""
        seen: set[int] = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            if len(cycle) > 1 or include_fixed:
                out.append(tuple(cycle))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def cycle_string(self) -> str:
        """1-based cycle notation; the identity renders as ``"e"``."""
        cycles = self.cycles()
        if not cycles:
            return "e"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycles)

    def __str__(self) -> str:
        return self.cycle_string()


# dense |G| x |G| composition tables are precomputed up to this order;
# larger groups (S_7, S_8) compose on demand to keep memory at desk scale
_DENSE_TABLE_LIMIT = 2000


class GroupTable:
    """A finite permutation group with composition and inverse tables.

    Elements are sorted lexicographically by image tuple, so the identity
    sits at index 0 and all derived labelings are reproducible.  Groups up
    to order ``_DENSE_TABLE_LIMIT`` get a dense composition table and a
    full closure check; the full S_7 and S_8 are closed by construction and
    compose lazily.
    """

    def __init__(self, elements: Sequence[Permutation], _assume_closed: bool = False):
        ordered = sorted(elements, key=lambda p: p.images)
        if not ordered or ordered[0] != Permutation.identity(ordered[0].degree):
            raise ValueError("element list must contain the identity")
        if len({p.images for p in ordered}) != len(ordered):
            raise ValueError("duplicate elements in group table")
        self.elements: tuple[Permutation, ...] = tuple(ordered)
        self.degree = ordered[0].degree
        self._index = {p.images: i for i, p in enumerate(self.elements)}

        size = len(self.elements)
        self.inverse_table = [0] * size
        for i, a in enumerate(self.elements):
            inv = a.inverse()
            if inv.images not in self._index:
                raise ValueError(f"not closed under inverse: {a}")
            self.inverse_table[i] = self._index[inv.images]

        self.compose_table: list[list[int]] | None = None
        if size <= _DENSE_TABLE_LIMIT:
            table = [[0] * size for _ in range(size)]
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    prod = a * b
                    if prod.images not in self._index:
                        raise ValueError(f"not closed under composition: {a} * {b}")
                    table[i][j] = self._index[prod.images]
            self.compose_table = table
        elif not _assume_closed:
            raise ValueError(
                f"group order {size} is too large for an explicit closure check; "
                "use GroupTable.symmetric for full symmetric groups"
            )

    @classmethod
    def symmetric(cls, n: int) -> "GroupTable":
        """The full symmetric group on n symbols, 2 <= n <= 8."""
        if not 2 <= n <= MAX_SYMMETRIC_DEGREE:
            raise ValueError(
                f"symmetric group degree must be in 2..{MAX_SYMMETRIC_DEGREE}, got {n}"
            )
        return cls(
            [Permutation(p) for p in itertools.permutations(range(n))],
            _assume_closed=True,
        )

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Permutation) -> int:
        try:
            return self._index[perm.images]
        except KeyError:
            raise ValueError(f"{perm} is not an element of this group") from None

    def element(self, i: int) -> Permutation:
        return self.elements[i]

    def compose(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j] (apply j first)."""
        if self.compose_table is not None:
            return self.compose_table[i][j]
        a, b = self.elements[i].images, self.elements[j].images
        return self._index[tuple(a[x] for x in b)]

    def inverse(self, i: int) -> int:
        return self.inverse_table[i]

    def conjugate(self, h: int, g: int) -> int:
        """Index of h g h^-1."""
        return self.compose(self.compose(h, g), self.inverse_table[h])

    def order_of(self, i: int) -> int:
        return self.elements[i].order()

    def parse(self, text: str) -> int:
        """Index of the element given in 1-based cycle notation."""
        return self.index(Permutation.from_cycle_string(text, self.degree))


def build_symmetric_group(n: int) -> GroupTable:
    """Enumerate S_n with composition and inverse tables."""
    return GroupTable.symmetric(n)


def cyclic_subgroup(table: GroupTable, generator: Permutation | int) -> list[int]:
    """Powers e, g, g^2, ... of ``generator``, as element indices."""
    g = generator if isinstance(generator, int) else table.index(generator)
    if not 0 <= g < len(table):
        raise ValueError(f"element index {g} out of range")
    powers = [0]
    current = g
    while current != 0:
        powers.append(current)
        current = table.compose(g, current)
    return powers


@dataclass(frozen=True)
class CosetDecomposition:
    """Left cosets of a cyclic subgroup H = <g>, with the unique factorization
    of every element as (coset representative) * g^l.

    ``coset_of[i]`` is the 0-based pair (alpha, l) with
    elements[i] == elements[representatives[alpha]] * elements[subgroup[l]].
    """

    table: GroupTable
    subgroup: tuple[int, ...]
    generator: int
    representatives: tuple[int, ...]
    coset_of: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.representatives)

    @property
    def m(self) -> int:
        return len(self.subgroup)

    def factorize(self, i: int) -> tuple[int, int]:
        """The unique (alpha, l) with element i = g_alpha * g^l."""
        return self.coset_of[i]

    def element_of(self, alpha: int, l: int) -> int:
        return self.table.compose(self.representatives[alpha], self.subgroup[l])


def left_cosets(table: GroupTable, subgroup: Sequence[int]) -> CosetDecomposition:
    """Decompose the group into left cosets of a cyclic subgroup.

    ``subgroup`` must list the powers e, g, g^2, ... of a single generator,
    as produced by :func:`cyclic_subgroup`.  Representatives are chosen
    deterministically: the identity for its own coset, otherwise the
    minimal-index member of each coset.
    """
    members = list(subgroup)
    if not members or members[0] != 0:
        raise ValueError("subgroup must start with the identity")
    generator = members[1] if len(members) > 1 else 0
    for l in range(len(members)):
        expected = 0
        for _ in range(l):
            expected = table.compose(generator, expected)
        if members[l] != expected:
            raise ValueError("subgroup must list consecutive powers of one generator")
    closure = {table.compose(a, b) for a in members for b in members}
    if closure != set(members):
        raise ValueError("subgroup is not closed under composition")
    if len(table) % len(members) != 0:
        raise ValueError("subgroup order does not divide group order")

    coset_of: list[tuple[int, int] | None] = [None] * len(table)
    representatives: list[int] = []
    for i in range(len(table)):
        if coset_of[i] is not None:
            continue
        alpha = len(representatives)
        representatives.append(i)
        for l, h in enumerate(members):
            coset_of[table.compose(i, h)] = (alpha, l)
    return CosetDecomposition(
        table=table,
        subgroup=tuple(members),
        generator=generator,
        representatives=tuple(representatives),
        coset_of=tuple(coset_of),  # type: ignore[arg-type]
    )


def pair_permutation(dec: CosetDecomposition, shift: int) -> dict[tuple[int, int], tuple[int, int]]:
    """The bijection (alpha, l) -> (alpha', l') induced by right-multiplying
    the factorization g_alpha * g^l by the element ``shift``."""
    table = dec.table
    out = {}
    for alpha in range(dec.k):
        for l in range(dec.m):
            product = table.compose(dec.element_of(alpha, l), shift)
            out[(alpha, l)] = dec.coset_of[product]
    return out


def normalizer_of_subgroup(table: GroupTable, subgroup: Sequence[int]) -> list[int]:
    """Indices of all h with h H h^-1 = H."""
    members = set(subgroup)
    out = []
    for h in range(len(table)):
        if all(table.conjugate(h, g) in members for g in members):
            out.append(h)
    return out
