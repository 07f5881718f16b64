"""Real orthogonal matrix representations of finite permutation groups.

The workhorse is the standard representation of S_n: the permutation action
on R^n restricted to the sum-zero subspace, expressed in an explicit
orthonormal basis so that all matrices are orthogonal.  Tensor squares,
character tables for S_3 and S_4, isotypic projectors, and the maximally
entangled unit vector live here as well.

Tensor products follow the numpy ``kron`` convention: the component
``(a ⊗ b)[i*m + j]`` equals ``a[i] * b[j]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .permutations import GroupTable, Permutation

TOLERANCE = 1e-9

# Above this many matrix entries a tensor square is refused rather than
# materialized; the bound operators never need it at that size.
_TENSOR_ENTRY_LIMIT = 50_000_000


class RepresentationError(ValueError):
    """A matrix family failed to be a valid orthogonal representation."""


@dataclass(frozen=True, eq=False)
class Representation:
    """Map from group elements (by index) to real orthogonal matrices.

    ``ambient_basis`` is set for the standard representation of S_n: an
    n x (n-1) matrix whose columns form an orthonormal basis of the
    sum-zero subspace, so ``coords = ambient_basis.T @ x`` converts an
    ambient sum-zero vector to representation coordinates.
    """

    table: GroupTable
    matrices: np.ndarray  # shape (|G|, m, m)
    ambient_basis: np.ndarray | None = field(default=None)

    @property
    def dim(self) -> int:
        return int(self.matrices.shape[1])

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def character(self, i: int) -> float:
        return float(np.trace(self.matrices[i]))

    def characters(self) -> np.ndarray:
        return np.einsum("gii->g", self.matrices)

    def character_norm(self) -> float:
        """(1/|G|) sum of squared characters; equals 1 for a representation
        that is irreducible over the complex numbers and real."""
        chars = self.characters()
        return float(np.dot(chars, chars)) / len(self.table)

    def apply(self, i: int, v: np.ndarray) -> np.ndarray:
        return self.matrices[i] @ v

    def validate(self, tol: float = TOLERANCE, exhaustive_limit: int = 40) -> None:
        """Check identity, orthogonality, and the homomorphism property.

        All |G|^2 products are checked for groups of order up to
        ``exhaustive_limit``; beyond that a deterministic sample of pairs
        is used.
        """
        size, m = len(self.table), self.dim
        if self.matrices.shape != (size, m, m):
            raise RepresentationError(
                f"expected {size} matrices of shape {m}x{m}, got {self.matrices.shape}"
            )
        if not np.allclose(self.matrices[0], np.eye(m), atol=tol):
            raise RepresentationError("matrix for the identity element is not the identity")
        gram = np.einsum("gji,gjk->gik", self.matrices, self.matrices)
        dev = float(np.max(np.abs(gram - np.eye(m))))
        if dev > tol:
            worst = int(np.argmax(np.abs(gram - np.eye(m)).reshape(size, -1).max(axis=1)))
            raise RepresentationError(
                f"matrix for element {self.table.element(worst)} is not orthogonal "
                f"(deviation {dev:.3e})"
            )
        if size <= exhaustive_limit:
            pairs = [(i, j) for i in range(size) for j in range(size)]
        else:
            rng = np.random.default_rng(0)
            pairs = [tuple(p) for p in rng.integers(0, size, size=(4 * size, 2))]
        for i, j in pairs:
            product = self.matrices[i] @ self.matrices[j]
            expected = self.matrices[self.table.compose(i, j)]
            dev = float(np.max(np.abs(product - expected)))
            if dev > tol:
                raise RepresentationError(
                    f"homomorphism violated at ({self.table.element(i)}, "
                    f"{self.table.element(j)}): deviation {dev:.3e}"
                )

    def homomorphism_deviation(self, exhaustive_limit: int = 5040) -> float:
        """Max |D(a)D(b) - D(ab)| entry over all (or sampled) pairs."""
        size = len(self.table)
        if size <= exhaustive_limit:
            pairs = ((i, j) for i in range(size) for j in range(size))
        else:
            rng = np.random.default_rng(0)
            pairs = (tuple(p) for p in rng.integers(0, size, size=(4 * size, 2)))
        worst = 0.0
        for i, j in pairs:
            dev = float(
                np.max(
                    np.abs(
                        self.matrices[i] @ self.matrices[j]
                        - self.matrices[self.table.compose(i, j)]
                    )
                )
            )
            worst = max(worst, dev)
        return worst

    def orthogonality_deviation(self) -> float:
        gram = np.einsum("gji,gjk->gik", self.matrices, self.matrices)
        return float(np.max(np.abs(gram - np.eye(self.dim))))


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the sum-zero subspace of R^n, obtained
    by Gram-Schmidt on e_1 - e_2, e_2 - e_3, ..."""
    cols = []
    for i in range(n - 1):
        w = np.zeros(n)
        w[i], w[i + 1] = 1.0, -1.0
        for c in cols:
            w = w - np.dot(c, w) * c
        cols.append(w / np.linalg.norm(w))
    return np.stack(cols, axis=1)


def permutation_matrix(perm: Permutation) -> np.ndarray:
    n = perm.degree
    mat = np.zeros((n, n))
    for i in range(n):
        mat[perm(i), i] = 1.0
    return mat


def standard_representation(n: int) -> Representation:
    """The (n-1)-dimensional standard representation of S_n.

    Permutation matrices restricted to the sum-zero subspace in the basis
    from :func:`sum_zero_basis`; irreducible over the complex numbers.
    """
    if n < 3:
        raise ValueError(f"standard representation needs n >= 3, got {n}")
    table = GroupTable.symmetric(n)
    basis = sum_zero_basis(n)
    matrices = np.stack(
        [basis.T @ permutation_matrix(p) @ basis for p in table.elements]
    )
    rep = Representation(table=table, matrices=matrices, ambient_basis=basis)
    rep.validate()
    return rep


def tensor_square(rep: Representation) -> Representation:
    """The representation g -> D(g) ⊗ D(g) on the m^2-dimensional space."""
    m = rep.dim
    if len(rep.table) * m**4 > _TENSOR_ENTRY_LIMIT:
        raise ValueError(
            "tensor square too large to materialize; work with the factors instead"
        )
    matrices = np.stack([np.kron(d, d) for d in rep.matrices])
    return Representation(table=rep.table, matrices=matrices)


def chi_vector(m: int) -> np.ndarray:
    """The maximally entangled unit vector (1/sqrt(m)) sum_i e_i ⊗ e_i."""
    if m < 1:
        raise ValueError("dimension must be positive")
    return np.eye(m).reshape(-1) / np.sqrt(m)


def partial_traces(w: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Both reduced density matrices of the pure state w on C^m ⊗ C^m."""
    rho = np.outer(w, w).reshape(m, m, m, m)
    return np.einsum("ijkj->ik", rho), np.einsum("jijk->ik", rho)


# --- character tables ------------------------------------------------------


@dataclass(frozen=True)
class CharacterTableEntry:
    """One irreducible character: label, degree, value per conjugacy class."""

    label: str
    degree: int
    values: tuple[float, ...]


class CharacterTable:
    """Conjugacy classes plus the irreducible characters of a group.

    Classes of S_n are keyed by cycle type; validation re-derives the row
    orthogonality relations and the degree sum |G| = sum d_s^2.
    """

    def __init__(
        self,
        table: GroupTable,
        classes: Sequence[tuple[int, ...]],
        entries: Sequence[CharacterTableEntry],
    ):
        self.table = table
        self.classes = tuple(classes)
        self.entries = tuple(entries)
        class_index = {ct: i for i, ct in enumerate(self.classes)}
        self.class_of = tuple(
            class_index[p.cycle_type()] for p in table.elements
        )
        self.class_sizes = tuple(
            sum(1 for c in self.class_of if c == i) for i in range(len(self.classes))
        )
        self.validate()

    def validate(self, tol: float = TOLERANCE) -> None:
        size = len(self.table)
        if sum(e.degree**2 for e in self.entries) != size:
            raise RepresentationError("character degrees do not satisfy sum d^2 = |G|")
        if sum(self.class_sizes) != size:
            raise RepresentationError("conjugacy classes do not partition the group")
        for a in self.entries:
            for b in self.entries:
                inner = (
                    sum(
                        sz * va * vb
                        for sz, va, vb in zip(self.class_sizes, a.values, b.values)
                    )
                    / size
                )
                expected = 1.0 if a is b else 0.0
                if abs(inner - expected) > tol:
                    raise RepresentationError(
                        f"character rows {a.label}/{b.label} violate orthogonality"
                    )

    def entry(self, label: str) -> CharacterTableEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def values_by_element(self, entry: CharacterTableEntry) -> np.ndarray:
        return np.array([entry.values[c] for c in self.class_of])

    def multiplicities(self, rep: Representation) -> dict[str, int]:
        """Multiplicity of each irreducible in ``rep`` via character inner
        products; raises if any inner product is not close to an integer."""
        chars = rep.characters()
        out = {}
        for e in self.entries:
            inner = float(np.dot(chars, self.values_by_element(e))) / len(self.table)
            nearest = round(inner)
            if abs(inner - nearest) > 1e-6:
                raise RepresentationError(
                    f"non-integer multiplicity {inner} for {e.label}; "
                    "character data inconsistent with the group"
                )
            out[e.label] = int(nearest)
        return out


_S3_CLASSES = [(1, 1, 1), (2, 1), (3,)]
_S3_IRREPS = [
    ("trivial", 1, (1, 1, 1)),
    ("sign", 1, (1, -1, 1)),
    ("standard", 2, (2, 0, -1)),
]

_S4_CLASSES = [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
_S4_IRREPS = [
    ("trivial", 1, (1, 1, 1, 1, 1)),
    ("sign", 1, (1, -1, 1, 1, -1)),
    ("twodim", 2, (2, 0, 2, -1, 0)),
    ("standard", 3, (3, 1, -1, 0, -1)),
    ("standard_sign", 3, (3, -1, -1, 0, 1)),
]


def symmetric_character_table(table: GroupTable) -> CharacterTable | None:
    """Built-in character tables for S_3 and S_4 (None for other groups)."""
    data = {6: (_S3_CLASSES, _S3_IRREPS), 24: (_S4_CLASSES, _S4_IRREPS)}.get(len(table))
    if data is None:
        return None
    classes, irreps = data
    entries = [
        CharacterTableEntry(label, degree, tuple(float(v) for v in values))
        for label, degree, values in irreps
    ]
    return CharacterTable(table, classes, entries)


def isotypic_projector(
    rep: Representation, entry: CharacterTableEntry, char_table: CharacterTable
) -> np.ndarray:
    """Group-averaged projector onto the isotypic component of ``entry``
    inside ``rep``: P_s = (d_s/|G|) sum_g chi_s(g) D(g)."""
    values = char_table.values_by_element(entry)
    proj = np.einsum("g,gij->ij", values, rep.matrices) * (
        entry.degree / len(rep.table)
    )
    return proj


# --- file round-trip -------------------------------------------------------


def save_representation(rep: Representation, path: str | Path) -> None:
    """Write a representation to JSON (full-precision row-major matrices)."""
    payload: dict = {"dim": rep.dim}
    if len(rep.table) == math.factorial(rep.table.degree):
        payload["n"] = rep.table.degree
    else:
        payload["elements"] = [list(p.images) for p in rep.table.elements]
    payload["matrices"] = [m.reshape(-1).tolist() for m in rep.matrices]
    Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")


def load_representation(source: str | Path | Mapping) -> Representation:
    """Load a representation from JSON and validate it.

    The payload carries either ``n`` (full symmetric group) or ``elements``
    (explicit permutation images realizing the group), plus ``dim`` and one
    row-major matrix per element in canonical element order.
    """
    if isinstance(source, Mapping):
        payload = dict(source)
    else:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    if "n" in payload:
        table = GroupTable.symmetric(int(payload["n"]))
    elif "elements" in payload:
        table = GroupTable([Permutation(tuple(img)) for img in payload["elements"]])
    else:
        raise RepresentationError("representation file needs 'n' or 'elements'")
    try:
        dim = int(payload["dim"])
        raw = payload["matrices"]
    except KeyError as exc:
        raise RepresentationError(f"representation file missing field {exc}") from None
    if len(raw) != len(table):
        raise RepresentationError(
            f"expected {len(table)} matrices, file has {len(raw)}"
        )
    try:
        matrices = np.array(raw, dtype=float).reshape(len(table), dim, dim)
    except ValueError:
        raise RepresentationError(
            f"matrix data does not reshape to {len(table)}x{dim}x{dim}"
        ) from None
    rep = Representation(table=table, matrices=matrices)
    rep.validate()
    return rep
