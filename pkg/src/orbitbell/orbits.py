"""Seed vectors and labeled group orbits.

A seed for the standard representation of S_n is an ambient vector x with

    sum_i x_i = 0,   sum_{i=1}^{n-1} x_i x_{i (+) k} + x_n^2 = 0   (k = 1..n-2),

where (+) is addition mod n-1 on the index range 1..n-1.  These quadratic
constraints make {v, D(g)v, ..., D(g^{m-1})v} orthonormal for the cyclic
generator g = (1 2 ... n-1), and a regular orbit then splits into k = |G|/m
orthonormal bases indexed by the left cosets of H = <g>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .permutations import CosetDecomposition, pair_permutation
from .representations import Representation, TOLERANCE, sum_zero_basis

ORBIT_TOLERANCE = 1e-6
_NEWTON_RNG_SEED = 1729
_MAX_NEWTON_STARTS = 64
# retry threshold on the smallest coordinate gap: well above the regularity
# tolerance so the returned orbit is comfortably non-degenerate
_SEPARATION_TARGET = 1e-2


class SeedError(ValueError):
    """Seed construction or validation failed."""


class OrbitError(ValueError):
    """Orbit construction violated an orthonormality requirement."""


@dataclass(frozen=True, eq=False)
class SeedVector:
    """A unit seed: ambient sum-zero coordinates (when the representation
    has an ambient realization) and representation coordinates."""

    coords: np.ndarray
    ambient: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return int(self.coords.shape[0])


def seed_constraints(x: Sequence[float]) -> np.ndarray:
    """Residuals of the n-2 cyclic quadratic constraints at ambient x."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    head = x[: n - 1]
    return np.array(
        [float(np.dot(head, np.roll(head, -k)) + x[n - 1] ** 2) for k in range(1, n - 1)]
    )


def constraint_jacobian(x: Sequence[float]) -> np.ndarray:
    """Jacobian of :func:`seed_constraints`, one row per constraint."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    head = x[: n - 1]
    rows = []
    for k in range(1, n - 1):
        row = np.zeros(n)
        row[: n - 1] = np.roll(head, -k) + np.roll(head, k)
        row[n - 1] = 2.0 * x[n - 1]
        rows.append(row)
    return np.array(rows)


def constraint_rank(x: Sequence[float], tol: float = 1e-8) -> int:
    """Numerical rank of the constraint Jacobian at x."""
    return int(np.linalg.matrix_rank(constraint_jacobian(x), tol=tol))


def independent_constraint_count(n: int) -> int:
    """Expected number of independent cyclic constraints, (n-1) // 2."""
    return (n - 1) // 2


def _canonical_sign(x: np.ndarray) -> np.ndarray:
    """Pick between x and -x: positive last component wins, then the
    lexicographically larger vector."""
    if x[-1] > 0:
        return x
    if x[-1] < 0:
        return -x
    for a, b in zip(x, -x):
        if a > b:
            return x
        if a < b:
            return -x
    return x


def _full_system(x: np.ndarray) -> np.ndarray:
    return np.concatenate([[x.sum()], seed_constraints(x), [x @ x - 1.0]])


def _full_jacobian(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    return np.vstack([np.ones((1, n)), constraint_jacobian(x), 2.0 * x[None, :]])


def _newton_solve(x: np.ndarray, max_iter: int = 200) -> np.ndarray | None:
    """Damped least-squares Newton on {sum = 0, constraints = 0, norm = 1}."""
    for _ in range(max_iter):
        residual = _full_system(x)
        if float(np.max(np.abs(residual))) < 1e-13:
            return x
        step, *_ = np.linalg.lstsq(_full_jacobian(x), -residual, rcond=None)
        scale = 1.0
        base = float(np.linalg.norm(residual))
        for _ in range(40):
            candidate = x + scale * step
            if float(np.linalg.norm(_full_system(candidate))) < base:
                break
            scale *= 0.5
        x = x + scale * step
    return None


def solve_seed(n: int) -> SeedVector:
    """Deterministic seed for the standard representation of S_n.

    n = 3 has the closed form ((-1+sqrt(3))/2, (-1-sqrt(3))/2, 1)/sqrt(3);
    larger n use damped Newton iteration from a fixed pseudorandom start,
    retried until the coordinates are well separated (hence the orbit
    comfortably regular).  The sign is fixed so reports are reproducible.
    """
    if n < 3:
        raise SeedError(f"seed solver needs n >= 3, got {n}")
    if n == 3:
        root3 = np.sqrt(3.0)
        x = np.array([(-1.0 + root3) / 2.0, (-1.0 - root3) / 2.0, 1.0]) / root3
        return _finish_seed(x)

    rng = np.random.default_rng(_NEWTON_RNG_SEED)
    fallback: np.ndarray | None = None
    fallback_gap = 0.0
    for _ in range(_MAX_NEWTON_STARTS):
        start = rng.standard_normal(n)
        start -= start.mean()
        start /= np.linalg.norm(start)
        solution = _newton_solve(start)
        if solution is None:
            continue
        gap = _min_coordinate_gap(solution)
        if gap > _SEPARATION_TARGET:
            return _finish_seed(solution)
        if gap > max(fallback_gap, ORBIT_TOLERANCE):
            fallback, fallback_gap = solution, gap
    if fallback is not None:
        return _finish_seed(fallback)
    raise SeedError(f"seed solver did not reach a regular solution for n={n}")


def _min_coordinate_gap(x: np.ndarray) -> float:
    diffs = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diffs, np.inf)
    return float(diffs.min())


def _coordinates_distinct(x: np.ndarray, tol: float = ORBIT_TOLERANCE) -> bool:
    return _min_coordinate_gap(x) > tol


def _finish_seed(x: np.ndarray) -> SeedVector:
    x = _canonical_sign(x)
    residual = float(np.max(np.abs(seed_constraints(x))))
    if residual > TOLERANCE:
        raise SeedError(f"seed constraints violated: residual {residual:.3e}")
    if abs(float(x.sum())) > TOLERANCE:
        raise SeedError("seed does not lie in the sum-zero subspace")
    basis = sum_zero_basis(x.shape[0])
    coords = basis.T @ x
    return SeedVector(coords=coords, ambient=x)


def seed_from_ambient(rep: Representation, values: Sequence[float]) -> SeedVector:
    """Build a seed from explicit ambient coordinates (normalized here);
    validity beyond sum-zero is left to the regularity/orthogonality checks."""
    x = np.asarray(values, dtype=float)
    if rep.ambient_basis is None:
        raise SeedError("this representation has no ambient realization")
    if x.shape != (rep.ambient_basis.shape[0],):
        raise SeedError(
            f"expected {rep.ambient_basis.shape[0]} ambient components, got {x.shape}"
        )
    if abs(float(x.sum())) > 1e-6:
        raise SeedError(f"ambient seed must sum to zero (sum = {x.sum():.3e})")
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise SeedError("ambient seed is the zero vector")
    x = x / norm
    return SeedVector(coords=rep.ambient_basis.T @ x, ambient=x)


def seed_from_coords(rep: Representation, values: Sequence[float]) -> SeedVector:
    v = np.asarray(values, dtype=float)
    if v.shape != (rep.dim,):
        raise SeedError(f"expected {rep.dim} coordinates, got {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise SeedError("seed is the zero vector")
    v = v / norm
    ambient = rep.ambient_basis @ v if rep.ambient_basis is not None else None
    return SeedVector(coords=v, ambient=ambient)


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    min_distance: float
    colliding_pair: tuple[int, int] | None
    coordinate_criterion: bool | None  # x_i != x_k check for standard reps

    def __bool__(self) -> bool:
        return self.regular


def check_regular(
    rep: Representation, seed: SeedVector, tol: float = ORBIT_TOLERANCE
) -> RegularityReport:
    """Whether all |G| orbit images of the seed are pairwise distinct.

    Returns the minimal pairwise distance and, on failure, the first
    colliding pair of element indices.  For representations with an ambient
    realization the coordinate criterion (all ambient components distinct)
    is reported alongside as a cross-check.
    """
    images = np.einsum("gij,j->gi", rep.matrices, seed.coords)
    size = images.shape[0]
    if size <= 2048:
        diffs = np.linalg.norm(images[:, None, :] - images[None, :, :], axis=2)
        np.fill_diagonal(diffs, np.inf)
        min_distance = float(diffs.min())
        colliding = None
        if min_distance <= tol:
            i, j = np.unravel_index(int(np.argmin(diffs)), diffs.shape)
            colliding = (min(int(i), int(j)), max(int(i), int(j)))
    else:
        # lexicographic sort puts exact duplicates next to each other
        order = np.lexsort(images.T[::-1])
        sorted_images = images[order]
        gaps = np.linalg.norm(np.diff(sorted_images, axis=0), axis=1)
        min_distance = float(gaps.min())
        colliding = None
        if min_distance <= tol:
            at = int(np.argmin(gaps))
            pair = (int(order[at]), int(order[at + 1]))
            colliding = (min(pair), max(pair))

    criterion = None
    if seed.ambient is not None:
        criterion = _coordinates_distinct(seed.ambient, tol)
    return RegularityReport(
        regular=min_distance > tol,
        min_distance=min_distance,
        colliding_pair=colliding,
        coordinate_criterion=criterion,
    )


@dataclass(frozen=True, eq=False)
class LabeledOrbit:
    """Orbit vectors v[alpha, l] = D(g_alpha g^l) v, one orthonormal basis
    per left coset of the cyclic subgroup."""

    rep: Representation
    dec: CosetDecomposition
    seed: SeedVector
    vectors: np.ndarray  # shape (k, m, dim)

    @property
    def k(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def m(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, alpha: int, l: int) -> np.ndarray:
        return self.vectors[alpha, l]

    def block_gram_deviation(self) -> float:
        """Max deviation of any per-coset Gram matrix from the identity."""
        gram = np.einsum("aji,ajk->aik", self.vectors, self.vectors)
        return float(np.max(np.abs(gram - np.eye(self.m))))


def build_labeled_orbit(
    rep: Representation,
    seed: SeedVector,
    dec: CosetDecomposition,
    validate: bool = True,
    tol: float = TOLERANCE,
) -> LabeledOrbit:
    """Assemble the labeled orbit and (optionally) enforce that each coset
    block is an orthonormal basis."""
    if dec.m != rep.dim:
        raise OrbitError(
            f"cyclic subgroup order {dec.m} must equal the representation "
            f"dimension {rep.dim}"
        )
    vectors = np.empty((dec.k, dec.m, rep.dim))
    for alpha in range(dec.k):
        for l in range(dec.m):
            vectors[alpha, l] = rep.matrices[dec.element_of(alpha, l)] @ seed.coords
    orbit = LabeledOrbit(rep=rep, dec=dec, seed=seed, vectors=vectors)
    if validate:
        gram = np.einsum("aji,ajk->aik", vectors, vectors)
        dev = np.abs(gram - np.eye(dec.m))
        worst = float(dev.max())
        if worst > tol:
            alpha, l, lp = np.unravel_index(int(np.argmax(dev)), dev.shape)
            raise OrbitError(
                f"coset block {alpha} is not orthonormal: "
                f"|<v_{{{alpha},{l}}}, v_{{{alpha},{lp}}}> - delta| = {worst:.3e}"
            )
        regularity = check_regular(rep, seed)
        if not regularity.regular:
            raise OrbitError(
                f"orbit is not regular: elements {regularity.colliding_pair} collide "
                f"(distance {regularity.min_distance:.3e})"
            )
    return orbit


@dataclass(frozen=True, eq=False)
class ProductOrbit:
    """The two-party orbit for a shift element: term (alpha, l) pairs the
    Alice basis vector v[alpha, l] with the Bob vector v[alpha', l'] where
    (alpha', l') is the image of (alpha, l) under the pair permutation of
    the shift."""

    orbit: LabeledOrbit
    shift: int
    pair_map: dict[tuple[int, int], tuple[int, int]]
    labels: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    terms: np.ndarray  # shape (|G|, dim^2)

    @property
    def size(self) -> int:
        return int(self.terms.shape[0])

    def seed_overlap(self) -> float:
        """<v, D(shift) v>, the overlap entering the chi eigenvalue."""
        rep = self.orbit.rep
        return float(
            self.orbit.seed.coords @ rep.matrices[self.shift] @ self.orbit.seed.coords
        )


def build_product_orbit(orbit: LabeledOrbit, shift: int) -> ProductOrbit:
    """Pair each Alice orbit vector with its shifted Bob partner."""
    dec = orbit.dec
    if not 0 <= shift < len(dec.table):
        raise OrbitError(f"shift index {shift} outside the group")
    pair_map = pair_permutation(dec, shift)
    labels = []
    terms = np.empty((dec.k * dec.m, orbit.rep.dim**2))
    row = 0
    for alpha in range(dec.k):
        for l in range(dec.m):
            beta, lp = pair_map[(alpha, l)]
            labels.append(((alpha, l), (beta, lp)))
            terms[row] = np.kron(orbit.vector(alpha, l), orbit.vector(beta, lp))
            row += 1
    return ProductOrbit(
        orbit=orbit,
        shift=shift,
        pair_map=pair_map,
        labels=tuple(labels),
        terms=terms,
    )
