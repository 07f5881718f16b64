"""Classical and quantum bounds on orbit probability sums.

The probability sum of a set of product orbits is S = (w, X w) on the
quantum side, where X stacks one rank-1 projector per orbit term; its
maximum is the top eigenvalue of X.  On the hidden-variable side S is
bounded by the maximal number of orbit terms a deterministic outcome
assignment can hit, found here by exact enumeration: Bob assignments are
enumerated exhaustively and Alice's best reply decomposes per observable.

The per-irreducible eigenvalue formula

    x_s = (|G| / d_s) * ||projection of v_A ⊗ v_B onto component s||^2

applies whenever the tensor square is multiplicity-free and is kept as an
independent route to the spectrum next to the dense eigensolver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .eigen import jacobi_eigh
from .orbits import ProductOrbit
from .representations import CharacterTable, Representation, chi_vector

VIOLATION_TOLERANCE = 1e-7
DEFAULT_BUDGET = 10**8
_BOB_CHUNK = 1 << 14


class BudgetError(RuntimeError):
    """The exact strategy enumeration would exceed the configured budget."""


class MultiplicityError(ValueError):
    """The tensor square is not multiplicity-free, so the closed-form
    eigenvalues are unavailable; use the direct eigensolver."""


class MatchingError(RuntimeError):
    """No perfect matching was found where Hall's theorem guarantees one;
    this signals a broken orbit or an internal bug."""


@dataclass(frozen=True)
class DeterministicStrategy:
    """One outcome per observable for each party: alice[alpha] and
    bob[beta] are outcomes in {0..m-1}."""

    alice: tuple[int, ...]
    bob: tuple[int, ...]


@dataclass(eq=False)
class BellOperator:
    """The symmetric PSD operator summing rank-1 projectors onto every
    term of the contributing product orbits."""

    matrix: np.ndarray
    orbits: tuple[ProductOrbit, ...]
    _spectrum: tuple[np.ndarray, np.ndarray] | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (descending) and eigenvector columns, cached."""
        if self._spectrum is None:
            self._spectrum = jacobi_eigh(self.matrix)
        return self._spectrum

    def trace(self) -> float:
        return float(np.trace(self.matrix))


def assemble_bell_operator(orbits: Sequence[ProductOrbit]) -> BellOperator:
    """Sum the rank-1 projectors of every term of every orbit."""
    if not orbits:
        raise ValueError("at least one product orbit is required")
    dims = {orbit.terms.shape[1] for orbit in orbits}
    if len(dims) != 1:
        raise ValueError(f"orbits live in different tensor spaces: dims {sorted(dims)}")
    tables = {id(orbit.orbit.dec.table) for orbit in orbits}
    if len(tables) != 1:
        raise ValueError("orbits must be built over the same group")
    dim = dims.pop()
    matrix = np.zeros((dim, dim))
    for orbit in orbits:
        matrix += orbit.terms.T @ orbit.terms
    return BellOperator(matrix=matrix, orbits=tuple(orbits))


def quantum_bound(op: BellOperator) -> tuple[float, np.ndarray]:
    """Top eigenvalue of X and a unit witness eigenvector."""
    eigenvalues, eigenvectors = op.spectrum()
    return float(eigenvalues[0]), eigenvectors[:, 0].copy()


def evaluate_quantum_S(orbits: Sequence[ProductOrbit], w: np.ndarray) -> float:
    """S = sum over orbit terms of |<term, w>|^2 for a unit state w."""
    w = np.asarray(w, dtype=float)
    norm = float(np.linalg.norm(w))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state must be a unit vector, got norm {norm}")
    total = 0.0
    for orbit in orbits:
        overlaps = orbit.terms @ w
        total += float(np.dot(overlaps, overlaps))
    return total


def chi_eigenvalue(orbits: Sequence[ProductOrbit]) -> float:
    """Eigenvalue of the maximally entangled vector:
    (|G|/m) * sum over orbits of <v_A, v_B>^2."""
    first = orbits[0].orbit
    size = len(first.dec.table)
    return (size / first.m) * sum(o.seed_overlap() ** 2 for o in orbits)


def chi_residual(op: BellOperator) -> tuple[float, float]:
    """(eigenvalue, ||X chi - lambda chi||) for the entangled unit vector."""
    m = op.orbits[0].orbit.m
    chi = chi_vector(m)
    lam = chi_eigenvalue(op.orbits)
    return lam, float(np.linalg.norm(op.matrix @ chi - lam * chi))


# --- per-irreducible eigenvalues (closed form) ------------------------------


def tensor_square_multiplicities(
    rep: Representation, char_table: CharacterTable
) -> dict[str, int]:
    """Multiplicity of each irreducible inside D ⊗ D, from squared characters."""
    chars2 = rep.characters() ** 2
    size = len(rep.table)
    out = {}
    for entry in char_table.entries:
        inner = float(np.dot(chars2, char_table.values_by_element(entry))) / size
        out[entry.label] = int(round(inner))
    return out


def eigenvalues_by_irrep(
    op: BellOperator, char_table: CharacterTable
) -> dict[str, float]:
    """Closed-form eigenvalue per irreducible constituent of D ⊗ D.

    Requires every multiplicity to be at most one; otherwise raises
    :class:`MultiplicityError` and the caller must fall back to the dense
    eigensolver.  For a sum of orbits the per-component eigenvalues add.
    """
    rep = op.orbits[0].orbit.rep
    mults = tensor_square_multiplicities(rep, char_table)
    offenders = {label: m for label, m in mults.items() if m > 1}
    if offenders:
        raise MultiplicityError(
            f"tensor square has multiplicities above one ({offenders}); "
            "use the direct eigensolver instead"
        )
    size = len(rep.table)
    out = {}
    for entry in char_table.entries:
        values = char_table.values_by_element(entry)
        x_s = 0.0
        for orbit in op.orbits:
            v_a = orbit.orbit.seed.coords
            v_b = rep.matrices[orbit.shift] @ v_a
            images_a = np.einsum("gij,j->gi", rep.matrices, v_a)
            images_b = np.einsum("gij,j->gi", rep.matrices, v_b)
            # P_s (v_A ⊗ v_B) accumulated without materializing D ⊗ D
            projected = np.einsum("g,gi,gj->ij", values, images_a, images_b).reshape(-1)
            projected *= entry.degree / size
            x_s += (size / entry.degree) * float(np.dot(projected, projected))
        out[entry.label] = x_s
    return out


def spectrum_from_irreps(
    op: BellOperator, char_table: CharacterTable
) -> np.ndarray:
    """The full spectrum predicted by the closed form: each x_s repeated
    (multiplicity * degree) times, sorted descending."""
    rep = op.orbits[0].orbit.rep
    mults = tensor_square_multiplicities(rep, char_table)
    values = eigenvalues_by_irrep(op, char_table)
    out: list[float] = []
    for entry in char_table.entries:
        out.extend([values[entry.label]] * (mults[entry.label] * entry.degree))
    return np.array(sorted(out, reverse=True))


# --- exact classical bound ---------------------------------------------------


def _shared_decomposition(orbits: Sequence[ProductOrbit]):
    if not orbits:
        raise ValueError("at least one product orbit is required")
    dec = orbits[0].orbit.dec
    for orbit in orbits[1:]:
        if orbit.orbit.dec is not dec:
            raise ValueError("orbits must share one labeled orbit (same observables)")
    return dec


def strategy_hits(orbits: Sequence[ProductOrbit], strategy: DeterministicStrategy) -> int:
    """Number of orbit terms consistent with a deterministic assignment."""
    dec = _shared_decomposition(orbits)
    if len(strategy.alice) != dec.k or len(strategy.bob) != dec.k:
        raise ValueError(f"strategy must assign all {dec.k} observables per party")
    hits = 0
    for orbit in orbits:
        for (alpha, l), (beta, lp) in orbit.labels:
            if strategy.alice[alpha] == l and strategy.bob[beta] == lp:
                hits += 1
    return hits


def _bob_digit_chunk(start: int, stop: int, k: int, m: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic Bob assignment enumeration."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((stop - start, k), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        digits[:, j] = idx % m
        idx //= m
    return digits


def classical_bound(
    orbits: Sequence[ProductOrbit], budget: int = DEFAULT_BUDGET
) -> tuple[int, DeterministicStrategy]:
    """Exact maximum of S over deterministic strategies, with a maximizer.

    Bob's m^k assignments are enumerated outright; for each one the gain
    decomposes as a sum over Alice observables, so Alice's best reply is
    the per-observable argmax.  Ties resolve to the lexicographically
    smallest Bob assignment, then the smallest Alice outcomes.
    """
    dec = _shared_decomposition(orbits)
    k, m = dec.k, dec.m
    total = m**k
    if total > budget:
        raise BudgetError(
            f"classical bound needs m^k = {m}^{k} = {total} Bob assignments, "
            f"over the budget of {budget}; reduce the scenario (smaller n) or "
            "raise --budget"
        )
    labels = [label for orbit in orbits for label in orbit.labels]
    best_value = -1
    best_bob: np.ndarray | None = None
    for start in range(0, total, _BOB_CHUNK):
        stop = min(start + _BOB_CHUNK, total)
        digits = _bob_digit_chunk(start, stop, k, m)
        gains = np.zeros((stop - start, k, m))
        for (alpha, l), (beta, lp) in labels:
            gains[:, alpha, l] += digits[:, beta] == lp
        totals = gains.max(axis=2).sum(axis=1)
        at = int(np.argmax(totals))
        if int(totals[at]) > best_value:
            best_value = int(totals[at])
            best_bob = digits[at].copy()
    assert best_bob is not None
    gains = np.zeros((k, m))
    for (alpha, l), (beta, lp) in labels:
        if best_bob[beta] == lp:
            gains[alpha, l] += 1
    alice = tuple(int(np.argmax(gains[alpha])) for alpha in range(k))
    strategy = DeterministicStrategy(alice=alice, bob=tuple(int(b) for b in best_bob))
    achieved = strategy_hits(orbits, strategy)
    assert achieved == best_value, "per-observable optimization is inconsistent"
    return best_value, strategy


def classical_bound_bruteforce(
    orbits: Sequence[ProductOrbit], limit: int = 2_000_000
) -> int:
    """Independent oracle: scan all m^(2k) joint strategies outright."""
    dec = _shared_decomposition(orbits)
    k, m = dec.k, dec.m
    if m ** (2 * k) > limit:
        raise BudgetError(
            f"brute force needs m^(2k) = {m}^{2 * k} joint strategies, over {limit}"
        )
    best = -1
    for alice in itertools.product(range(m), repeat=k):
        for bob in itertools.product(range(m), repeat=k):
            hits = 0
            for orbit in orbits:
                for (alpha, l), (beta, lp) in orbit.labels:
                    if alice[alpha] == l and bob[beta] == lp:
                        hits += 1
            best = max(best, hits)
    return best


def evaluate_classical_S(
    orbits: Sequence[ProductOrbit],
    distribution: Mapping[DeterministicStrategy, float],
) -> float:
    """S for an explicit joint distribution over deterministic configurations
    (supplied sparsely; omitted configurations have probability zero)."""
    dec = _shared_decomposition(orbits)
    total_probability = 0.0
    value = 0.0
    for strategy, probability in distribution.items():
        if probability < 0:
            raise ValueError(f"negative probability {probability}")
        if not all(0 <= o < dec.m for o in strategy.alice + strategy.bob):
            raise ValueError(f"strategy {strategy} has outcomes outside 0..{dec.m - 1}")
        total_probability += probability
        value += probability * strategy_hits(orbits, strategy)
    if abs(total_probability - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {total_probability}, expected 1")
    return value


# --- Hall matching certificate ----------------------------------------------


def hall_matching(orbit: ProductOrbit) -> tuple[tuple[int, int], ...]:
    """A perfect matching certifying that the single-orbit bound k is
    attained: for each Alice coset alpha an outcome l(alpha) such that the
    matched Bob cosets are pairwise distinct.

    Kuhn's augmenting-path search over the bipartite coset graph; by Hall's
    theorem a perfect matching always exists for a valid orbit, so anything
    smaller raises :class:`MatchingError`.
    """
    k = orbit.orbit.k
    edges: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for (alpha, l), (beta, _) in orbit.labels:
        edges[alpha].append((beta, l))
    matched_alpha: dict[int, int] = {}
    chosen_l: dict[int, int] = {}

    def augment(alpha: int, visited: set[int]) -> bool:
        for beta, l in edges[alpha]:
            if beta in visited:
                continue
            visited.add(beta)
            if beta not in matched_alpha or augment(matched_alpha[beta], visited):
                matched_alpha[beta] = alpha
                chosen_l[alpha] = l
                return True
        return False

    size = sum(1 for alpha in range(k) if augment(alpha, set()))
    if size != k:
        raise MatchingError(
            f"maximum matching has size {size} < k = {k}; the orbit violates "
            "the Hall condition, which indicates an internal inconsistency"
        )
    return tuple((alpha, chosen_l[alpha]) for alpha in range(k))


def matching_strategy(
    orbit: ProductOrbit, matching: Sequence[tuple[int, int]]
) -> DeterministicStrategy:
    """The saturating deterministic configuration induced by a perfect
    matching: Alice plays l(alpha), Bob mirrors through the pair permutation."""
    k = orbit.orbit.k
    alice = [0] * k
    bob = [0] * k
    seen_betas = set()
    for alpha, l in matching:
        beta, lp = orbit.pair_map[(alpha, l)]
        if beta in seen_betas:
            raise MatchingError(f"matching reuses Bob coset {beta}")
        seen_betas.add(beta)
        alice[alpha] = l
        bob[beta] = lp
    return DeterministicStrategy(alice=tuple(alice), bob=tuple(bob))


def hall_condition_holds(orbit: ProductOrbit) -> tuple[bool, str]:
    """Check |C| <= |N(C)| for every nonempty coset subset C (2^k - 1 sets)."""
    k = orbit.orbit.k
    if k > 20:
        raise ValueError(f"subset check is exponential; k = {k} is too large")
    neighbor_mask = [0] * k
    for (alpha, _), (beta, _) in orbit.labels:
        neighbor_mask[alpha] |= 1 << beta
    for subset in range(1, 1 << k):
        union = 0
        for alpha in range(k):
            if subset >> alpha & 1:
                union |= neighbor_mask[alpha]
        if bin(union).count("1") < bin(subset).count("1"):
            return False, f"subset mask {subset:#x} has a smaller neighborhood"
    return True, f"all {(1 << k) - 1} subsets satisfy |C| <= |N(C)|"


# --- invariants used by the verification suite -------------------------------


def group_commutation_deviation(op: BellOperator) -> float:
    """Max entry of [X, D(g) ⊗ D(g)] over all group elements."""
    rep = op.orbits[0].orbit.rep
    worst = 0.0
    for d in rep.matrices:
        dd = np.kron(d, d)
        worst = max(worst, float(np.max(np.abs(op.matrix @ dd - dd @ op.matrix))))
    return worst


def commutator_deviation(a: BellOperator, b: BellOperator) -> float:
    return float(np.max(np.abs(a.matrix @ b.matrix - b.matrix @ a.matrix)))


# --- report -------------------------------------------------------------------


@dataclass(eq=False)
class BoundsReport:
    """Everything the bound comparison produced for one scenario."""

    classical_bound: int
    optimal_strategy: DeterministicStrategy
    quantum_bound: float
    witness: np.ndarray
    margin: float
    violation: bool
    chi_eigenvalue: float
    hall_matching: tuple[tuple[int, int], ...] | None = None
    per_irrep: dict[str, float] | None = None


def compute_bounds(
    orbits: Sequence[ProductOrbit],
    char_table: CharacterTable | None = None,
    budget: int = DEFAULT_BUDGET,
    violation_tolerance: float = VIOLATION_TOLERANCE,
) -> BoundsReport:
    """Run both sides of the comparison and package the certificates."""
    op = assemble_bell_operator(orbits)
    lam, witness = quantum_bound(op)
    classical, strategy = classical_bound(orbits, budget=budget)
    per_irrep = None
    if char_table is not None:
        try:
            per_irrep = eigenvalues_by_irrep(op, char_table)
        except MultiplicityError:
            per_irrep = None
    matching = hall_matching(orbits[0]) if len(orbits) == 1 else None
    margin = lam - classical
    return BoundsReport(
        classical_bound=classical,
        optimal_strategy=strategy,
        quantum_bound=lam,
        witness=witness,
        margin=margin,
        violation=margin > violation_tolerance,
        chi_eigenvalue=chi_eigenvalue(orbits),
        hall_matching=matching,
        per_irrep=per_irrep,
    )
