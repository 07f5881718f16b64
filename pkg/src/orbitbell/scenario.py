"""Scenario configuration and the three pipelines: bounds, scan, verify.

A scenario is a group with a chosen real representation, a cyclic subgroup
whose order matches the representation dimension, a seed vector, and a list
of shift elements selecting the product orbits.  Configurations are plain
JSON; every default mirrors the running symmetric-group construction
(G = S_n, H generated by the cycle (1 2 ... n-1), auto-solved seed).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from . import bounds as bounds_mod
from .bounds import (
    BoundsReport,
    BudgetError,
    DEFAULT_BUDGET,
    assemble_bell_operator,
    chi_residual,
    classical_bound,
    classical_bound_bruteforce,
    commutator_deviation,
    compute_bounds,
    evaluate_classical_S,
    group_commutation_deviation,
    hall_condition_holds,
    hall_matching,
    matching_strategy,
    quantum_bound,
    spectrum_from_irreps,
)
from .orbits import (
    LabeledOrbit,
    ProductOrbit,
    SeedVector,
    build_labeled_orbit,
    build_product_orbit,
    check_regular,
    constraint_rank,
    independent_constraint_count,
    seed_constraints,
    seed_from_ambient,
    seed_from_coords,
    solve_seed,
)
from .permutations import (
    CosetDecomposition,
    GroupTable,
    cyclic_subgroup,
    left_cosets,
    normalizer_of_subgroup,
    pair_permutation,
)
from .representations import (
    CharacterTable,
    Representation,
    TOLERANCE,
    load_representation,
    standard_representation,
    symmetric_character_table,
)


class ConfigError(ValueError):
    """The scenario configuration is invalid."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed scenario parameters; see :func:`ScenarioConfig.from_dict`."""

    group_n: int | None = None
    representation_file: str | None = None
    generator: str | None = None
    seed: str | tuple[float, ...] = "auto"
    shifts: tuple[str, ...] = ("e",)
    budget: int = DEFAULT_BUDGET
    tolerance: float = TOLERANCE
    mode: str | None = None

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ScenarioConfig":
        known = {
            "group",
            "generator",
            "seed",
            "orbits",
            "mode",
            "budget",
            "tolerance",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        group = raw.get("group")
        group_n = None
        rep_file = None
        if isinstance(group, Mapping):
            if "symmetric" in group:
                group_n = int(group["symmetric"])
            elif "representation_file" in group:
                rep_file = str(group["representation_file"])
            else:
                raise ConfigError(
                    "config group must carry 'symmetric' or 'representation_file'"
                )
        elif isinstance(group, int):
            group_n = group
        else:
            raise ConfigError("config needs a 'group' field")

        seed_raw = raw.get("seed", "auto")
        if isinstance(seed_raw, str):
            if seed_raw != "auto":
                raise ConfigError(f"seed must be 'auto' or a vector, got {seed_raw!r}")
            seed: str | tuple[float, ...] = "auto"
        else:
            seed = tuple(float(v) for v in seed_raw)

        shifts_raw = raw.get("orbits", ["e"])
        if not isinstance(shifts_raw, Sequence) or isinstance(shifts_raw, str):
            raise ConfigError("config 'orbits' must be a list of shift elements")
        if not shifts_raw:
            raise ConfigError("config 'orbits' must name at least one shift")

        mode = raw.get("mode")
        if mode is not None and mode not in ("bounds", "scan", "verify"):
            raise ConfigError(f"unknown mode {mode!r}")

        budget = int(raw.get("budget", DEFAULT_BUDGET))
        if budget <= 0:
            raise ConfigError("budget must be positive")
        tolerance = float(raw.get("tolerance", TOLERANCE))
        if tolerance <= 0:
            raise ConfigError("tolerance must be positive")

        return cls(
            group_n=group_n,
            representation_file=rep_file,
            generator=raw.get("generator"),
            seed=seed,
            shifts=tuple(str(s) for s in shifts_raw),
            budget=budget,
            tolerance=tolerance,
            mode=mode,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    def describe(self) -> dict:
        """Config echo embedded in reports."""
        group = (
            {"symmetric": self.group_n}
            if self.group_n is not None
            else {"representation_file": self.representation_file}
        )
        return {
            "group": group,
            "generator": self.generator,
            "seed": "auto" if self.seed == "auto" else list(self.seed),
            "orbits": list(self.shifts),
            "budget": self.budget,
            "tolerance": self.tolerance,
        }


@dataclass(eq=False)
class Scenario:
    """A fully built scenario, ready for bound computations."""

    config: ScenarioConfig
    rep: Representation
    subgroup: tuple[int, ...]
    dec: CosetDecomposition
    seed: SeedVector
    orbit: LabeledOrbit
    shifts: tuple[int, ...]
    char_table: CharacterTable | None

    @property
    def table(self) -> GroupTable:
        return self.rep.table

    def product_orbits(self) -> list[ProductOrbit]:
        return [build_product_orbit(self.orbit, s) for s in self.shifts]

    def orbit_hash(self) -> str:
        """Reproducibility fingerprint of the seed and labeled orbit."""
        digest = hashlib.sha256()
        digest.update(np.round(self.seed.coords, 12).tobytes())
        digest.update(np.round(self.orbit.vectors, 12).tobytes())
        digest.update(",".join(map(str, self.shifts)).encode())
        return digest.hexdigest()[:16]


def _stage(name: str):
    class _StageContext:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, (ConfigError, BudgetError)):
                raise type(exc)(f"[stage: {name}] {exc}") from exc
            return False

    return _StageContext()


def build_scenario(config: ScenarioConfig, validate_orbit: bool = True) -> Scenario:
    """Resolve a configuration into group, representation, cosets, seed and
    labeled orbit, reporting the failing pipeline stage on errors."""
    with _stage("representation"):
        if config.group_n is not None:
            n = config.group_n
            if not 3 <= n <= 8:
                raise ConfigError(f"symmetric group degree must be in 3..8, got {n}")
            rep = standard_representation(n)
        else:
            assert config.representation_file is not None
            rep = load_representation(config.representation_file)
    table = rep.table

    with _stage("cyclic subgroup"):
        if config.generator is not None:
            try:
                gen_index = table.parse(config.generator)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        elif config.group_n is not None:
            n = config.group_n
            cycle = "(" + " ".join(str(i) for i in range(1, n)) + ")"
            gen_index = table.parse(cycle)
        else:
            raise ConfigError("a generator is required for loaded representations")
        subgroup = tuple(cyclic_subgroup(table, gen_index))
        if len(subgroup) != rep.dim:
            raise ConfigError(
                f"generator {table.element(gen_index)} has order {len(subgroup)} "
                f"but the representation dimension is {rep.dim}; the orbit "
                "construction requires them to match"
            )

    with _stage("coset decomposition"):
        dec = left_cosets(table, subgroup)

    with _stage("seed"):
        if config.seed == "auto":
            if config.group_n is None:
                raise ConfigError(
                    "auto seeds are only available for symmetric groups; "
                    "supply an explicit seed vector"
                )
            seed = solve_seed(config.group_n)
        else:
            values = config.seed
            if rep.ambient_basis is not None and len(values) == rep.ambient_basis.shape[0]:
                seed = seed_from_ambient(rep, values)
            elif len(values) == rep.dim:
                seed = seed_from_coords(rep, values)
            else:
                raise ConfigError(
                    f"explicit seed has {len(values)} components; expected "
                    f"{rep.dim} representation coordinates"
                    + (
                        f" or {rep.ambient_basis.shape[0]} ambient coordinates"
                        if rep.ambient_basis is not None
                        else ""
                    )
                )

    with _stage("labeled orbit"):
        orbit = build_labeled_orbit(
            rep, seed, dec, validate=validate_orbit, tol=config.tolerance
        )

    with _stage("shifts"):
        shifts = []
        for text in config.shifts:
            try:
                shifts.append(table.parse(text))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    char_table = symmetric_character_table(table)
    return Scenario(
        config=config,
        rep=rep,
        subgroup=subgroup,
        dec=dec,
        seed=seed,
        orbit=orbit,
        shifts=tuple(shifts),
        char_table=char_table,
    )


def run_bounds(config: ScenarioConfig) -> tuple[Scenario, BoundsReport]:
    """Full pipeline: build the scenario and compare the two bounds."""
    scenario = build_scenario(config)
    with _stage("bounds"):
        report = compute_bounds(
            scenario.product_orbits(),
            char_table=scenario.char_table,
            budget=config.budget,
        )
    return scenario, report


# --- scan over shift elements -------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    shift: int
    shift_label: str
    shift_order: int
    classical: int
    quantum: float
    margin: float
    violation: bool


@dataclass(eq=False)
class ScanResult:
    scenario: Scenario
    rows: tuple[ScanRow, ...]  # sorted by margin descending
    violating_classes: tuple[tuple[int, ...], ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def any_violation(self) -> bool:
        return any(r.violation for r in self.rows)


def detected_shift_classes(
    table: GroupTable, subgroup: Sequence[int]
) -> list[tuple[int, ...]]:
    """Group elements up to the relabeling symmetries the toolkit detects:
    inversion of the shift and conjugation by the normalizer of H.

    This is the toolkit's working definition of equivalence, not a claim
    about the finest symmetry of the scenario; the scan checks that the
    bounds are constant on every class it reports.
    """
    normalizer = normalizer_of_subgroup(table, subgroup)
    parent = list(range(len(table)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for g in range(len(table)):
        union(g, table.inverse(g))
        for h in normalizer:
            union(g, table.conjugate(h, g))
    classes: dict[int, list[int]] = {}
    for g in range(len(table)):
        classes.setdefault(find(g), []).append(g)
    return [tuple(sorted(v)) for _, v in sorted(classes.items())]


def run_scan(config: ScenarioConfig) -> ScanResult:
    """Bounds of the two-orbit scenario {O(e), O(g)} for every g in G.

    Rows are sorted by margin descending (ties by element index).  The
    violating shifts are grouped by the detected relabeling symmetries;
    classes on which the bounds fail to be constant are split by value.
    """
    scenario = build_scenario(config)
    table = scenario.table
    base = build_product_orbit(scenario.orbit, 0)
    rows = []
    for g in range(len(table)):
        shifted = build_product_orbit(scenario.orbit, g)
        op = assemble_bell_operator([base, shifted])
        lam, _ = quantum_bound(op)
        classical, _ = classical_bound([base, shifted], budget=config.budget)
        margin = lam - classical
        rows.append(
            ScanRow(
                shift=g,
                shift_label=table.element(g).cycle_string(),
                shift_order=table.order_of(g),
                classical=classical,
                quantum=lam,
                margin=margin,
                violation=margin > bounds_mod.VIOLATION_TOLERANCE,
            )
        )

    by_shift = {row.shift: row for row in rows}
    classes = []
    for cls in detected_shift_classes(table, scenario.subgroup):
        # split any class whose members disagree, keeping the report honest
        members = sorted(cls, key=lambda g: (by_shift[g].classical, by_shift[g].quantum, g))
        current = [members[0]]
        for g in members[1:]:
            prev = by_shift[current[-1]]
            row = by_shift[g]
            if row.classical == prev.classical and abs(row.quantum - prev.quantum) <= 1e-6:
                current.append(g)
            else:
                classes.append(tuple(sorted(current)))
                current = [g]
        classes.append(tuple(sorted(current)))
    classes.sort()
    violating = tuple(
        cls for cls in classes if all(by_shift[g].violation for g in cls)
    )
    ordered = tuple(sorted(rows, key=lambda r: (-r.margin, r.shift)))
    return ScanResult(
        scenario=scenario,
        rows=ordered,
        violating_classes=violating,
        classes=tuple(classes),
    )


# --- verification suite ---------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(eq=False)
class VerificationLedger:
    scenario: Scenario
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _run_check(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashed check is a failed check
        return CheckResult(name=name, passed=False, detail=f"error: {exc}")
    return CheckResult(name=name, passed=bool(ok), detail=detail)


def run_verify(config: ScenarioConfig) -> VerificationLedger:
    """Run every module invariant against the configured scenario."""
    scenario = build_scenario(config, validate_orbit=False)
    rep = scenario.rep
    table = scenario.table
    tol = config.tolerance
    size = len(table)
    checks: list[CheckResult] = []

    def add(name: str, fn: Callable[[], tuple[bool, str]]) -> None:
        checks.append(_run_check(name, fn))

    add("representation_homomorphism", lambda: _fmt_dev(rep.homomorphism_deviation(), tol))
    add("representation_orthogonality", lambda: _fmt_dev(rep.orthogonality_deviation(), tol))

    if scenario.char_table is not None:
        char_table = scenario.char_table

        def char_table_check() -> tuple[bool, str]:
            char_table.validate(tol)
            return True, "row orthogonality and degree sum revalidated"

        add("character_table_orthogonality", char_table_check)

    if scenario.seed.ambient is not None:
        ambient = scenario.seed.ambient
        add(
            "seed_sum_zero",
            lambda: _fmt_dev(abs(float(ambient.sum())), tol),
        )
        add(
            "seed_constraint_residuals",
            lambda: _fmt_dev(float(np.max(np.abs(seed_constraints(ambient)))), tol),
        )

        def rank_check() -> tuple[bool, str]:
            n = ambient.shape[0]
            rank = constraint_rank(ambient)
            expected = independent_constraint_count(n)
            return rank == expected, f"rank {rank}, expected {expected}"

        add("seed_constraint_rank", rank_check)

    def regularity_check() -> tuple[bool, str]:
        report = check_regular(rep, scenario.seed)
        detail = f"min image distance {report.min_distance:.3e}"
        if report.coordinate_criterion is not None:
            agree = report.regular == report.coordinate_criterion
            detail += f"; coordinate criterion {'agrees' if agree else 'DISAGREES'}"
            return report.regular and agree, detail
        return report.regular, detail

    add("seed_regularity", regularity_check)

    add(
        "orbit_block_gram",
        lambda: _fmt_dev(scenario.orbit.block_gram_deviation(), tol),
    )

    def image_set_check() -> tuple[bool, str]:
        labeled = scenario.orbit.vectors.reshape(size, rep.dim)
        direct = np.einsum("gij,j->gi", rep.matrices, scenario.seed.coords)
        rounded_labeled = {tuple(np.round(v, 9)) for v in labeled}
        rounded_direct = {tuple(np.round(v, 9)) for v in direct}
        ok = rounded_labeled == rounded_direct and len(rounded_labeled) == size
        return ok, f"{len(rounded_labeled)} distinct labeled vectors of {size}"

    add("orbit_matches_group_images", image_set_check)

    def pair_bijection_check() -> tuple[bool, str]:
        for g in range(size):
            mapping = pair_permutation(scenario.dec, g)
            if len(set(mapping.values())) != size:
                return False, f"shift {table.element(g)} is not a bijection"
        return True, f"all {size} shifts act bijectively on (coset, outcome) pairs"

    add("pair_permutation_bijective", pair_bijection_check)

    orbits = scenario.product_orbits()
    op = assemble_bell_operator(orbits)

    def trace_check() -> tuple[bool, str]:
        expected = float(size * len(orbits))
        dev = abs(op.trace() - expected)
        return dev <= tol, f"trace {op.trace():.12g}, expected {expected:g}"

    add("operator_trace", trace_check)
    add("operator_group_commutation", lambda: _fmt_dev(group_commutation_deviation(op), tol))

    def orbit_commutation_check() -> tuple[bool, str]:
        shifts = range(size) if size <= 24 else scenario.shifts
        base = assemble_bell_operator([build_product_orbit(scenario.orbit, 0)])
        worst = 0.0
        for g in shifts:
            other = assemble_bell_operator([build_product_orbit(scenario.orbit, g)])
            worst = max(worst, commutator_deviation(base, other))
        return worst <= tol, f"max commutator entry {worst:.3e}"

    add("orbit_operators_commute", orbit_commutation_check)

    if scenario.char_table is not None:

        def spectrum_check() -> tuple[bool, str]:
            try:
                predicted = spectrum_from_irreps(op, scenario.char_table)
            except bounds_mod.MultiplicityError as exc:
                return True, f"skipped: {exc}"
            eigenvalues, _ = op.spectrum()
            if predicted.shape != eigenvalues.shape:
                return False, (
                    f"closed form predicts {predicted.shape[0]} eigenvalues, "
                    f"eigensolver found {eigenvalues.shape[0]}"
                )
            dev = float(np.max(np.abs(predicted - eigenvalues)))
            return dev <= tol, f"max spectrum deviation {dev:.3e}"

        add("spectrum_matches_closed_form", spectrum_check)

    def chi_check() -> tuple[bool, str]:
        lam, residual = chi_residual(op)
        return residual <= tol, f"eigenvalue {lam:.12g}, residual {residual:.3e}"

    add("chi_is_eigenvector", chi_check)

    def hall_check() -> tuple[bool, str]:
        shifts = range(size) if size <= 24 else scenario.shifts
        for g in shifts:
            orbit = build_product_orbit(scenario.orbit, g)
            ok, detail = hall_condition_holds(orbit)
            if not ok:
                return False, f"shift {table.element(g)}: {detail}"
            matching = hall_matching(orbit)
            if len(matching) != scenario.dec.k:
                return False, f"shift {table.element(g)}: matching too small"
            strategy = matching_strategy(orbit, matching)
            sat = evaluate_classical_S([orbit], {strategy: 1.0})
            if abs(sat - scenario.dec.k) > tol:
                return False, f"shift {table.element(g)}: point mass gives {sat}"
        return True, "perfect matchings found and saturating for all shifts checked"

    add("hall_matching_saturates", hall_check)

    def smart_vs_bruteforce() -> tuple[bool, str]:
        m, k = scenario.dec.m, scenario.dec.k
        if m ** (2 * k) > 1_000_000:
            return True, f"skipped: m^(2k) = {m}^{2 * k} exceeds the oracle limit"
        smart, _ = classical_bound(orbits, budget=config.budget)
        brute = classical_bound_bruteforce(orbits)
        return smart == brute, f"smart {smart}, brute force {brute}"

    add("classical_enumeration_vs_bruteforce", smart_vs_bruteforce)

    if len(orbits) == 1:

        def single_orbit_no_violation() -> tuple[bool, str]:
            lam, _ = quantum_bound(op)
            classical, _ = classical_bound(orbits, budget=config.budget)
            return (
                lam <= classical + bounds_mod.VIOLATION_TOLERANCE,
                f"quantum {lam:.12g} vs classical {classical}",
            )

        add("single_orbit_no_violation", single_orbit_no_violation)

    return VerificationLedger(scenario=scenario, checks=tuple(checks))


def _fmt_dev(deviation: float, tol: float) -> tuple[bool, str]:
    return deviation <= tol, f"max deviation {deviation:.3e} (tolerance {tol:g})"
