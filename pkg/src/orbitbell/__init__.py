"""orbitbell: group-orbit Bell scenarios.

Build labeled orbits of finite permutation groups in real orthogonal
representation spaces, compare the exact hidden-variable bound on the
associated probability sum with the quantum bound, and produce the
certificates for both sides (an optimal deterministic strategy with a Hall
matching, and a witness eigenvector).
"""

from .bounds import (
    BellOperator,
    BoundsReport,
    BudgetError,
    DeterministicStrategy,
    MatchingError,
    MultiplicityError,
    assemble_bell_operator,
    chi_eigenvalue,
    classical_bound,
    classical_bound_bruteforce,
    compute_bounds,
    eigenvalues_by_irrep,
    evaluate_classical_S,
    evaluate_quantum_S,
    hall_condition_holds,
    hall_matching,
    matching_strategy,
    quantum_bound,
    strategy_hits,
)
from .eigen import EigensolverError, jacobi_eigh
from .orbits import (
    LabeledOrbit,
    OrbitError,
    ProductOrbit,
    RegularityReport,
    SeedError,
    SeedVector,
    build_labeled_orbit,
    build_product_orbit,
    check_regular,
    seed_constraints,
    seed_from_ambient,
    seed_from_coords,
    solve_seed,
)
from .permutations import (
    CosetDecomposition,
    GroupTable,
    Permutation,
    build_symmetric_group,
    cyclic_subgroup,
    left_cosets,
    pair_permutation,
)
from .representations import (
    CharacterTable,
    CharacterTableEntry,
    Representation,
    RepresentationError,
    chi_vector,
    isotypic_projector,
    load_representation,
    save_representation,
    standard_representation,
    symmetric_character_table,
    tensor_square,
)
from .scenario import (
    ConfigError,
    ScanResult,
    Scenario,
    ScenarioConfig,
    VerificationLedger,
    build_scenario,
    run_bounds,
    run_scan,
    run_verify,
)

__version__ = "0.1.0"
