import json

import numpy as np
import pytest

from orbitbell.permutations import build_symmetric_group
from orbitbell.representations import (
    RepresentationError,
    chi_vector,
    isotypic_projector,
    load_representation,
    partial_traces,
    permutation_matrix,
    save_representation,
    standard_representation,
    sum_zero_basis,
    symmetric_character_table,
    tensor_square,
)

TOL = 1e-9


@pytest.mark.parametrize("n,dim", [(3, 2), (4, 3)])
def test_standard_representation_dimension(n, dim):
    assert standard_representation(n).dim == dim


def test_sum_zero_basis_properties():
    for n in (3, 4, 5):
        basis = sum_zero_basis(n)
        assert np.allclose(basis.T @ basis, np.eye(n - 1), atol=TOL)
        assert np.allclose(basis.sum(axis=0), 0.0, atol=TOL)


@pytest.mark.parametrize("n", [3, 4])
def test_homomorphism_exhaustive(n):
    rep = standard_representation(n)
    size = len(rep.table)
    for i in range(size):
        for j in range(size):
            product = rep.matrices[i] @ rep.matrices[j]
            assert np.allclose(
                product, rep.matrices[rep.table.compose(i, j)], atol=TOL
            )


@pytest.mark.parametrize("n", [3, 4, 5])
def test_orthogonality(n):
    rep = standard_representation(n)
    assert rep.orthogonality_deviation() < TOL


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_character_norm_is_one(n):
    # real irreducibility indicator for the standard representation
    assert abs(standard_representation(n).character_norm() - 1.0) < TOL


def test_tensor_square_dimension_and_characters():
    rep = standard_representation(3)
    squared = tensor_square(rep)
    assert squared.dim == 4
    for g in range(len(rep.table)):
        assert abs(squared.character(g) - rep.character(g) ** 2) < TOL


def test_tensor_square_decomposition_s3():
    # trivial + sign + standard, each exactly once
    rep = standard_representation(3)
    table = symmetric_character_table(rep.table)
    mults = table.multiplicities(tensor_square(rep))
    assert mults == {"trivial": 1, "sign": 1, "standard": 1}


def test_tensor_square_decomposition_s4():
    rep = standard_representation(4)
    table = symmetric_character_table(rep.table)
    mults = table.multiplicities(tensor_square(rep))
    assert mults == {
        "trivial": 1,
        "sign": 0,
        "twodim": 1,
        "standard": 1,
        "standard_sign": 1,
    }


def test_character_tables_validate():
    for n in (3, 4):
        table = symmetric_character_table(build_symmetric_group(n))
        table.validate()
        assert sum(e.degree**2 for e in table.entries) == len(table.table)
    assert symmetric_character_table(build_symmetric_group(5)) is None


def test_isotypic_projectors_s3():
    rep = standard_representation(3)
    char_table = symmetric_character_table(rep.table)
    squared = tensor_square(rep)
    projectors = {
        e.label: isotypic_projector(squared, e, char_table)
        for e in char_table.entries
    }
    total = sum(projectors.values())
    assert np.allclose(total, np.eye(4), atol=TOL)
    ranks = {}
    for label, proj in projectors.items():
        assert np.allclose(proj, proj.T, atol=TOL)
        assert np.allclose(proj @ proj, proj, atol=TOL)
        ranks[label] = int(round(float(np.trace(proj))))
        for g in range(len(rep.table)):
            d = squared.matrices[g]
            assert np.allclose(proj @ d, d @ proj, atol=TOL)
    assert ranks == {"trivial": 1, "sign": 1, "standard": 2}
    # mutual orthogonality
    labels = list(projectors)
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            assert np.allclose(projectors[a] @ projectors[b], 0.0, atol=TOL)


def test_trivial_projector_spans_chi():
    rep = standard_representation(3)
    char_table = symmetric_character_table(rep.table)
    squared = tensor_square(rep)
    proj = isotypic_projector(squared, char_table.entry("trivial"), char_table)
    chi = chi_vector(2)
    assert np.allclose(proj, np.outer(chi, chi), atol=TOL)


def test_chi_vector_m2_explicit():
    chi = chi_vector(2)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    expected = (np.kron(e1, e1) + np.kron(e2, e2)) / np.sqrt(2.0)
    assert np.allclose(chi, expected, atol=TOL)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_chi_vector_unit_norm(m):
    assert abs(np.linalg.norm(chi_vector(m)) - 1.0) < TOL


def test_chi_invariance_under_tensor_square():
    rep = standard_representation(3)
    chi = chi_vector(2)
    for d in rep.matrices:
        assert np.allclose(np.kron(d, d) @ chi, chi, atol=TOL)


@pytest.mark.parametrize("m", [2, 3])
def test_chi_partial_traces_maximally_mixed(m):
    rho_a, rho_b = partial_traces(chi_vector(m), m)
    assert np.allclose(rho_a, np.eye(m) / m, atol=TOL)
    assert np.allclose(rho_b, np.eye(m) / m, atol=TOL)


def test_save_load_round_trip(tmp_path):
    rep = standard_representation(3)
    path = tmp_path / "standard3.json"
    save_representation(rep, path)
    loaded = load_representation(path)
    assert loaded.dim == rep.dim
    assert np.allclose(loaded.matrices, rep.matrices, atol=0)


def test_load_sign_representation():
    table = build_symmetric_group(3)
    signs = [1.0 if p.cycle_type() in ((1, 1, 1), (3,)) else -1.0 for p in table.elements]
    payload = {"n": 3, "dim": 1, "matrices": [[s] for s in signs]}
    rep = load_representation(payload)
    assert rep.dim == 1
    assert abs(rep.character_norm() - 1.0) < TOL


def test_load_rejects_wrong_identity():
    payload = {
        "n": 3,
        "dim": 1,
        "matrices": [[-1.0], [1.0], [1.0], [1.0], [1.0], [-1.0]],
    }
    with pytest.raises(RepresentationError):
        load_representation(payload)


def test_load_rejects_non_orthogonal():
    payload = {"n": 3, "dim": 1, "matrices": [[1.0], [2.0], [1.0], [1.0], [1.0], [1.0]]}
    with pytest.raises(RepresentationError):
        load_representation(payload)


def test_load_rejects_homomorphism_violation():
    table = build_symmetric_group(3)
    # orthogonal matrices that are not multiplicative: swap two sign entries
    signs = [1.0 if p.cycle_type() in ((1, 1, 1), (3,)) else -1.0 for p in table.elements]
    signs[1], signs[3] = signs[3], signs[1]
    payload = {"n": 3, "dim": 1, "matrices": [[s] for s in signs]}
    with pytest.raises(RepresentationError):
        load_representation(payload)


def test_load_rejects_dimension_mismatch():
    payload = {"n": 3, "dim": 2, "matrices": [[1.0]] * 6}
    with pytest.raises(RepresentationError):
        load_representation(payload)


def test_load_rejects_wrong_count(tmp_path):
    payload = {"n": 3, "dim": 1, "matrices": [[1.0]] * 5}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(RepresentationError):
        load_representation(path)


def test_load_explicit_element_list():
    # the defining 3-dimensional permutation representation of S_3
    table = build_symmetric_group(3)
    payload = {
        "elements": [list(p.images) for p in table.elements],
        "dim": 3,
        "matrices": [permutation_matrix(p).reshape(-1).tolist() for p in table.elements],
    }
    rep = load_representation(payload)
    assert rep.dim == 3
    # reducible: character norm is 2, not 1
    assert abs(rep.character_norm() - 2.0) < TOL
