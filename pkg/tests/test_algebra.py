import json

import pytest

from algdeform.algebra import (
    Algebra,
    Operator,
    banded_oscillator_algebra,
    decompose,
    diagonal_split,
    dual_number_algebra,
    full_matrix_algebra,
    matrix_unit_index,
    split_quaternion_algebra,
    transpose_operator,
    triangular_split,
    upper_triangular_algebra,
)
from algdeform.documents import (
    algebra_from_doc,
    algebra_to_doc,
    decomposition_from_doc,
    operator_from_doc,
    operator_to_doc,
)
from algdeform.errors import AlgebraError, DocumentError
from algdeform.scalar import ONE, Scalar


def units(n):
    alg = full_matrix_algebra(n)
    return alg, {
        (p, q): alg.basis_element(matrix_unit_index(n, p, q))
        for p in range(n)
        for q in range(n)
    }


def test_matrix_units_multiplication():
    alg, E = units(2)
    assert E[(0, 1)] * E[(1, 0)] == E[(0, 0)]
    assert (E[(0, 1)] * E[(0, 1)]).is_zero
    assert alg.unit * E[(0, 1)] == E[(0, 1)]


def test_m3_unit_coordinates():
    alg = full_matrix_algebra(3)
    assert alg.dim == 9
    dense = alg.unit.dense()
    expected = [ONE if i in (0, 4, 8) else Scalar(0) for i in range(9)]
    assert dense == expected


def test_upper_triangular():
    alg = upper_triangular_algebra(3)
    assert alg.dim == 6
    by_label = {label: alg.basis_element(i) for i, label in enumerate(alg.basis)}
    assert by_label["E11"] * by_label["E12"] == by_label["E12"]
    assert by_label["E12"] * by_label["E23"] == by_label["E13"]
    assert (by_label["E12"] * by_label["E12"]).is_zero
    assert alg.unit is not None


def test_every_builder_is_associative_and_unital():
    for alg in (
        full_matrix_algebra(2),
        full_matrix_algebra(3),
        upper_triangular_algebra(3),
        dual_number_algebra(),
        split_quaternion_algebra(),
    ):
        assert alg.associativity_witness() is None
        u = alg.unit
        for j in range(alg.dim):
            ej = alg.basis_element(j)
            assert u * ej == ej and ej * u == ej


def test_oscillator_ladder_identities():
    for dim in (2, 5, 8):
        alg, a, adag, h = banded_oscillator_algebra(dim)
        assert adag * a == h
        top = alg.basis_element(matrix_unit_index(dim, dim - 1, dim - 1))
        assert a * adag - adag * a == alg.unit - dim * top
        assert h * adag - adag * h == adag
        assert a * h - h * a == a
        assert alg.metadata["band"] == 1


def test_oscillator_preconditions():
    with pytest.raises(AlgebraError):
        banded_oscillator_algebra(1)
    with pytest.raises(AlgebraError):
        banded_oscillator_algebra(4, band=0)


def test_dual_numbers():
    alg = dual_number_algebra()
    eps = alg.basis_element(1)
    assert (eps * eps).is_zero
    assert alg.unit == alg.basis_element(0)


def test_split_quaternion_matches_matrix_realization():
    # the abstract table reproduces ordinary 2x2 matrix products of
    # I, diag(1,-1), the swap, and the quarter turn
    sq = split_quaternion_algebra()
    m2, E = units(2)
    real = {
        0: m2.unit,
        1: E[(0, 0)] - E[(1, 1)],
        2: E[(0, 1)] + E[(1, 0)],
        3: E[(0, 1)] - E[(1, 0)],
    }
    for i in range(4):
        for j in range(4):
            product = sq.basis_element(i) * sq.basis_element(j)
            expected = real[i] * real[j]
            realized = sum(
                (v * real[k] for k, v in product.coords.items()),
                m2.zero(),
            )
            assert realized == expected, (i, j)
    C = sq.basis_element(3)
    assert C * C == -1 * sq.unit


def test_multiply_rejects_algebra_mismatch():
    a = full_matrix_algebra(2)
    b = dual_number_algebra()
    with pytest.raises(AlgebraError):
        a.basis_element(0) * b.basis_element(0)


def test_element_arithmetic():
    alg = full_matrix_algebra(2)
    x = alg.element([1, 2, 0, "1/2"])
    y = alg.basis_element(0)
    assert (x + y).coeff(0) == Scalar(2)
    assert (x - x).is_zero
    assert (3 * x).coeff(1) == Scalar(6)
    assert x.dense()[3] == Scalar("1/2", 0) or str(x.dense()[3]) == "1/2"


def test_operator_basics():
    alg = full_matrix_algebra(2)
    T = transpose_operator(alg)
    E01 = alg.basis_element(1)
    E10 = alg.basis_element(2)
    assert T(E01) == E10
    assert (T @ T) == Operator.identity(alg)
    assert T.power(2) == Operator.identity(alg)
    K = alg.element({0: 1, 3: 2})
    NK = Operator.left_multiplication(K)
    assert NK(E01) == E01
    assert NK(E10) == 2 * E10
    assert (NK + NK)(E10) == 4 * E10
    rows = NK.to_matrix_rows()
    assert operator_from_doc(alg, operator_to_doc(NK)) == NK
    assert rows[2][2] == Scalar(2)


def test_decomposition_flags_and_projections():
    m2 = full_matrix_algebra(2)
    dec = triangular_split(m2)
    assert dec.part1_closed and dec.part2_closed
    E21 = m2.basis_element(2)
    assert dec.project(E21, 1).is_zero
    x = m2.element([1, 2, 3, 4])
    assert dec.project(x, 1) + dec.project(x, 2) == x
    P1 = dec.projector(1)
    assert P1 @ P1 == P1

    sq = split_quaternion_algebra()
    dec2 = decompose(sq, [0, 3])
    assert dec2.part1_closed and not dec2.part2_closed

    whole = decompose(m2, range(4))
    assert whole.part2 == () and whole.part2_closed

    dd = diagonal_split(m2)
    assert dd.part1_closed and not dd.part2_closed


def test_project_on_mixed_element():
    m2 = full_matrix_algebra(2)
    dec = triangular_split(m2)
    x = m2.basis_element(0) + m2.basis_element(2)  # E11 + E21
    assert dec.project(x, 1) == m2.basis_element(0)


def test_algebra_document_round_trip():
    alg = full_matrix_algebra(2)
    doc = algebra_to_doc(alg)
    loaded = algebra_from_doc(json.loads(json.dumps(doc)))
    assert loaded.dim == alg.dim
    assert loaded.structure == alg.structure
    assert loaded.unit is not None
    assert loaded.unit.coords == alg.unit.coords


def test_unit_discovery_from_document():
    doc = algebra_to_doc(full_matrix_algebra(2))
    del doc["unit"]
    loaded = algebra_from_doc(doc)
    assert loaded.unit is not None
    assert loaded.unit.coords == full_matrix_algebra(2).unit.coords


def test_load_rejects_non_associative():
    # e1*e1 = e2, e1*e2 = e1, e2*anything = 0: (e1 e1) e1 = 0 but e1 (e1 e1) = e1
    doc = {
        "name": "bad",
        "dim": 2,
        "basis": ["e1", "e2"],
        "structure": [[0, 0, 1, "1"], [0, 1, 0, "1"]],
    }
    with pytest.raises(AlgebraError):
        algebra_from_doc(doc)


def test_load_rejects_false_unit():
    doc = algebra_to_doc(full_matrix_algebra(2))
    doc["unit"] = ["1", "0", "0", "0"]  # E11 is not a unit
    with pytest.raises(AlgebraError):
        algebra_from_doc(doc)


def test_load_dual_numbers_document():
    doc = {
        "name": "dual",
        "dim": 2,
        "basis": ["1", "eps"],
        "structure": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
    }
    alg = algebra_from_doc(doc)
    assert alg.dim == 2
    eps = alg.basis_element(1)
    assert (eps * eps).is_zero
    assert alg.unit == alg.basis_element(0)
    # commutative
    x = alg.element([1, 2])
    y = alg.element([3, "1/2"])
    assert x * y == y * x


def test_document_validation_errors():
    with pytest.raises(DocumentError):
        algebra_from_doc({"name": "x", "dim": 1, "basis": ["e"]})
    with pytest.raises(DocumentError):
        algebra_from_doc(
            {"name": "x", "dim": 1, "basis": ["e"], "structure": [[0, 0, 5, "1"]]}
        )
    with pytest.raises(DocumentError):
        algebra_from_doc(
            {"name": "x", "dim": 1, "basis": ["e"], "structure": [[0, 0, 0, "1.5"]]}
        )
    alg = full_matrix_algebra(2)
    with pytest.raises(DocumentError):
        operator_from_doc(alg, {"algebra": "M2", "matrix": [["1"]]})
    with pytest.raises(DocumentError):
        operator_from_doc(alg, {"algebra": "other", "matrix": [["0"] * 4] * 4})
    with pytest.raises(DocumentError):
        decomposition_from_doc(alg, {"part1": [0, 9]})


def test_no_unit_algebra_discovery():
    # strictly upper triangular 2x2: one-dimensional, zero product, no unit
    doc = {"name": "nil", "dim": 1, "basis": ["n"], "structure": []}
    alg = algebra_from_doc(doc)
    assert alg.unit is None
