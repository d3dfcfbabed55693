import random

import pytest
from fractions import Fraction

from algdeform.linalg import (
    Matrix,
    RowReducer,
    invert,
    kernel_basis,
    rank,
    solve_affine,
)
from algdeform.scalar import I, ONE, ZERO, Scalar


def test_rank_identity():
    assert rank(Matrix.identity(2)) == 2


def test_rank_zero_matrix():
    assert rank(Matrix.zeros(3, 5)) == 0


def test_rank_complex_dependent_rows():
    # second row is i times the first
    m = Matrix.from_rows([[Scalar(1), I], [I, Scalar(-1)]])
    assert rank(m) == 1


def test_kernel_identity_empty():
    assert kernel_basis(Matrix.identity(3)) == []


def test_kernel_zero_matrix():
    basis = kernel_basis(Matrix.zeros(2, 2))
    assert len(basis) == 2


def test_kernel_one_dimensional():
    basis = kernel_basis(Matrix.from_rows([[1, 1], [0, 0]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == -v[1] and v[0]


def test_solve_identity():
    b = [Scalar(3), Scalar(-1, 2)]
    sol = solve_affine(Matrix.identity(2), b)
    assert sol.particular == b and sol.kernel == []


def test_solve_inconsistent():
    assert solve_affine(Matrix.zeros(2, 2), [1, 0]) is None


def test_solve_affine_with_kernel():
    sol = solve_affine(Matrix.from_rows([[1, 0], [1, 0]]), [2, 2])
    assert sol.particular == [Scalar(2), ZERO]
    assert len(sol.kernel) == 1
    assert sol.kernel[0] == [ZERO, ONE]


def _random_matrix(rng, rows, cols, span=3):
    return Matrix.from_rows(
        [[Scalar(rng.randint(-span, span)) for _ in range(cols)] for _ in range(rows)]
    )


def test_rank_nullity_randomized():
    rng = random.Random(42)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = _random_matrix(rng, rows, cols)
        assert rank(m) + len(kernel_basis(m)) == cols


def test_kernel_vectors_annihilate():
    rng = random.Random(43)
    for _ in range(30):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        for v in kernel_basis(m):
            assert all(not x for x in m.times_vector(v))


def test_solve_is_exact_on_consistent_systems():
    rng = random.Random(44)
    for _ in range(30):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = _random_matrix(rng, rows, cols)
        x = [Scalar(Fraction(rng.randint(-6, 6), rng.randint(1, 4))) for _ in range(cols)]
        b = m.times_vector(x)
        sol = solve_affine(m, b)
        assert sol is not None
        assert m.times_vector(sol.particular) == b


def test_solve_detects_inconsistency():
    m = Matrix.from_rows([[1, 1], [1, 1]])
    assert solve_affine(m, [1, 2]) is None


def test_invert_round_trip():
    rng = random.Random(45)
    done = 0
    while done < 10:
        m = _random_matrix(rng, 3, 3)
        if rank(m) < 3:
            continue
        minv = invert(m)
        assert minv is not None
        assert m @ minv == Matrix.identity(3)
        done += 1


def test_invert_singular_returns_none():
    assert invert(Matrix.zeros(2, 2)) is None
    assert invert(Matrix.from_rows([[1, 2], [2, 4]])) is None


def test_row_reducer_incremental_consistency():
    red = RowReducer()
    red.add_row({0: ONE, 1: ONE}, Scalar(2))
    red.add_row({0: ONE, 1: ONE}, Scalar(2))  # duplicate row is absorbed
    assert red.rank == 1 and not red.inconsistent
    red.add_row({0: ONE, 1: ONE}, Scalar(3))  # contradictory rhs
    assert red.inconsistent


def test_matrix_shape_validation():
    with pytest.raises(ValueError):
        Matrix(2, 2, [[1, 2]])
    with pytest.raises(ValueError):
        Matrix(1, 2, [[1, 2, 3]])
    with pytest.raises(ValueError):
        solve_affine(Matrix.identity(2), [1])


def test_cross_validation_against_sympy():
    sympy = pytest.importorskip("sympy")
    rng = random.Random(777)

    def rand_scalar():
        return Scalar(
            Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
            Fraction(rng.randint(-4, 4), rng.randint(1, 2)),
        )

    def to_sympy(m):
        return sympy.Matrix(
            m.rows,
            m.cols,
            lambda i, j: sympy.Rational(m.entries[i][j].re)
            + sympy.Rational(m.entries[i][j].im) * sympy.I,
        )

    for _ in range(40):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix(
            r, c,
            [[rand_scalar() if rng.random() < 0.7 else 0 for _ in range(c)] for _ in range(r)],
        )
        sm = to_sympy(m)
        assert rank(m) == sm.rank()
        assert len(kernel_basis(m)) == len(sm.nullspace())
        if r == c:
            assert (invert(m) is None) == (sm.det() == 0)
