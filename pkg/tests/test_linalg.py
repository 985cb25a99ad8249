import numpy as np

from trihered.linalg import (
    Matrix,
    QuotientChart,
    charpoly,
    image_basis,
    inverse,
    kernel_basis,
    poly_roots,
    rank,
    rref,
    solve,
)


def M(p, rows):
    return Matrix(p, rows)


def test_rref_identity():
    m = Matrix.identity(101, 2)
    r, pivots, rk = rref(m)
    assert r == m and pivots == [0, 1] and rk == 2


def test_rref_zero():
    m = Matrix.zeros(101, 3, 4)
    r, pivots, rk = rref(m)
    assert r == m and pivots == [] and rk == 0


def test_rref_hand_example_f5():
    # hand row-reduction of [[2,4],[1,2]] over F_5
    m = M(5, [[2, 4], [1, 2]])
    r, pivots, rk = rref(m)
    assert r == M(5, [[1, 2], [0, 0]])
    assert pivots == [0] and rk == 1


def test_solve_identity():
    a = Matrix.identity(101, 2)
    b = M(101, [[3], [4]])
    assert solve(a, b) == b


def test_solve_inconsistent():
    a = Matrix.zeros(101, 2, 2)
    b = M(101, [[1], [0]])
    assert solve(a, b) is None


def test_solve_free_variable_zeroed():
    a = M(5, [[1, 1]])
    b = M(5, [[3]])
    assert solve(a, b) == M(5, [[3], [0]])


def test_kernel_identity_and_zero():
    assert kernel_basis(Matrix.identity(101, 3)).cols == 0
    k = kernel_basis(Matrix.zeros(101, 2, 3))
    assert k == Matrix.identity(101, 3)


def test_kernel_hand_example_f5():
    k = kernel_basis(M(5, [[1, 2]]))
    assert k == M(5, [[3], [1]])


def test_rank_nullity_and_idempotence(rng):
    p = 101
    for _ in range(50):
        a = Matrix(p, rng.integers(0, p, size=(rng.integers(1, 6), rng.integers(1, 6))))
        r, pivots, rk = rref(a)
        assert rk + kernel_basis(a).cols == a.cols
        r2, _, _ = rref(r)
        assert r2 == r


def test_solve_recovers_consistent_rhs(rng):
    p = 101
    for _ in range(50):
        m, n = rng.integers(1, 6, size=2)
        a = Matrix(p, rng.integers(0, p, size=(m, n)))
        x = Matrix(p, rng.integers(0, p, size=(n, 1)))
        b = a @ x
        y = solve(a, b)
        assert y is not None and a @ y == b


def test_image_basis_spans_columns(rng):
    p = 101
    for _ in range(20):
        a = Matrix(p, rng.integers(0, p, size=(4, 3)))
        im = image_basis(a)
        assert im.cols == rank(a)
        # every column of a solves against the basis
        assert solve(im, a) is not None


def test_quotient_chart_roundtrip(rng):
    p = 101
    span = Matrix(p, rng.integers(0, p, size=(5, 2)))
    ch = QuotientChart(image_basis(span))
    # reduce kills the span
    assert ch.reduce(span).is_zero()
    c = Matrix(p, rng.integers(0, p, size=(ch.dim, 1)))
    assert ch.reduce(ch.section(c)) == c


def test_inverse():
    a = M(101, [[1, 2], [3, 4]])
    ai = inverse(a)
    assert ai is not None and a @ ai == Matrix.identity(101, 2)
    assert inverse(M(101, [[1, 2], [2, 4]])) is None


def test_charpoly_and_roots():
    a = M(101, [[2, 0], [0, 3]])
    coeffs = charpoly(a)  # (x-2)(x-3) = x^2 - 5x + 6
    assert coeffs == [6, 101 - 5, 1]
    assert sorted(poly_roots(coeffs, 101)) == [2, 3]
