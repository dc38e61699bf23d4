import random

import pytest

from coclass.intmat import IntMatrix, charpoly, hnf, snf, xgcd

from _oracles import rational_solve_integral


def rand_matrix(rng, rows, cols, lo=-9, hi=9):
    return IntMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def rand_unimodular(rng, n, steps=12):
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-3, 3)
        for r in range(n):
            u[r][j] += q * u[r][i]
        if rng.random() < 0.3:
            for r in range(n):
                u[r][i], u[r][j] = u[r][j], u[r][i]
    return IntMatrix(u)


def test_xgcd_basics():
    for a, b in [(12, 18), (-12, 18), (0, 5), (7, 0), (-4, -6), (1, 1)]:
        g, s, t = xgcd(a, b)
        assert g >= 0
        assert s * a + t * b == g


def test_hnf_identity():
    eye = IntMatrix.identity(3)
    h, u = hnf(eye)
    assert h == eye
    assert u == eye


def test_hnf_already_canonical_diagonal():
    d = IntMatrix([[2, 0], [0, 2]])
    h, u = hnf(d)
    assert h == d
    assert u == IntMatrix.identity(2)


def test_hnf_factorization_and_unimodularity():
    rng = random.Random(11)
    for _ in range(30):
        a = rand_matrix(rng, 4, 4)
        h, u = hnf(a)
        assert a @ u == h
        assert abs(u.det()) == 1


def test_hnf_column_span_preserved_mutual_membership():
    # nonsingular case: span equality iff A^-1 H and H^-1 A are integral
    rng = random.Random(23)
    done = 0
    while done < 15:
        a = rand_matrix(rng, 4, 4)
        if a.det() == 0:
            continue
        h, _ = hnf(a)
        a_rows = a.to_lists()
        h_cols = [[h.data[i][j] for j in range(4)] for i in range(4)]
        assert rational_solve_integral(a_rows, h_cols)
        assert rational_solve_integral(h.to_lists(), a.to_lists())
        done += 1


def test_hnf_canonical_under_unimodular_right_factor():
    rng = random.Random(5)
    for _ in range(20):
        a = rand_matrix(rng, 3, 3)
        u = rand_unimodular(rng, 3)
        h1, _ = hnf(a)
        h2, _ = hnf(a @ u)
        assert h1 == h2


def test_hnf_shape_canonicality():
    # upper triangular, positive diagonal, reduced off-diagonal entries
    rng = random.Random(7)
    done = 0
    while done < 10:
        a = rand_matrix(rng, 4, 4)
        if a.det() == 0:
            continue
        h, _ = hnf(a)
        for i in range(4):
            assert h.data[i][i] > 0
            for j in range(4):
                if j < i:
                    assert h.data[i][j] == 0
                elif j > i:
                    assert 0 <= h.data[i][j] < h.data[i][i]
        done += 1


def test_hnf_empty():
    e = IntMatrix.zeros(0, 0)
    h, u = hnf(e)
    assert h.rows == 0 and u.rows == 0


def test_snf_coprime_diagonal():
    d, s, t = snf(IntMatrix([[2, 0], [0, 3]]))
    assert d == IntMatrix([[1, 0], [0, 6]])
    assert s @ IntMatrix([[2, 0], [0, 3]]) @ t == d


def test_snf_zero_matrix():
    z = IntMatrix.zeros(2, 3)
    d, s, t = snf(z)
    assert d == z
    assert abs(s.det()) == 1
    assert abs(t.det()) == 1


def test_snf_random_recomposition_and_divisibility():
    rng = random.Random(31)
    for _ in range(25):
        a = rand_matrix(rng, 3, 3)
        d, s, t = snf(a)
        assert s @ a @ t == d
        assert abs(s.det()) == 1
        assert abs(t.det()) == 1
        diag = [d.data[i][i] for i in range(3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert d.data[i][j] == 0
        for x, y in zip(diag, diag[1:]):
            if x != 0:
                assert y % x == 0
            else:
                assert y == 0
        prod = diag[0] * diag[1] * diag[2]
        assert abs(prod) == abs(a.det())


def test_snf_rectangular():
    rng = random.Random(13)
    for shape in [(2, 4), (4, 2), (3, 5)]:
        a = rand_matrix(rng, *shape)
        d, s, t = snf(a)
        assert s @ a @ t == d


def test_det_bareiss_vs_charpoly_constant():
    rng = random.Random(17)
    for _ in range(10):
        a = rand_matrix(rng, 4, 4, -5, 5)
        cp = charpoly(a)
        # constant coefficient is (-1)^n det
        assert cp[-1] == a.det()


def test_matrix_power_and_apply():
    m = IntMatrix([[1, 1], [0, 1]])
    assert (m ** 5) == IntMatrix([[1, 5], [0, 1]])
    assert m.apply((2, 3)) == (5, 3)


def test_ragged_rejected():
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])
