import random
from fractions import Fraction

import pytest

from logvvmf.errors import BackendMismatch, SingularMatrix
from logvvmf.linalg import (Matrix, QI, format_exact_scalar,
                            parse_exact_scalar, to_qi)


def test_qi_arithmetic():
    x = QI(Fraction(1, 2), Fraction(-3, 4))
    assert x + 1 == QI(Fraction(3, 2), Fraction(-3, 4))
    assert x - x == QI(0)
    assert QI(0, 1) * QI(0, 1) == QI(-1)
    assert (x / x) == QI(1)
    assert Fraction(1, 3) * QI(3) == QI(1)
    assert 1 / QI(0, 1) == QI(0, -1)
    assert complex(QI(1, 2)) == 1 + 2j
    with pytest.raises(ZeroDivisionError):
        x / QI(0)


def test_qi_reduction_and_hash():
    a = QI(Fraction(2, 4), Fraction(6, 4))
    b = QI(Fraction(1, 2), Fraction(3, 2))
    assert a == b and hash(a) == hash(b)
    assert bool(QI(0, 0)) is False and bool(QI(0, 1)) is True


def test_scalar_string_roundtrip():
    cases = [QI(0), QI(5), QI(-3, 2), QI(Fraction(1, 2), Fraction(-3, 4)),
             QI(0, 1), QI(Fraction(-7, 3))]
    for x in cases:
        assert parse_exact_scalar(format_exact_scalar(x)) == x
    with pytest.raises(ValueError):
        parse_exact_scalar("2+nonsense")


def test_to_qi_is_exact_on_binary_floats():
    assert to_qi(0.5) == QI(Fraction(1, 2))
    assert to_qi(complex(240.0, 0.0)) == QI(240)
    assert to_qi(Fraction(1, 3)) == QI(Fraction(1, 3))


def test_exact_inverse_and_det():
    M = Matrix.exact([[1, 2], [3, 4]])
    assert M.det() == QI(-2)
    assert M.inv() @ M == Matrix.identity(2)
    with pytest.raises(SingularMatrix):
        Matrix.exact([[1, 2], [2, 4]]).inv()


def test_rank_and_nullspace_exact():
    M = Matrix.exact([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert M.rank() == 2
    ns = M.nullspace()
    assert len(ns) == 1
    v = ns[0]
    for row in M.rows:
        assert sum((row[j] * v[j] for j in range(3)), QI(0)) == QI(0)


def test_float_backend_rank_nullspace():
    M = Matrix.from_float([[1, 1], [1, 1]])
    assert M.rank() == 1
    ns = M.nullspace()
    assert len(ns) == 1


def test_backend_mixing_rejected():
    a = Matrix.exact([[1]])
    b = Matrix.from_float([[1.0]])
    with pytest.raises(BackendMismatch):
        a @ b


def test_matrix_power_negative():
    M = Matrix.exact([[1, 1], [0, 1]])
    assert M ** 5 == Matrix.exact([[1, 5], [0, 1]])
    assert M ** -3 == Matrix.exact([[1, -3], [0, 1]])
    assert M ** 0 == Matrix.identity(2)


def test_random_exact_inverse_roundtrip():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(1, 5)
        M = Matrix.exact([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        if not M.det():
            continue
        assert M @ M.inv() == Matrix.identity(n)


def test_apply_mixed_scalars():
    M = Matrix.exact([[1, 2], [0, 1]])
    exact = M.apply([QI(1), QI(3)])
    assert exact == [QI(7), QI(3)]
    mixed = M.apply([1 + 0j, 0.5j])
    assert abs(mixed[0] - (1 + 1j)) < 1e-15
