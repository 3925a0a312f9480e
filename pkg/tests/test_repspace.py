import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from logvvmf.errors import (DimensionMismatch, NonUnitaryEigenvalue,
                            RelationViolation, SingularMatrix)
from logvvmf.linalg import EXACT, Matrix, QI
from logvvmf.modgroup import (I, NEG_I, S, T, GeneratorWord, T_power, compose,
                              random_unimodular, word_decompose)
from logvvmf.repspace import (Representation, conjugate,
                              find_intertwiner, modified_jordan_T,
                              relation_residual, rep_evaluate,
                              rep_evaluate_word, sigma_rep, sym_power_image,
                              sym_power_rep, trivial_rep)


def rand_invertible(rng, n, bound=3):
    while True:
        M = Matrix.exact([[rng.randint(-bound, bound) for _ in range(n)]
                          for _ in range(n)])
        if M.det():
            return M


def test_relation_enforcement():
    with pytest.raises(RelationViolation):
        Representation(Matrix.exact([[1]]), Matrix.exact([[2]]))
    # valid one-dimensional rep: chi(S) = -1, chi(T) = -1
    Representation(Matrix.exact([[-1]]), Matrix.exact([[-1]]))


def test_sym_power_examples():
    r1 = sym_power_rep(1)
    assert r1.S_img == Matrix.exact([[1]]) and r1.T_img == Matrix.exact([[1]])
    assert sym_power_rep(2).S_img == Matrix.exact([[0, -1], [1, 0]])
    # p=3: T sends X^2 -> X^2+2XY+Y^2, XY -> XY+Y^2, Y^2 -> Y^2 (rows)
    assert sym_power_rep(3).T_img == Matrix.exact([[1, 2, 1], [0, 1, 1], [0, 0, 1]])


def test_sym_power_S_squared_sign():
    for p in range(1, 9):
        r = sym_power_rep(p)
        sq = r.S_img @ r.S_img
        assert sq == Matrix.identity(p).scale(QI((-1) ** (p - 1)))


def test_sym_power_is_homomorphism_on_products():
    rng = random.Random(3)
    for _ in range(20):
        g = random_unimodular(rng, 9)
        h = random_unimodular(rng, 9)
        p = rng.randint(1, 5)
        assert sym_power_image(compose(g, h), p) == \
            sym_power_image(g, p) @ sym_power_image(h, p)


def test_sigma_examples():
    r = sigma_rep(1)
    assert r.S_img == Matrix.exact([[1]])
    r2 = sigma_rep(2)
    assert r2.T_img == Matrix.exact([[1, 1], [0, 1]])
    assert r2.S_img == Matrix.exact([[0, -1], [1, 0]])


def test_relations_hold_exactly():
    for p in range(1, 9):
        for rep in (sym_power_rep(p), sigma_rep(p)):
            assert relation_residual(rep.S_img, rep.T_img) == 0.0


def test_rep_evaluate_examples():
    rep = sigma_rep(2)
    assert rep_evaluate(rep, I) == Matrix.identity(2)
    assert rep_evaluate(rep, NEG_I) == rep.S_img @ rep.S_img
    assert rep_evaluate(rep, T_power(3)) == Matrix.exact([[1, 3], [0, 1]])


def test_two_word_well_definedness():
    rng = random.Random(1)
    rep = sigma_rep(3)
    for _ in range(100):
        g = random_unimodular(rng, 1000)
        w1 = word_decompose(g)
        neg_word = word_decompose(UnimodularMatrix_neg(g))
        w2 = GeneratorWord(not neg_word.negate, ("S", "S") + neg_word.tokens)
        assert rep_evaluate_word(rep, w1) == rep_evaluate_word(rep, w2)


def UnimodularMatrix_neg(g):
    return type(g)(-g.a, -g.b, -g.c, -g.d)


def test_intertwiner_sigma_sym_power():
    for p in range(1, 9):
        A = find_intertwiner(sigma_rep(p), sym_power_rep(p))
        assert A is not None
        for x, y in ((sigma_rep(p).S_img, sym_power_rep(p).S_img),
                     (sigma_rep(p).T_img, sym_power_rep(p).T_img)):
            assert A @ x == y @ A


def test_intertwiner_construct_then_solve():
    rng = random.Random(6)
    for p in (2, 3, 4):
        rep = sym_power_rep(p)
        A0 = rand_invertible(rng, p)
        rep2 = conjugate(rep, A0)
        A = find_intertwiner(rep, rep2)
        assert A is not None
        assert A @ rep.S_img == rep2.S_img @ A
        assert A @ rep.T_img == rep2.T_img @ A


def test_intertwiner_absent():
    r1 = Representation(Matrix.exact([[1]]), Matrix.exact([[1]]))
    r2 = Representation(Matrix.exact([[-1]]), Matrix.exact([[-1]]))
    assert find_intertwiner(r1, r2) is None
    with pytest.raises(DimensionMismatch):
        find_intertwiner(r1, sigma_rep(2))


def test_identity_is_valid_intertwiner_for_equal_reps():
    rep = sigma_rep(3)
    A = find_intertwiner(rep, rep)
    assert A is not None
    assert A @ rep.S_img == rep.S_img @ A


def test_conjugate_roundtrip_and_relations():
    rng = random.Random(2)
    rep = sym_power_rep(3)
    for _ in range(5):
        A = rand_invertible(rng, 3)
        c = conjugate(rep, A)                       # relations re-checked inside
        back = conjugate(c, A.inv())
        assert back.S_img == rep.S_img and back.T_img == rep.T_img
    with pytest.raises(SingularMatrix):
        conjugate(rep, Matrix.zeros(3, 3))


def test_jordan_identity_matrix():
    d = modified_jordan_T(Matrix.exact([[1, 0], [0, 1]]))
    assert d.blocks == ((Fraction(0), 1), (Fraction(0), 1))
    assert d.P.backend == EXACT


def test_jordan_already_modified():
    d = modified_jordan_T(Matrix.exact([[1, 0], [1, 1]]))
    assert d.blocks == ((Fraction(0), 2),)
    Tm = Matrix.exact([[1, 0], [1, 1]])
    assert d.P @ d.block_matrix() @ d.P.inv() == Tm


def test_jordan_phase_extraction():
    w = cmath.exp(2j * math.pi / 3)
    d = modified_jordan_T(Matrix.from_float([[w, 0], [0, w ** 2]]))
    assert set(d.blocks) == {(Fraction(1, 3), 1), (Fraction(2, 3), 1)}


def test_jordan_sigma_T_is_single_block():
    for p in (2, 3, 4, 5):
        rep = sigma_rep(p)
        d = modified_jordan_T(rep)
        assert d.blocks == ((Fraction(0), p),)
        assert d.P @ d.block_matrix() @ d.P.inv() == rep.T_img


def test_jordan_float_reassembly():
    lam = cmath.exp(2j * math.pi / 3)
    J = np.array([[lam, 0, 0], [lam, lam, 0], [0, 0, 1]], dtype=complex)
    rng = np.random.default_rng(1)
    Q = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    Tm = Q @ J @ np.linalg.inv(Q)
    d = modified_jordan_T(Matrix.from_float(Tm))
    assert d.blocks == ((Fraction(1, 3), 2), (Fraction(0), 1))
    P = d.P.to_numpy()
    resid = np.linalg.norm(P @ d.block_matrix().to_numpy() @ np.linalg.inv(P) - Tm)
    assert resid < 1e-8


def test_jordan_exact_mixed_blocks():
    Texact = Matrix.exact([[-1, 0, 0], [-1, -1, 0], [0, 0, 1]])
    A = Matrix.exact([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    Tc = A @ Texact @ A.inv()
    d = modified_jordan_T(Tc)
    assert d.blocks == ((Fraction(1, 2), 2), (Fraction(0), 1))
    assert d.P.backend == EXACT
    assert d.P @ d.block_matrix() @ d.P.inv() == Tc


def test_jordan_rejects_nonunitary():
    with pytest.raises(NonUnitaryEigenvalue):
        modified_jordan_T(Matrix.from_float([[2, 0], [0, 1]]))


def test_jordan_ambiguous_clustering():
    # two genuinely distinct eigenvalues closer than the clustering tolerance
    from logvvmf.errors import IllConditioned
    eps = 5e-7
    Tm = Matrix.from_float([[cmath.exp(1j * eps), 0], [0, 1]])
    with pytest.raises(IllConditioned):
        modified_jordan_T(Tm)


def test_block_ordering_decreasing():
    Tm = Matrix.exact([[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    d = modified_jordan_T(Tm)
    sizes = [m for _, m in d.blocks]
    assert sizes == sorted(sizes, reverse=True) == [2, 1]


def test_trivial_rep():
    r = trivial_rep()
    assert r.p == 1 and rep_evaluate(r, S) == Matrix.exact([[1]])


def test_sigma_word_evaluation_matches_closed_form():
    # rep_evaluate multiplies token images; the closed form expands the slash
    # action directly -- two independent routes to sigma(g)
    from logvvmf.repspace import sigma_image
    rng = random.Random(13)
    for p in (2, 3, 5):
        rep = sigma_rep(p)
        for _ in range(25):
            g = random_unimodular(rng, 300)
            assert rep_evaluate(rep, g) == sigma_image(g, p)


def test_jordan_two_chains_same_eigenvalue():
    # one eigenvalue, chains of different grades: sizes (3, 2)
    lam = QI(0, 1)
    rows = [[QI(0)] * 5 for _ in range(5)]
    for i in range(3):
        rows[i][i] = lam
        if i + 1 < 3:
            rows[i + 1][i] = lam
    for i in range(3, 5):
        rows[i][i] = lam
        if i + 1 < 5:
            rows[i + 1][i] = lam
    J = Matrix.exact(rows)
    A = Matrix.exact([[1, 0, 2, 0, 1], [0, 1, 0, 0, 0], [1, 1, 1, 0, 0],
                      [0, 2, 0, 1, 0], [0, 0, 0, 1, 1]])
    assert A.det()
    Tm = A @ J @ A.inv()
    d = modified_jordan_T(Tm)
    assert d.blocks == ((Fraction(1, 4), 3), (Fraction(1, 4), 2))
    assert d.P @ d.block_matrix() @ d.P.inv() == Tm


def test_jordan_two_chains_float_path():
    lam = cmath.exp(2j * math.pi / 5)   # not a Gaussian rational
    J = np.zeros((5, 5), dtype=complex)
    for i in range(3):
        J[i, i] = lam
        if i + 1 < 3:
            J[i + 1, i] = lam
    for i in range(3, 5):
        J[i, i] = lam
        if i + 1 < 5:
            J[i + 1, i] = lam
    rng = np.random.default_rng(3)
    Q = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    Tm = Q @ J @ np.linalg.inv(Q)
    d = modified_jordan_T(Matrix.from_float(Tm))
    assert [m for _, m in d.blocks] == [3, 2]
    assert all(mu == Fraction(1, 5) for mu, _ in d.blocks)
    P = d.P.to_numpy()
    resid = np.linalg.norm(P @ d.block_matrix().to_numpy() @ np.linalg.inv(P) - Tm)
    assert resid < 1e-8 * np.linalg.norm(Tm)
